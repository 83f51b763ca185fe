#pragma once

#include "rankone/words.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rankone {

// Zero-set decomposition: the window's zero set is the union of copies of
// A translated by the offsets. The union identity is only meaningful up
// to the start of the first copy that pokes past the window, recorded as
// effective_end (<= window_end).
struct BuildingBlock {
    std::vector<int64_t> block;     // A, sorted, contains 0
    int64_t max_a = 0;
    std::vector<int64_t> offsets;   // strictly increasing, gaps > max_a
    int64_t window_end = 0;
    int64_t effective_end = 0;
    int64_t block_stage = 0;
    int64_t host_stage = 0;         // stage whose word covers the window
};

BuildingBlock block_decomposition(const RankOneParams& params, int64_t block_stage,
                                  int64_t window_end,
                                  int64_t max_bits = kDefaultBitBudget);

struct ResidueSet {
    int64_t k = 1;
    std::vector<int64_t> members;   // subset of {0..k-1}, sorted
};

struct ResidueFit {
    ResidueSet D;
    int64_t mismatches = 0;
    int64_t denominator = 0;        // max(A)
    bool degenerate = false;        // A = {0}
    double discrepancy() const {
        return degenerate ? 0.0
                          : static_cast<double>(mismatches) / static_cast<double>(denominator);
    }
};

// Minimize |{0 <= n <= max(A) : n mod k in D} symdiff A| / max(A) over all
// D. Per-class majority vote is exactly optimal (classes are disjoint);
// a class exactly half inside A is excluded.
ResidueFit optimal_residue_set(std::span<const int64_t> A, int64_t k);

struct AcccTargetResult {
    int64_t n_target = 0;
    bool conclusive = false;        // some evaluated stage has max(A) >= target
    int64_t best_stage = -1;
    double best_discrepancy = -1.0;
};

struct AcccStageInfo {
    int64_t stage = 0;
    int64_t length = 0;
    int64_t max_a = 0;
};

struct AcccKResult {
    int64_t k = 0;
    std::vector<AcccTargetResult> targets;
    bool witness = false;           // every target conclusive with discrepancy < eps
};

struct AcccReport {
    double epsilon = 0.0;
    std::vector<AcccStageInfo> stages;
    std::vector<AcccKResult> per_k;
    std::string note = "finite-horizon evidence only; no verdict on the limit property";
};

// Stage zero-sets play the role of the blocks; stages too large for the
// bit budget are left out, and a target no evaluated stage reaches is
// reported inconclusive. Parameters whose spacers are all zero describe a
// periodic word and are refused.
AcccReport accc_check(const RankOneParams& params, double epsilon,
                      std::span<const int64_t> k_candidates,
                      std::span<const int64_t> n_targets,
                      int64_t stage_bit_budget = int64_t{1} << 20);

// {2..64} plus every stage length <= max_k.
std::vector<int64_t> default_k_candidates(const RankOneParams& params,
                                          int64_t max_k = int64_t{1} << 20);

struct OdometerClauseA {
    int64_t j_star = 0;             // residue with the most of I_{m,n}
    int64_t total = 0;              // |I_{m,n}|
    int64_t outside = 0;            // members with residue != j_star
    double fraction = 0.0;          // outside / total
};

OdometerClauseA odometer_clause_a(const RankOneParams& params, int64_t m, int64_t n,
                                  int64_t k, int64_t max_count = int64_t{1} << 24);

struct OdometerClauseB {
    ResidueSet D;
    int64_t mismatches = 0;
    int64_t denominator = 0;        // |I_{l,m}|
    double discrepancy = 0.0;
};

// Same majority fit but over positions 0..|v_m| inclusive against
// I_{l,m}, normalized by |I_{l,m}|.
OdometerClauseB odometer_clause_b(const RankOneParams& params, int64_t l, int64_t m,
                                  int64_t k, int64_t max_count = int64_t{1} << 24);

} // namespace rankone
