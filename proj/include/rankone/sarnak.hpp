#pragma once

#include "rankone/mobius.hpp"
#include "rankone/words.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace rankone {

// Product of coordinate projections f = f_{n_1}...f_{n_l}; only the
// offset list matters.
struct CylinderFunction {
    std::vector<int64_t> offsets;

    explicit CylinderFunction(std::vector<int64_t> offs);
    int64_t l() const { return static_cast<int64_t>(offsets.size()); }
    int64_t delta() const;   // max |n_i|
};

struct PositionSet {
    std::vector<int64_t> positions;   // sorted
    int64_t window_begin = 0;
    int64_t window_end = 0;
    bool degenerate = false;
};

// {n in [delta, W - delta) : n + n_i in M for every i}. A window shorter
// than 2*delta yields an empty result flagged degenerate.
PositionSet m_prime(const PositionSet& M, const CylinderFunction& f);

struct CorrelationResult {
    int64_t S = 0;
    int64_t N = 0;
    int64_t n_begin = 0;   // first summed n = max(1, delta + 1)
    double s_over_n() const { return static_cast<double>(S) / static_cast<double>(N); }
};

// S = sum_{n = max(1, delta+1)}^{N} mu(n) * x(n+n_1) * ... * x(n+n_l).
// The prefix must cover index N + delta, i.e. hold at least N + delta + 1
// symbols.
CorrelationResult correlation_sum(const MobiusTable& table, const BitWord& x_prefix,
                                  const CylinderFunction& f, int64_t N);

struct ExpansionTerm {
    std::vector<int64_t> subset;   // indices into offsets, 1-based, ascending
    int sign = 1;                  // (-1)^{|subset|}
};

// The 2^l terms of prod_i (1 - (1 - x(n+n_i))): sum over subsets I of
// (-1)^{|I|} [n + n_i in M_x for all i in I]. Subsets are emitted in
// bitmask order starting from the empty set.
std::vector<ExpansionTerm> inclusion_exclusion_expand(const CylinderFunction& f);

struct DecayRow {
    int64_t N = 0;
    int64_t S = 0;
    double s_over_n = 0.0;
    double mask_density = 0.0;   // fraction of summed n with product term 1
};

// One row per checkpoint, one pass over n. Checkpoints must be positive
// and are processed in sorted order.
std::vector<DecayRow> decay_curve(const MobiusTable& table, const BitWord& x_prefix,
                                  const CylinderFunction& f,
                                  std::span<const int64_t> checkpoints);

// Same, with the prefix drawn from the parameters' limit word.
std::vector<DecayRow> decay_curve(const MobiusTable& table, const RankOneParams& params,
                                  const CylinderFunction& f,
                                  std::span<const int64_t> checkpoints,
                                  int64_t max_bits = kDefaultBitBudget);

} // namespace rankone
