#pragma once

#include "rankone/bitword.hpp"
#include "rankone/rational.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rankone {

// Default materialization budget: 2^31 bits (256 MB of word).
inline constexpr int64_t kDefaultBitBudget = int64_t{1} << 31;

enum class Generator { Explicit, ClassicKatok, Km, Constant };

const char* generator_name(Generator g);

// Cutting/spacer data for the word recursion
//   v_0 = "0",  v_{n+1} = v_n 1^{s_{n,1}} v_n 1^{s_{n,2}} ... v_n 1^{s_{n,r_n}}
// with r_n >= 2 and s_{n,i} >= 0. Stage rows exist for 0 <= n < depth, so
// words v_0..v_depth are available.
class RankOneParams {
public:
    static RankOneParams explicit_params(std::vector<int64_t> cutting,
                                         std::vector<std::vector<int64_t>> spacers);

    // First half of each row 0, second half 1; every r_n must be even.
    static RankOneParams classic_katok(std::vector<int64_t> r_schedule);

    // Row n is m constant runs of length r_n/m with values t_table[n];
    // a single t row is reused for every stage.
    static RankOneParams km(int64_t m, std::vector<int64_t> r_schedule,
                            std::vector<std::vector<int64_t>> t_table);

    static RankOneParams constant(int64_t r, std::vector<int64_t> s_row, int64_t depth);

    Generator generator() const { return generator_; }
    int64_t depth() const { return static_cast<int64_t>(cutting_.size()); }

    int64_t cutting(int64_t n) const;                      // r_n
    const std::vector<int64_t>& spacer_row(int64_t n) const;
    int64_t spacer(int64_t n, int64_t i) const;            // s_{n,i}, 1 <= i <= r_n
    int64_t spacer_sum(int64_t n) const;                   // sum_i s_{n,i}
    int64_t spacer_prefix(int64_t n, int64_t i) const;     // sum_{k<=i} s_{n,k}, 0 <= i <= r_n
    int64_t max_cutting() const;
    int64_t max_spacer() const;

    // km bookkeeping (m = 0 and empty table for other generators)
    int64_t km_m() const { return km_m_; }
    const std::vector<std::vector<int64_t>>& t_table() const { return t_table_; }

private:
    RankOneParams() = default;
    void finish_rows();
    void check_stage(int64_t n) const;

    Generator generator_ = Generator::Explicit;
    std::vector<int64_t> cutting_;
    std::vector<std::vector<int64_t>> spacers_;
    std::vector<std::vector<int64_t>> prefix_;   // prefix_[n][i] = sum_{k<=i} s_{n,k}
    int64_t km_m_ = 0;
    std::vector<std::vector<int64_t>> t_table_;
};

struct StageWord {
    int64_t stage = 0;
    BitWord bits;
    int64_t length() const { return bits.size(); }
};

// |v_n| and the zero count r_0*...*r_{n-1}, closed-form, no word built.
// 63-bit overflow raises resource_limit_error.
int64_t stage_length(const RankOneParams& params, int64_t n);
int64_t zero_count(const RankOneParams& params, int64_t n);

StageWord build_stage(const RankOneParams& params, int64_t n,
                      int64_t max_bits = kDefaultBitBudget);

std::vector<int64_t> zero_positions(const StageWord& word);

struct OccurrenceIndex {
    int64_t m = 0;
    int64_t n = 0;
    std::vector<int64_t> indices;   // sorted start positions of v_m copies in v_n
};

// Product r_m * ... * r_{n-1}; resource_limit_error on 63-bit overflow.
int64_t occurrence_count(const RankOneParams& params, int64_t m, int64_t n);

// Visit the members of I_{m,n} in ascending order, pruning once a start
// position would exceed max_start. The word itself is never built.
void for_each_occurrence(const RankOneParams& params, int64_t m, int64_t n,
                         int64_t max_start, const std::function<void(int64_t)>& visit);

OccurrenceIndex occurrence_index(const RankOneParams& params, int64_t m, int64_t n,
                                 int64_t max_count = int64_t{1} << 24);

// Length-N prefix of the limit word V; only the last full stage below N
// is materialized. resource_limit_error when depth cannot reach N or the
// needed stage exceeds max_bits.
BitWord canonical_prefix(const RankOneParams& params, int64_t N,
                         int64_t max_bits = kDefaultBitBudget);

struct ParamsReport {
    int64_t horizon = 0;
    bool bounded_up_to_horizon = true;     // finite data is always bounded;
    int64_t bound_witness = 0;             // the witness is what matters
    std::vector<int64_t> cutting;          // r_n, n < horizon
    std::vector<int64_t> spacer_totals;    // sum_i s_{n,i}, n < horizon
    std::vector<double> finiteness_terms;  // (|v_{n+1}| - r_n |v_n|) / |v_{n+1}|
    Rational finiteness_partial_sum;       // exact running total at the horizon
    double finiteness_partial_value = 0.0;
    bool aperiodic_heuristic = true;       // no period <= len/2 divides the probe stage
    int64_t heuristic_stage = -1;          // -1 when no stage fit the probe budget
    int64_t smallest_period = 0;
};

ParamsReport params_report(const RankOneParams& params, int64_t horizon,
                           int64_t probe_bit_budget = int64_t{1} << 24);

} // namespace rankone
