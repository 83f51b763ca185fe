#pragma once

#include "rankone/words.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace rankone {

// Spacer schemes made of m constant runs per stage: row n is r_n/m copies
// of each of t_{n,1..m} in order. classic Katok is m=2, t=(0,1).
struct KatokParams {
    int64_t m = 2;
    std::vector<int64_t> r_schedule;
    std::vector<std::vector<int64_t>> t_table;   // one row per stage after expansion
};

// Validates m >= 2, m | r_n, t entries in [0, m-1]; a single t row is
// shared across stages.
KatokParams make_katok(int64_t m, std::vector<int64_t> r_schedule,
                       std::vector<std::vector<int64_t>> t_table);

RankOneParams to_rank_one(const KatokParams& kp);

// s_{n,i} = t_{n, ceil(m*i/r_n)} for 1 <= i <= r_n.
std::vector<int64_t> km_spacers(const KatokParams& kp, int64_t n);

// Stage n+1 splits into m segments u_{n,1..m}; sigma holds the m+1
// boundaries and q[l] = |v_n| + t_{n,l+1} is the period of the zero set
// on segment l.
struct SegmentationRow {
    int64_t stage = 0;
    std::vector<int64_t> sigma;   // size m+1, sigma[0] = 0, sigma[m] = |v_{n+1}|
    std::vector<int64_t> q;       // size m
};

SegmentationRow segmentation(const KatokParams& kp, const RankOneParams& params, int64_t n);

// true iff membership in S is q-periodic on [a, b): n in S <=> n+q in S
// for every n in [a, b-q). Vacuous when b - a <= q. S must be sorted.
bool ccc_check(std::span<const int64_t> S, int64_t q, int64_t a, int64_t b);

// C_n = {1, r_n} union {2 <= i <= r_n-1 : s_{n,i-1} != s_{n,i}}, 1-based.
struct ChangePoints {
    int64_t r = 0;
    std::vector<int64_t> c_list;
    int64_t p() const { return static_cast<int64_t>(c_list.size()); }
};

ChangePoints change_points(std::span<const int64_t> spacer_row);

struct StageConditionRow {
    int64_t stage = 0;
    int64_t r = 0;
    int64_t p = 0;                   // |C_n|
    double length = 0.0;             // |v_n|, double so deep stages stay finite
    bool log_eligible = false;       // r >= 16 and |v_n| >= 16
    double growth_term = 0.0;        // loglog(r) / logloglog(|v_n|)
    bool change_eligible = false;    // r >= 16 and r/p >= 16
    double change_term = 0.0;        // loglog(r/p) / loglog(r)
    double spacer_ratio = 0.0;       // sum_i s_{n,i} / (r * |v_n|)
    double spacer_ratio_running_max = 0.0;
    double flat_stack_ratio = 0.0;   // nonzero spacers / r
};

struct SpacerValueCell {
    int64_t m = 0;
    double epsilon = 0.0;
    std::vector<bool> per_stage;     // stage n passes: some A, |A| >= (1-eps)r_n,
    bool all_pass = false;           // using <= m distinct spacer values
};

struct ConditionReport {
    int64_t horizon = 0;
    int64_t tail_window = 0;
    std::vector<StageConditionRow> rows;
    bool has_eligible = false;
    double growth_tail_min = 0.0;    // liminf framing over the eligible tail
    double growth_tail_max = 0.0;    // limsup framing of the same terms
    double spacer_ratio_K = 0.0;     // final running max
    std::vector<SpacerValueCell> value_table;
};

// All logarithms are natural; stages too small for an iterated log are
// skipped and flagged, never extrapolated. The (1-eps)r_n comparison is
// exact rational.
ConditionReport condition_report(const RankOneParams& params, int64_t horizon,
                                 std::span<const int64_t> m_candidates,
                                 std::span<const double> epsilons,
                                 int64_t tail_window = 3);

} // namespace rankone
