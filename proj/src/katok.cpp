#include "rankone/katok.hpp"

#include "rankone/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace rankone {

KatokParams make_katok(int64_t m, std::vector<int64_t> r_schedule,
                       std::vector<std::vector<int64_t>> t_table) {
    RankOneParams checked = RankOneParams::km(m, r_schedule, t_table);
    KatokParams kp;
    kp.m = m;
    kp.r_schedule = std::move(r_schedule);
    kp.t_table = checked.t_table();
    return kp;
}

RankOneParams to_rank_one(const KatokParams& kp) {
    return RankOneParams::km(kp.m, kp.r_schedule, kp.t_table);
}

std::vector<int64_t> km_spacers(const KatokParams& kp, int64_t n) {
    if (n < 0 || n >= static_cast<int64_t>(kp.r_schedule.size()))
        throw std::out_of_range("km_spacers: stage outside [0, depth)");
    int64_t r = kp.r_schedule[static_cast<size_t>(n)];
    if (r % kp.m != 0)
        throw std::invalid_argument("km_spacers: r_n not divisible by m");
    const auto& t = kp.t_table[static_cast<size_t>(n)];
    std::vector<int64_t> row(static_cast<size_t>(r));
    for (int64_t i = 1; i <= r; ++i)
        row[static_cast<size_t>(i - 1)] = t[static_cast<size_t>((kp.m * i + r - 1) / r - 1)];
    return row;
}

SegmentationRow segmentation(const KatokParams& kp, const RankOneParams& params, int64_t n) {
    if (n < 0 || n >= params.depth())
        throw std::out_of_range("segmentation: stage outside [0, depth)");
    int64_t r = params.cutting(n);
    if (n >= static_cast<int64_t>(kp.r_schedule.size()) ||
        kp.r_schedule[static_cast<size_t>(n)] != r)
        throw std::invalid_argument("segmentation: params disagree with the Katok schedule");

    int64_t vlen = stage_length(params, n);
    const auto& t = kp.t_table[static_cast<size_t>(n)];
    SegmentationRow row;
    row.stage = n;
    row.sigma.assign(static_cast<size_t>(kp.m) + 1, 0);
    row.q.assign(static_cast<size_t>(kp.m), 0);
    for (int64_t l = 0; l < kp.m; ++l) {
        int64_t period = vlen + t[static_cast<size_t>(l)];
        row.q[static_cast<size_t>(l)] = period;
        row.sigma[static_cast<size_t>(l) + 1] =
            row.sigma[static_cast<size_t>(l)] + period * (r / kp.m);
    }
    if (row.sigma.back() != stage_length(params, n + 1))
        throw integrity_error("segmentation: boundaries do not close at |v_{n+1}|");
    return row;
}

bool ccc_check(std::span<const int64_t> S, int64_t q, int64_t a, int64_t b) {
    if (q < 1) throw std::invalid_argument("ccc_check: q must be >= 1");
    if (b < a) throw std::invalid_argument("ccc_check: interval end before start");
    if (b - a <= q) return true;

    auto contains = [&](int64_t v) {
        return std::binary_search(S.begin(), S.end(), v);
    };
    // s in [a, b-q) forces s+q in; s in [a+q, b) forces s-q in. Together
    // these give the two directions of the equivalence.
    auto it = std::lower_bound(S.begin(), S.end(), a);
    for (; it != S.end() && *it < b - q; ++it)
        if (!contains(*it + q)) return false;
    it = std::lower_bound(S.begin(), S.end(), a + q);
    for (; it != S.end() && *it < b; ++it)
        if (!contains(*it - q)) return false;
    return true;
}

ChangePoints change_points(std::span<const int64_t> spacer_row) {
    int64_t r = static_cast<int64_t>(spacer_row.size());
    if (r < 2) throw std::invalid_argument("change_points: row must have r >= 2 entries");
    ChangePoints out;
    out.r = r;
    out.c_list.push_back(1);
    for (int64_t i = 2; i <= r - 1; ++i)
        if (spacer_row[static_cast<size_t>(i - 2)] != spacer_row[static_cast<size_t>(i - 1)])
            out.c_list.push_back(i);
    out.c_list.push_back(r);
    return out;
}

namespace {

// loglog with the guard rule: any intermediate log <= 1 disqualifies the
// stage (the next log would be nonpositive).
bool loglog_of(double x, double& out) {
    double l1 = std::log(x);
    if (l1 <= 1.0) return false;
    out = std::log(l1);
    return true;
}

bool logloglog_of(double x, double& out) {
    double l2;
    if (!loglog_of(x, l2)) return false;
    if (l2 <= 1.0) return false;
    out = std::log(l2);
    return true;
}

} // namespace

ConditionReport condition_report(const RankOneParams& params, int64_t horizon,
                                 std::span<const int64_t> m_candidates,
                                 std::span<const double> epsilons,
                                 int64_t tail_window) {
    if (horizon < 1 || horizon > params.depth())
        throw std::invalid_argument("condition_report: horizon outside [1, depth]");
    if (tail_window < 1)
        throw std::invalid_argument("condition_report: tail window must be >= 1");

    ConditionReport rep;
    rep.horizon = horizon;
    rep.tail_window = tail_window;

    double running_max = 0.0;
    double len = 1.0;  // |v_n|, tracked in doubles so deep stages stay finite
    std::vector<double> eligible_terms;
    for (int64_t n = 0; n < horizon; ++n) {
        StageConditionRow row;
        row.stage = n;
        row.r = params.cutting(n);
        row.length = len;
        row.p = change_points(params.spacer_row(n)).p();

        double num, den;
        row.log_eligible = row.r >= 16 && len >= 16.0 &&
                           loglog_of(static_cast<double>(row.r), num) &&
                           logloglog_of(len, den);
        if (row.log_eligible) {
            row.growth_term = num / den;
            eligible_terms.push_back(row.growth_term);
        }

        double rp = static_cast<double>(row.r) / static_cast<double>(row.p);
        row.change_eligible = row.r >= 16 && rp >= 16.0 && loglog_of(rp, num) &&
                              loglog_of(static_cast<double>(row.r), den);
        if (row.change_eligible) row.change_term = num / den;

        int64_t ssum = params.spacer_sum(n);
        row.spacer_ratio = static_cast<double>(ssum) / (static_cast<double>(row.r) * len);
        running_max = std::max(running_max, row.spacer_ratio);
        row.spacer_ratio_running_max = running_max;

        int64_t nonzero = 0;
        for (int64_t s : params.spacer_row(n))
            if (s != 0) ++nonzero;
        row.flat_stack_ratio = static_cast<double>(nonzero) / static_cast<double>(row.r);

        rep.rows.push_back(row);
        len = len * static_cast<double>(row.r) + static_cast<double>(ssum);
    }
    rep.spacer_ratio_K = running_max;

    if (!eligible_terms.empty()) {
        rep.has_eligible = true;
        size_t tail = std::min<size_t>(static_cast<size_t>(tail_window), eligible_terms.size());
        auto begin = eligible_terms.end() - static_cast<std::ptrdiff_t>(tail);
        rep.growth_tail_min = *std::min_element(begin, eligible_terms.end());
        rep.growth_tail_max = *std::max_element(begin, eligible_terms.end());
    }

    for (int64_t m : m_candidates) {
        if (m < 1) throw std::invalid_argument("condition_report: m candidates must be >= 1");
        for (double eps : epsilons) {
            if (!(eps > 0.0 && eps < 1.0))
                throw std::invalid_argument("condition_report: epsilon must lie in (0, 1)");
            SpacerValueCell cell;
            cell.m = m;
            cell.epsilon = eps;
            cell.all_pass = true;
            Rational keep_share = Rational(1) - rational_from_double(eps);
            for (int64_t n = 0; n < horizon; ++n) {
                // |A| is maximized by keeping the m most frequent values.
                std::map<int64_t, int64_t> freq;
                for (int64_t s : params.spacer_row(n)) ++freq[s];
                std::vector<int64_t> counts;
                counts.reserve(freq.size());
                for (const auto& [v, c] : freq) counts.push_back(c);
                std::sort(counts.rbegin(), counts.rend());
                int64_t kept = 0;
                for (size_t i = 0; i < counts.size() && i < static_cast<size_t>(m); ++i)
                    kept += counts[i];
                bool pass = Rational(kept) >= keep_share * Rational(params.cutting(n));
                cell.per_stage.push_back(pass);
                cell.all_pass = cell.all_pass && pass;
            }
            rep.value_table.push_back(std::move(cell));
        }
    }
    return rep;
}

} // namespace rankone
