#include "rankone/words.hpp"

#include "rankone/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace rankone {

namespace {

std::string at(const char* field, int64_t idx) {
    return std::string(field) + "[" + std::to_string(idx) + "]";
}

int64_t checked_mul(int64_t a, int64_t b, const char* what) {
    int64_t out;
    if (__builtin_mul_overflow(a, b, &out))
        throw resource_limit_error(std::string(what) + ": 63-bit position overflow");
    return out;
}

int64_t checked_add(int64_t a, int64_t b, const char* what) {
    int64_t out;
    if (__builtin_add_overflow(a, b, &out))
        throw resource_limit_error(std::string(what) + ": 63-bit position overflow");
    return out;
}

} // namespace

const char* generator_name(Generator g) {
    switch (g) {
        case Generator::Explicit: return "explicit";
        case Generator::ClassicKatok: return "classic-katok";
        case Generator::Km: return "km";
        case Generator::Constant: return "constant";
    }
    return "?";
}

void RankOneParams::finish_rows() {
    prefix_.resize(spacers_.size());
    for (size_t n = 0; n < spacers_.size(); ++n) {
        const auto& row = spacers_[n];
        auto& pre = prefix_[n];
        pre.assign(row.size() + 1, 0);
        for (size_t i = 0; i < row.size(); ++i) pre[i + 1] = pre[i] + row[i];
    }
}

RankOneParams RankOneParams::explicit_params(std::vector<int64_t> cutting,
                                             std::vector<std::vector<int64_t>> spacers) {
    if (cutting.empty()) throw std::invalid_argument("cutting: at least one stage required");
    if (spacers.size() != cutting.size())
        throw std::invalid_argument("spacers: need exactly one row per cutting entry");
    for (size_t n = 0; n < cutting.size(); ++n) {
        if (cutting[n] < 2)
            throw std::invalid_argument(at("cutting", static_cast<int64_t>(n)) + " must be > 1");
        if (static_cast<int64_t>(spacers[n].size()) != cutting[n])
            throw std::invalid_argument(at("spacers", static_cast<int64_t>(n)) + " must have " +
                                        std::to_string(cutting[n]) + " entries");
        for (size_t i = 0; i < spacers[n].size(); ++i)
            if (spacers[n][i] < 0)
                throw std::invalid_argument(at("spacers", static_cast<int64_t>(n)) +
                                            at("", static_cast<int64_t>(i)) + " must be >= 0");
    }
    RankOneParams p;
    p.generator_ = Generator::Explicit;
    p.cutting_ = std::move(cutting);
    p.spacers_ = std::move(spacers);
    p.finish_rows();
    return p;
}

RankOneParams RankOneParams::classic_katok(std::vector<int64_t> r_schedule) {
    std::vector<std::vector<int64_t>> t{{0, 1}};
    RankOneParams p = km(2, std::move(r_schedule), std::move(t));
    p.generator_ = Generator::ClassicKatok;
    return p;
}

RankOneParams RankOneParams::km(int64_t m, std::vector<int64_t> r_schedule,
                                std::vector<std::vector<int64_t>> t_table) {
    if (m < 2) throw std::invalid_argument("m must be >= 2");
    if (r_schedule.empty()) throw std::invalid_argument("cutting: at least one stage required");
    if (t_table.empty()) throw std::invalid_argument("t_table: at least one row required");
    if (t_table.size() == 1 && r_schedule.size() > 1)
        t_table.assign(r_schedule.size(), t_table[0]);
    if (t_table.size() != r_schedule.size())
        throw std::invalid_argument("t_table: need one row per stage (or a single shared row)");

    std::vector<std::vector<int64_t>> spacers(r_schedule.size());
    for (size_t n = 0; n < r_schedule.size(); ++n) {
        int64_t r = r_schedule[n];
        if (r < 2) throw std::invalid_argument(at("cutting", static_cast<int64_t>(n)) + " must be > 1");
        if (r % m != 0)
            throw std::invalid_argument(at("cutting", static_cast<int64_t>(n)) +
                                        " must be divisible by m=" + std::to_string(m));
        const auto& t = t_table[n];
        if (static_cast<int64_t>(t.size()) != m)
            throw std::invalid_argument(at("t_table", static_cast<int64_t>(n)) + " must have m=" +
                                        std::to_string(m) + " entries");
        for (size_t k = 0; k < t.size(); ++k)
            if (t[k] < 0 || t[k] > m - 1)
                throw std::invalid_argument(at("t_table", static_cast<int64_t>(n)) +
                                            at("", static_cast<int64_t>(k)) + " must lie in [0, m-1]");
        // s_{n,i} = t_{n, ceil(m*i/r)}: m constant runs of length r/m
        auto& row = spacers[n];
        row.resize(static_cast<size_t>(r));
        for (int64_t i = 1; i <= r; ++i)
            row[static_cast<size_t>(i - 1)] = t[static_cast<size_t>((m * i + r - 1) / r - 1)];
    }

    RankOneParams p;
    p.generator_ = Generator::Km;
    p.cutting_ = std::move(r_schedule);
    p.spacers_ = std::move(spacers);
    p.km_m_ = m;
    p.t_table_ = std::move(t_table);
    p.finish_rows();
    return p;
}

RankOneParams RankOneParams::constant(int64_t r, std::vector<int64_t> s_row, int64_t depth) {
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    if (r < 2) throw std::invalid_argument("cutting must be > 1");
    if (static_cast<int64_t>(s_row.size()) != r)
        throw std::invalid_argument("spacers must have " + std::to_string(r) + " entries");
    for (size_t i = 0; i < s_row.size(); ++i)
        if (s_row[i] < 0)
            throw std::invalid_argument(at("spacers", static_cast<int64_t>(i)) + " must be >= 0");
    RankOneParams p;
    p.generator_ = Generator::Constant;
    p.cutting_.assign(static_cast<size_t>(depth), r);
    p.spacers_.assign(static_cast<size_t>(depth), s_row);
    p.finish_rows();
    return p;
}

void RankOneParams::check_stage(int64_t n) const {
    if (n < 0 || n >= depth())
        throw std::out_of_range("stage row " + std::to_string(n) + " outside [0, depth)");
}

int64_t RankOneParams::cutting(int64_t n) const {
    check_stage(n);
    return cutting_[static_cast<size_t>(n)];
}

const std::vector<int64_t>& RankOneParams::spacer_row(int64_t n) const {
    check_stage(n);
    return spacers_[static_cast<size_t>(n)];
}

int64_t RankOneParams::spacer(int64_t n, int64_t i) const {
    check_stage(n);
    if (i < 1 || i > cutting_[static_cast<size_t>(n)])
        throw std::out_of_range("spacer index " + std::to_string(i) + " outside [1, r_n]");
    return spacers_[static_cast<size_t>(n)][static_cast<size_t>(i - 1)];
}

int64_t RankOneParams::spacer_sum(int64_t n) const {
    check_stage(n);
    return prefix_[static_cast<size_t>(n)].back();
}

int64_t RankOneParams::spacer_prefix(int64_t n, int64_t i) const {
    check_stage(n);
    if (i < 0 || i > cutting_[static_cast<size_t>(n)])
        throw std::out_of_range("spacer prefix index outside [0, r_n]");
    return prefix_[static_cast<size_t>(n)][static_cast<size_t>(i)];
}

int64_t RankOneParams::max_cutting() const {
    return *std::max_element(cutting_.begin(), cutting_.end());
}

int64_t RankOneParams::max_spacer() const {
    int64_t best = 0;
    for (const auto& row : spacers_)
        for (int64_t s : row) best = std::max(best, s);
    return best;
}

int64_t stage_length(const RankOneParams& params, int64_t n) {
    if (n < 0 || n > params.depth())
        throw std::out_of_range("stage_length: stage outside [0, depth]");
    int64_t len = 1;
    for (int64_t j = 0; j < n; ++j) {
        len = checked_mul(len, params.cutting(j), "stage_length");
        len = checked_add(len, params.spacer_sum(j), "stage_length");
    }
    return len;
}

int64_t zero_count(const RankOneParams& params, int64_t n) {
    if (n < 0 || n > params.depth())
        throw std::out_of_range("zero_count: stage outside [0, depth]");
    int64_t count = 1;
    for (int64_t j = 0; j < n; ++j) count = checked_mul(count, params.cutting(j), "zero_count");
    return count;
}

StageWord build_stage(const RankOneParams& params, int64_t n, int64_t max_bits) {
    int64_t final_len = stage_length(params, n);
    if (final_len > max_bits)
        throw resource_limit_error("build_stage: stage " + std::to_string(n) + " needs " +
                                   std::to_string(final_len) + " bits, budget " +
                                   std::to_string(max_bits));
    BitWord w;
    w.push_back(false);
    for (int64_t j = 0; j < n; ++j) {
        BitWord next;
        next.reserve(stage_length(params, j + 1));
        int64_t r = params.cutting(j);
        for (int64_t i = 1; i <= r; ++i) {
            next.append(w);
            next.append_ones(params.spacer(j, i));
        }
        w = std::move(next);
    }
    return StageWord{n, std::move(w)};
}

std::vector<int64_t> zero_positions(const StageWord& word) {
    return word.bits.zero_positions();
}

int64_t occurrence_count(const RankOneParams& params, int64_t m, int64_t n) {
    if (m < 0 || m > n || n > params.depth())
        throw std::invalid_argument("occurrence_count: need 0 <= m <= n <= depth");
    int64_t count = 1;
    for (int64_t j = m; j < n; ++j)
        count = checked_mul(count, params.cutting(j), "occurrence_count");
    return count;
}

void for_each_occurrence(const RankOneParams& params, int64_t m, int64_t n,
                         int64_t max_start, const std::function<void(int64_t)>& visit) {
    if (m < 0 || m > n || n > params.depth())
        throw std::invalid_argument("for_each_occurrence: need 0 <= m <= n <= depth");
    stage_length(params, n);  // force the overflow check once
    std::vector<int64_t> len(static_cast<size_t>(n - m), 0);
    for (int64_t j = m; j < n; ++j) len[static_cast<size_t>(j - m)] = stage_length(params, j);

    std::function<void(int64_t, int64_t)> rec = [&](int64_t j, int64_t base) {
        if (j == m) {
            visit(base);
            return;
        }
        int64_t r = params.cutting(j - 1);
        int64_t vlen = len[static_cast<size_t>(j - 1 - m)];
        for (int64_t i = 1; i <= r; ++i) {
            int64_t start = base + (i - 1) * vlen + params.spacer_prefix(j - 1, i - 1);
            if (start > max_start) break;
            rec(j - 1, start);
        }
    };
    rec(n, 0);
}

OccurrenceIndex occurrence_index(const RankOneParams& params, int64_t m, int64_t n,
                                 int64_t max_count) {
    int64_t count = occurrence_count(params, m, n);
    if (count > max_count)
        throw resource_limit_error("occurrence_index: |I| = " + std::to_string(count) +
                                   " exceeds budget " + std::to_string(max_count));
    OccurrenceIndex out;
    out.m = m;
    out.n = n;
    out.indices.reserve(static_cast<size_t>(count));
    for_each_occurrence(params, m, n, stage_length(params, n),
                        [&](int64_t i) { out.indices.push_back(i); });
    return out;
}

BitWord canonical_prefix(const RankOneParams& params, int64_t N, int64_t max_bits) {
    if (N < 1) throw std::invalid_argument("canonical_prefix: N must be >= 1");
    if (N > max_bits)
        throw resource_limit_error("canonical_prefix: N = " + std::to_string(N) +
                                   " exceeds bit budget " + std::to_string(max_bits));
    int64_t h = 0;
    while (stage_length(params, h) < N) {
        if (++h > params.depth())
            throw resource_limit_error("canonical_prefix: depth " + std::to_string(params.depth()) +
                                       " insufficient for prefix length " + std::to_string(N));
    }
    if (h == 0) {
        BitWord w;
        w.push_back(false);
        return w;
    }

    // |v_{h-1}| < N <= max_bits, so the full previous stage fits the budget.
    BitWord prev = build_stage(params, h - 1, max_bits).bits;
    BitWord out;
    out.reserve(N);
    int64_t r = params.cutting(h - 1);
    for (int64_t i = 1; i <= r && out.size() < N; ++i) {
        out.append(prev, std::min(prev.size(), N - out.size()));
        if (out.size() < N)
            out.append_ones(std::min(params.spacer(h - 1, i), N - out.size()));
    }
    return out;
}

namespace {

// Smallest period via the classic border table; len = |w| - border(|w|).
int64_t smallest_period_of(const BitWord& w) {
    int64_t len = w.size();
    std::vector<int64_t> fail(static_cast<size_t>(len), 0);
    for (int64_t i = 1; i < len; ++i) {
        int64_t j = fail[static_cast<size_t>(i - 1)];
        while (j > 0 && w.bit(i) != w.bit(j)) j = fail[static_cast<size_t>(j - 1)];
        if (w.bit(i) == w.bit(j)) ++j;
        fail[static_cast<size_t>(i)] = j;
    }
    return len - fail[static_cast<size_t>(len - 1)];
}

} // namespace

ParamsReport params_report(const RankOneParams& params, int64_t horizon,
                           int64_t probe_bit_budget) {
    if (horizon < 1 || horizon > params.depth())
        throw std::invalid_argument("params_report: horizon outside [1, depth]");

    ParamsReport rep;
    rep.horizon = horizon;
    for (int64_t n = 0; n < horizon; ++n) {
        int64_t r = params.cutting(n);
        rep.cutting.push_back(r);
        rep.spacer_totals.push_back(params.spacer_sum(n));
        rep.bound_witness = std::max(rep.bound_witness, r);
        for (int64_t s : params.spacer_row(n)) rep.bound_witness = std::max(rep.bound_witness, s);
        int64_t next_len = stage_length(params, n + 1);
        rep.finiteness_terms.push_back(static_cast<double>(params.spacer_sum(n)) /
                                       static_cast<double>(next_len));
        rep.finiteness_partial_sum += Rational(params.spacer_sum(n), next_len);
    }
    rep.finiteness_partial_value = static_cast<double>(rep.finiteness_partial_sum);

    // Heuristic aperiodicity probe on the largest stage that fits the budget.
    int64_t h = 0;
    while (h < horizon) {
        int64_t next_len;
        try {
            next_len = stage_length(params, h + 1);
        } catch (const resource_limit_error&) {
            break;
        }
        if (next_len > probe_bit_budget) break;
        ++h;
    }
    if (stage_length(params, h) <= probe_bit_budget) {
        StageWord probe = build_stage(params, h, probe_bit_budget);
        rep.heuristic_stage = h;
        rep.smallest_period = smallest_period_of(probe.bits);
        int64_t len = probe.length();
        bool repetition = rep.smallest_period <= len / 2 && len % rep.smallest_period == 0;
        rep.aperiodic_heuristic = !repetition;
    }
    return rep;
}

} // namespace rankone
