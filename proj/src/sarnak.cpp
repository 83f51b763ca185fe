#include "rankone/sarnak.hpp"

#include "rankone/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace rankone {

CylinderFunction::CylinderFunction(std::vector<int64_t> offs) : offsets(std::move(offs)) {
    if (offsets.empty())
        throw std::invalid_argument("CylinderFunction: at least one offset required");
}

int64_t CylinderFunction::delta() const {
    int64_t d = 0;
    for (int64_t o : offsets) d = std::max(d, o < 0 ? -o : o);
    return d;
}

PositionSet m_prime(const PositionSet& M, const CylinderFunction& f) {
    if (M.window_end <= M.window_begin)
        throw std::invalid_argument("m_prime: window is empty");
    int64_t delta = f.delta();

    PositionSet out;
    out.window_begin = M.window_begin + delta;
    out.window_end = M.window_end - delta;
    if (out.window_begin >= out.window_end) {
        out.degenerate = true;
        return out;
    }

    auto contains = [&](int64_t v) {
        return std::binary_search(M.positions.begin(), M.positions.end(), v);
    };
    // Candidates are M shifted by the first offset; the rest are checked.
    for (int64_t m : M.positions) {
        int64_t n = m - f.offsets[0];
        if (n < out.window_begin || n >= out.window_end) continue;
        bool all = true;
        for (size_t i = 1; i < f.offsets.size() && all; ++i)
            all = contains(n + f.offsets[i]);
        if (all) out.positions.push_back(n);
    }
    return out;
}

CorrelationResult correlation_sum(const MobiusTable& table, const BitWord& x_prefix,
                                  const CylinderFunction& f, int64_t N) {
    if (N < 1) throw std::invalid_argument("correlation_sum: N must be >= 1");
    if (N > table.limit())
        throw std::out_of_range("correlation_sum: N exceeds table limit");
    int64_t delta = f.delta();
    if (x_prefix.size() < N + delta + 1)
        throw std::out_of_range("correlation_sum: prefix too short, need N + delta + 1 symbols");

    CorrelationResult out;
    out.N = N;
    out.n_begin = std::max<int64_t>(1, delta + 1);
    for (int64_t n = out.n_begin; n <= N; ++n) {
        int mu = table.mu(n);
        if (mu == 0) continue;
        bool product = true;
        for (int64_t o : f.offsets)
            if (!x_prefix.bit(n + o)) {
                product = false;
                break;
            }
        if (product) out.S += mu;
    }
    return out;
}

std::vector<ExpansionTerm> inclusion_exclusion_expand(const CylinderFunction& f) {
    int64_t l = f.l();
    if (l > 20)
        throw resource_limit_error("inclusion_exclusion_expand: 2^" + std::to_string(l) +
                                   " terms exceed the expansion budget");
    std::vector<ExpansionTerm> terms;
    terms.reserve(size_t{1} << l);
    for (uint32_t mask = 0; mask < (uint32_t{1} << l); ++mask) {
        ExpansionTerm t;
        for (int64_t i = 0; i < l; ++i)
            if (mask & (uint32_t{1} << i)) t.subset.push_back(i + 1);
        t.sign = (t.subset.size() % 2 == 0) ? 1 : -1;
        terms.push_back(std::move(t));
    }
    return terms;
}

std::vector<DecayRow> decay_curve(const MobiusTable& table, const BitWord& x_prefix,
                                  const CylinderFunction& f,
                                  std::span<const int64_t> checkpoints) {
    if (checkpoints.empty()) throw std::invalid_argument("decay_curve: no checkpoints");
    std::vector<int64_t> points(checkpoints.begin(), checkpoints.end());
    std::sort(points.begin(), points.end());
    if (points.front() < 1)
        throw std::invalid_argument("decay_curve: checkpoints must be >= 1");
    int64_t max_n = points.back();
    if (max_n > table.limit())
        throw std::out_of_range("decay_curve: checkpoint exceeds table limit");
    int64_t delta = f.delta();
    if (x_prefix.size() < max_n + delta + 1)
        throw std::out_of_range("decay_curve: prefix too short, need max checkpoint + delta + 1");

    std::vector<DecayRow> rows;
    rows.reserve(points.size());
    int64_t n_begin = std::max<int64_t>(1, delta + 1);
    int64_t S = 0;
    int64_t ones = 0;
    size_t next = 0;
    for (int64_t n = 1; n <= max_n; ++n) {
        if (n >= n_begin) {
            bool product = true;
            for (int64_t o : f.offsets)
                if (!x_prefix.bit(n + o)) {
                    product = false;
                    break;
                }
            if (product) {
                ++ones;
                S += table.mu(n);
            }
        }
        while (next < points.size() && points[next] == n) {
            rows.push_back({n, S, static_cast<double>(S) / static_cast<double>(n),
                            static_cast<double>(ones) / static_cast<double>(n)});
            ++next;
        }
    }
    return rows;
}

std::vector<DecayRow> decay_curve(const MobiusTable& table, const RankOneParams& params,
                                  const CylinderFunction& f,
                                  std::span<const int64_t> checkpoints,
                                  int64_t max_bits) {
    if (checkpoints.empty()) throw std::invalid_argument("decay_curve: no checkpoints");
    int64_t max_n = *std::max_element(checkpoints.begin(), checkpoints.end());
    BitWord prefix = canonical_prefix(params, max_n + f.delta() + 1, max_bits);
    return decay_curve(table, prefix, f, checkpoints);
}

} // namespace rankone
