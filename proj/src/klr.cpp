#include "rankone/klr.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <vector>

namespace rankone {

int64_t klr_double_sum(const MobiusTable& table, const KlrQuery& query) {
    int64_t q = query.q, L = query.L, N = query.N, z = query.z;
    if (q < 1) throw std::invalid_argument("klr_double_sum: q must be >= 1");
    if (L < 1) throw std::invalid_argument("klr_double_sum: L must be >= 1");
    if (N < 1) throw std::invalid_argument("klr_double_sum: N must be >= 1");
    int64_t window = L * q;
    if (z < 0 || z >= window)
        throw std::invalid_argument("klr_double_sum: z must lie in [0, Lq)");

    int64_t j_max = N / window;
    // Allow at most one window of overhang past the table.
    if (z + (j_max + 1) * window > table.limit() + window)
        throw std::out_of_range("klr_double_sum: windows reach past table limit by a full window");

    int64_t total = 0;
    std::vector<int64_t> acc(static_cast<size_t>(q));
    for (int64_t j = 0; j <= j_max; ++j) {
        std::fill(acc.begin(), acc.end(), 0);
        int64_t lo = z + j * window;
        int64_t hi = lo + window;  // exclusive
        for (int64_t m = std::max<int64_t>(lo, 1); m < std::min(hi, table.limit() + 1); ++m)
            acc[static_cast<size_t>(m % q)] += table.mu_clamped(m);
        for (int64_t a = 0; a < q; ++a) total += std::llabs(acc[static_cast<size_t>(a)]);
    }
    return total;
}

KlrOffsetResult klr_best_offset(const MobiusTable& table, int64_t q, int64_t L,
                                int64_t N, int64_t stride, int threads) {
    if (stride < 1) throw std::invalid_argument("klr_best_offset: stride must be >= 1");
    int64_t window = L * q;
    if (window < 1 || stride > window)
        throw std::invalid_argument("klr_best_offset: empty offset search set");
    if (threads < 1) threads = 1;

    std::vector<int64_t> candidates;
    for (int64_t z = 0; z < window; z += stride) candidates.push_back(z);

    std::vector<int64_t> values(candidates.size());
    auto eval_range = [&](std::atomic<size_t>& next) {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= candidates.size()) break;
            values[i] = klr_double_sum(table, {q, L, N, candidates[i], 0.0});
        }
    };
    std::atomic<size_t> next{0};
    if (threads == 1 || candidates.size() == 1) {
        eval_range(next);
    } else {
        std::vector<std::thread> pool;
        size_t n = std::min<size_t>(static_cast<size_t>(threads), candidates.size());
        for (size_t t = 0; t < n; ++t) pool.emplace_back([&] { eval_range(next); });
        for (auto& th : pool) th.join();
    }

    KlrOffsetResult best{candidates[0], values[0]};
    for (size_t i = 1; i < candidates.size(); ++i)
        if (values[i] < best.value) best = {candidates[i], values[i]};
    return best;
}

KlrAdmissibility klr_admissible(int64_t q, int64_t L, double epsilon) {
    if (q < 1) throw std::invalid_argument("klr_admissible: q must be >= 1");
    if (L < 2) throw std::invalid_argument("klr_admissible: L must be >= 2");
    if (!(epsilon > 0.0) || !(epsilon < 0.01))
        throw std::invalid_argument("klr_admissible: epsilon must lie in (0, 1/100)");

    KlrAdmissibility out;
    out.q_sum = prime_harmonic_divisors(static_cast<uint64_t>(q));
    out.l_sum = prime_harmonic_upto(static_cast<uint64_t>(L));
    Rational scale = Rational(1) - rational_from_double(epsilon);
    out.admissible = out.q_sum.exact <= scale * out.l_sum.exact;
    return out;
}

} // namespace rankone
