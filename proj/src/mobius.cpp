#include "rankone/mobius.hpp"

#include "rankone/errors.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <thread>

namespace rankone {

std::vector<int64_t> primes_upto(int64_t limit) {
    std::vector<int64_t> primes;
    if (limit < 2) return primes;
    std::vector<uint8_t> comp(static_cast<size_t>(limit + 1), 0);
    for (int64_t p = 2; p <= limit; ++p) {
        if (comp[static_cast<size_t>(p)]) continue;
        primes.push_back(p);
        for (int64_t q = p * p; q <= limit; q += p) comp[static_cast<size_t>(q)] = 1;
    }
    return primes;
}

namespace {

// Sieve one segment [lo, hi] (inclusive) and pack 2-bit codes into codes.
// lo-1 must be a multiple of 4 so segments write disjoint bytes.
void sieve_segment(int64_t lo, int64_t hi, std::span<const int64_t> base_primes,
                   std::vector<uint8_t>& codes,
                   std::vector<int64_t>& rem, std::vector<int8_t>& sign,
                   std::vector<uint8_t>& zero) {
    size_t len = static_cast<size_t>(hi - lo + 1);
    rem.resize(len);
    sign.assign(len, 1);
    zero.assign(len, 0);
    for (size_t i = 0; i < len; ++i) rem[i] = lo + static_cast<int64_t>(i);

    for (int64_t p : base_primes) {
        if (p * p > hi) break;
        int64_t pp = p * p;
        int64_t start = ((lo + pp - 1) / pp) * pp;
        for (int64_t m = start; m <= hi; m += pp) zero[static_cast<size_t>(m - lo)] = 1;
        start = ((lo + p - 1) / p) * p;
        for (int64_t m = start; m <= hi; m += p) {
            size_t i = static_cast<size_t>(m - lo);
            sign[i] = static_cast<int8_t>(-sign[i]);
            rem[i] /= p;
        }
    }

    for (size_t i = 0; i < len; ++i) {
        unsigned code;
        if (zero[i]) {
            code = 0;
        } else {
            // rem > 1 means one prime factor above sqrt(limit) is left
            int8_t s = rem[i] > 1 ? static_cast<int8_t>(-sign[i]) : sign[i];
            code = s > 0 ? 1u : 2u;
        }
        int64_t n = lo + static_cast<int64_t>(i);
        codes[static_cast<size_t>((n - 1) >> 2)] |= code << (2 * ((n - 1) & 3));
    }
}

} // namespace

MobiusTable MobiusTable::sieve(int64_t limit, int64_t segment_size, int threads) {
    if (limit < 1) throw std::invalid_argument("mobius_sieve: limit must be >= 1");
    if (segment_size < 1) throw std::invalid_argument("mobius_sieve: segment_size must be >= 1");
    if (threads < 1) threads = 1;

    MobiusTable table;
    table.limit_ = limit;
    table.segment_size_ = segment_size;
    table.codes_.assign(static_cast<size_t>((limit + 3) / 4), 0);

    auto sqrt_limit = static_cast<int64_t>(std::sqrt(static_cast<double>(limit)));
    while ((sqrt_limit + 1) * (sqrt_limit + 1) <= limit) ++sqrt_limit;
    std::vector<int64_t> base = primes_upto(sqrt_limit);

    // Chunks are rounded up to a multiple of 4 values so parallel workers
    // touch disjoint bytes of the packed array.
    int64_t chunk = ((segment_size + 3) / 4) * 4;
    int64_t num_chunks = (limit + chunk - 1) / chunk;

    auto run = [&](std::atomic<int64_t>& next) {
        std::vector<int64_t> rem;
        std::vector<int8_t> sign;
        std::vector<uint8_t> zero;
        for (;;) {
            int64_t c = next.fetch_add(1);
            if (c >= num_chunks) break;
            int64_t lo = c * chunk + 1;
            int64_t hi = std::min(limit, (c + 1) * chunk);
            sieve_segment(lo, hi, base, table.codes_, rem, sign, zero);
        }
    };

    std::atomic<int64_t> next{0};
    if (threads == 1 || num_chunks == 1) {
        run(next);
    } else {
        std::vector<std::thread> pool;
        int n = std::min<int64_t>(threads, num_chunks);
        pool.reserve(static_cast<size_t>(n));
        for (int t = 0; t < n; ++t) pool.emplace_back([&] { run(next); });
        for (auto& th : pool) th.join();
    }

    table.build_prefix_blocks();
    return table;
}

MobiusTable MobiusTable::from_packed(int64_t limit, std::vector<uint8_t> codes,
                                     int64_t segment_size) {
    if (limit < 1) throw std::invalid_argument("MobiusTable: limit must be >= 1");
    if (codes.size() != static_cast<size_t>((limit + 3) / 4))
        throw std::invalid_argument("MobiusTable: packed size does not match limit");
    for (uint8_t b : codes)
        if ((b & (b >> 1) & 0x55u) != 0)
            throw integrity_error("MobiusTable: reserved 2-bit code 11 in packed data");
    MobiusTable table;
    table.limit_ = limit;
    table.segment_size_ = segment_size;
    table.codes_ = std::move(codes);
    // padding pairs past limit must be zero
    int pad = static_cast<int>((4 - (limit & 3)) & 3);
    if (pad != 0) {
        uint8_t last = table.codes_.back();
        if ((last >> (2 * (4 - pad))) != 0)
            throw integrity_error("MobiusTable: nonzero padding past limit in packed data");
    }
    table.build_prefix_blocks();
    return table;
}

void MobiusTable::build_prefix_blocks() {
    // Per-byte sum of the four 2-bit codes, for fast Mertens prefixes.
    static const auto byte_sum = [] {
        std::array<int8_t, 256> t{};
        for (int b = 0; b < 256; ++b) {
            int s = 0;
            for (int k = 0; k < 4; ++k) s += kDecode[(b >> (2 * k)) & 3];
            t[static_cast<size_t>(b)] = static_cast<int8_t>(s);
        }
        return t;
    }();

    int64_t num_blocks = limit_ / kPrefixBlock;
    block_prefix_.assign(static_cast<size_t>(num_blocks + 1), 0);
    int64_t acc = 0;
    for (int64_t b = 1; b <= num_blocks; ++b) {
        size_t byte_lo = static_cast<size_t>((b - 1) * (kPrefixBlock / 4));
        size_t byte_hi = static_cast<size_t>(b * (kPrefixBlock / 4));
        for (size_t i = byte_lo; i < byte_hi; ++i) acc += byte_sum[codes_[i]];
        block_prefix_[static_cast<size_t>(b)] = acc;
    }
}

int MobiusTable::mu(int64_t n) const {
    if (n < 1 || n > limit_) throw std::out_of_range("MobiusTable::mu: n outside [1, limit]");
    return mu_unchecked(n);
}

int64_t MobiusTable::mertens(int64_t N) const {
    if (N < 1 || N > limit_) throw std::out_of_range("mertens: N outside [1, limit]");
    int64_t b = N / kPrefixBlock;
    int64_t acc = block_prefix_[static_cast<size_t>(b)];
    for (int64_t n = b * kPrefixBlock + 1; n <= N; ++n) acc += mu_unchecked(n);
    return acc;
}

double MertensReport::riemann_ratio(double epsilon) const {
    return static_cast<double>(std::llabs(mertens)) /
           std::pow(static_cast<double>(N), 0.5 + epsilon);
}

MertensReport mertens_report(const MobiusTable& table, int64_t N) {
    MertensReport r;
    r.N = N;
    r.mertens = table.mertens(N);
    return r;
}

int64_t chowla_sum(const MobiusTable& table, std::span<const int> exponents, int64_t N) {
    if (exponents.empty()) throw std::invalid_argument("chowla_sum: exponent list is empty");
    bool has_one = false;
    for (int e : exponents) {
        if (e < 0 || e > 2) throw std::invalid_argument("chowla_sum: exponents must lie in {0,1,2}");
        if (e == 1) has_one = true;
    }
    if (!has_one)
        throw std::invalid_argument("chowla_sum: at least one exponent must equal 1");
    auto k = static_cast<int64_t>(exponents.size());
    if (N < 1 || N + k > table.limit())
        throw std::out_of_range("chowla_sum: N + k exceeds table limit");

    int64_t total = 0;
    for (int64_t n = 1; n <= N; ++n) {
        int64_t term = 1;
        for (int64_t j = 0; j < k; ++j) {
            int e = exponents[static_cast<size_t>(j)];
            if (e == 0) continue;
            int m = table.mu(n + 1 + j);
            term *= e == 1 ? m : m * m;
            if (term == 0) break;
        }
        total += term;
    }
    return total;
}

int64_t masked_mobius_sum(const MobiusTable& table, std::span<const int64_t> mask, int64_t N) {
    if (N < 1 || N > table.limit())
        throw std::out_of_range("masked_mobius_sum: N outside [1, limit]");
    int64_t total = 0;
    for (int64_t n : mask) {
        if (n < 1) continue;
        if (n > N) break;
        total += table.mu(n);
    }
    return total;
}

namespace {

// Balanced reduction keeps the intermediate denominators small.
Rational sum_reciprocals(std::span<const int64_t> primes) {
    if (primes.empty()) return Rational(0);
    if (primes.size() == 1) return Rational(1, primes[0]);
    size_t mid = primes.size() / 2;
    return sum_reciprocals(primes.subspan(0, mid)) + sum_reciprocals(primes.subspan(mid));
}

} // namespace

HarmonicSum prime_harmonic_divisors(uint64_t q) {
    if (q < 1) throw std::invalid_argument("prime_harmonic_divisors: q must be >= 1");
    std::vector<int64_t> divisors;
    uint64_t rest = q;
    for (uint64_t p = 2; p * p <= rest; ++p) {
        if (rest % p != 0) continue;
        divisors.push_back(static_cast<int64_t>(p));
        while (rest % p == 0) rest /= p;
    }
    if (rest > 1) divisors.push_back(static_cast<int64_t>(rest));

    HarmonicSum out;
    out.exact = sum_reciprocals(divisors);
    double v = 0.0;
    for (auto it = divisors.rbegin(); it != divisors.rend(); ++it) v += 1.0 / static_cast<double>(*it);
    out.value = v;
    return out;
}

HarmonicSum prime_harmonic_upto(uint64_t L) {
    std::vector<int64_t> primes = primes_upto(static_cast<int64_t>(L));
    HarmonicSum out;
    out.exact = sum_reciprocals(primes);
    double v = 0.0;
    for (auto it = primes.rbegin(); it != primes.rend(); ++it) v += 1.0 / static_cast<double>(*it);
    out.value = v;
    return out;
}

} // namespace rankone
