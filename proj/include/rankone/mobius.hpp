#pragma once

#include "rankone/rational.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace rankone {

// Mobius values on [1, limit], 2 bits per integer: 00 -> 0, 01 -> +1,
// 10 -> -1, 11 -> reserved/invalid. n=1 sits in the least-significant
// pair of the first byte. 1e8 values fit in 25 MB.
class MobiusTable {
public:
    static MobiusTable sieve(int64_t limit, int64_t segment_size, int threads = 1);

    // Reconstruct from packed bytes (cache load). Validates that no pair
    // holds the reserved code 11 and that padding pairs are zero.
    static MobiusTable from_packed(int64_t limit, std::vector<uint8_t> codes,
                                   int64_t segment_size);

    int64_t limit() const { return limit_; }
    int64_t segment_size() const { return segment_size_; }

    // mu(n) for 1 <= n <= limit; throws std::out_of_range otherwise.
    int mu(int64_t n) const;

    // mu(n) with out-of-domain terms treated as 0 (n <= 0 or n > limit).
    int mu_clamped(int64_t n) const {
        if (n < 1 || n > limit_) return 0;
        return mu_unchecked(n);
    }

    // Exact Mertens sum M(N) = sum_{n<=N} mu(n); throws std::out_of_range
    // if N > limit.
    int64_t mertens(int64_t N) const;

    const std::vector<uint8_t>& packed() const { return codes_; }

private:
    MobiusTable() = default;

    int mu_unchecked(int64_t n) const {
        unsigned code = (codes_[static_cast<size_t>((n - 1) >> 2)] >> (2 * ((n - 1) & 3))) & 3u;
        return kDecode[code];
    }

    void build_prefix_blocks();

    static constexpr int kDecode[4] = {0, 1, -1, 0};
    static constexpr int64_t kPrefixBlock = 4096;

    int64_t limit_ = 0;
    int64_t segment_size_ = 0;
    std::vector<uint8_t> codes_;
    std::vector<int64_t> block_prefix_;  // block_prefix_[b] = M(b * kPrefixBlock)
};

struct MertensReport {
    int64_t N = 0;
    int64_t mertens = 0;
    double density() const { return static_cast<double>(mertens) / static_cast<double>(N); }
    double riemann_ratio(double epsilon) const;
};

MertensReport mertens_report(const MobiusTable& table, int64_t N);

// sum_{n<=N} mu(n+1)^{i_1} ... mu(n+k)^{i_k}; exponents in {0,1,2}, at
// least one equal to 1.
int64_t chowla_sum(const MobiusTable& table, std::span<const int> exponents, int64_t N);

// sum over mask positions n with 1 <= n <= N of mu(n); the mask must be
// sorted ascending. Positions outside [1, N] are skipped.
int64_t masked_mobius_sum(const MobiusTable& table, std::span<const int64_t> mask, int64_t N);

struct HarmonicSum {
    Rational exact;
    double value = 0.0;
};

// sum of 1/p over the distinct prime divisors of q (q >= 1).
HarmonicSum prime_harmonic_divisors(uint64_t q);

// sum of 1/p over primes p <= L.
HarmonicSum prime_harmonic_upto(uint64_t L);

// Simple prime list up to limit (inclusive).
std::vector<int64_t> primes_upto(int64_t limit);

} // namespace rankone
