#pragma once

#include "rankone/mobius.hpp"

#include <cstdint>
#include <optional>

namespace rankone {

// Windowed residue-class sum parameters: windows [z + jLq, z + (j+1)Lq)
// for j = 0..floor(N/(Lq)), each split into the q residue classes mod q.
struct KlrQuery {
    int64_t q = 1;
    int64_t L = 1;
    int64_t N = 1;
    int64_t z = 0;
    double epsilon = 0.005;
};

// sum_{j=0}^{floor(N/(Lq))} sum_{a=0}^{q-1} | sum mu(m) | over each
// window/class cell. Terms with m < 1 or m > table.limit contribute 0;
// the j-range is taken inclusive at floor(N/(Lq)) and flagged as such in
// CLI output. Windows may overhang the table by less than one window.
int64_t klr_double_sum(const MobiusTable& table, const KlrQuery& query);

struct KlrOffsetResult {
    int64_t z = 0;
    int64_t value = 0;
};

// Minimize klr_double_sum over z in {0, stride, 2*stride, ...} inside
// [0, Lq); ties go to the smallest z. stride=1 is the exhaustive search.
KlrOffsetResult klr_best_offset(const MobiusTable& table, int64_t q, int64_t L,
                                int64_t N, int64_t stride = 1, int threads = 1);

struct KlrAdmissibility {
    bool admissible = false;
    HarmonicSum q_sum;   // sum of 1/p over primes p | q
    HarmonicSum l_sum;   // sum of 1/p over primes p <= L
};

// Exact-rational test of sum_{p|q} 1/p <= (1-eps) * sum_{p<=L} 1/p.
// Requires q >= 1, L >= 2, eps in (0, 1/100).
KlrAdmissibility klr_admissible(int64_t q, int64_t L, double epsilon);

} // namespace rankone
