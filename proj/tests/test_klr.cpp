#include "rankone/klr.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <stdexcept>

using namespace rankone;

namespace {
MobiusTable table_600() { return MobiusTable::sieve(600, 128); }
} // namespace

TEST_CASE("double sum on hand-checked cases") {
    MobiusTable t = table_600();
    CHECK(klr_double_sum(t, {1, 1, 3, 0}) == 3);
    CHECK(klr_double_sum(t, {2, 2, 8, 0}) == 6);
    CHECK(klr_double_sum(t, {2, 2, 8, 1}) == 6);
    CHECK(klr_double_sum(t, {2, 2, 8, 2}) == 8);
    CHECK(klr_double_sum(t, {2, 2, 8, 3}) == 8);
}

TEST_CASE("double sum matches the naive oracle") {
    MobiusTable t = table_600();
    std::vector<int> mu = oracle::mu_table_trial(600);
    for (int64_t q = 1; q <= 4; ++q)
        for (int64_t L = 1; L <= 4; ++L)
            for (int64_t N : {1, 7, 16, 60})
                for (int64_t z = 0; z < L * q; ++z)
                    CHECK(klr_double_sum(t, {q, L, N, z}) ==
                          oracle::naive_klr(mu, q, L, N, z));
}

TEST_CASE("double sum validates its arguments") {
    MobiusTable t = table_600();
    CHECK_THROWS_AS(klr_double_sum(t, {0, 1, 3, 0}), std::invalid_argument);
    CHECK_THROWS_AS(klr_double_sum(t, {1, 0, 3, 0}), std::invalid_argument);
    CHECK_THROWS_AS(klr_double_sum(t, {2, 2, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(klr_double_sum(t, {2, 2, 8, 4}), std::invalid_argument);   // z >= Lq
    CHECK_THROWS_AS(klr_double_sum(t, {2, 2, 8, -1}), std::invalid_argument);
    // windows would overhang the table by a full window or more
    MobiusTable tiny = MobiusTable::sieve(6, 8);
    CHECK_THROWS_AS(klr_double_sum(tiny, {2, 2, 8, 3}), std::out_of_range);
}

TEST_CASE("offset search") {
    MobiusTable t = table_600();
    KlrOffsetResult best = klr_best_offset(t, 2, 2, 8);
    CHECK(best.z == 0);        // ties resolve to the smallest offset
    CHECK(best.value == 6);
    KlrOffsetResult strided = klr_best_offset(t, 2, 2, 8, 2);
    CHECK(strided.z == 0);
    CHECK(strided.value == 6);
    KlrOffsetResult threaded = klr_best_offset(t, 3, 4, 100, 1, 4);
    KlrOffsetResult serial = klr_best_offset(t, 3, 4, 100, 1, 1);
    CHECK(threaded.z == serial.z);
    CHECK(threaded.value == serial.value);
    CHECK_THROWS_AS(klr_best_offset(t, 2, 2, 8, 0), std::invalid_argument);
    CHECK_THROWS_AS(klr_best_offset(t, 2, 2, 8, 5), std::invalid_argument);  // stride > Lq
}

TEST_CASE("admissibility is an exact rational comparison") {
    KlrAdmissibility ok = klr_admissible(6, 100, 0.005);
    CHECK(ok.admissible);
    CHECK(rational_to_string(ok.q_sum.exact) == "5/6");
    CHECK(ok.l_sum.value == doctest::Approx(1.802817201048871));

    // sum over p | 30030 is ~1.344, far above (1-eps) * sum_{p<=2} = ~0.5
    KlrAdmissibility no = klr_admissible(30030, 2, 0.005);
    CHECK_FALSE(no.admissible);
    CHECK(rational_to_string(no.q_sum.exact) == "40361/30030");

    // exact boundary: q = 2, L = 2 gives q_sum = l_sum = 1/2, and the
    // (1-eps) factor pushes the bound strictly below it
    CHECK_FALSE(klr_admissible(2, 2, 0.005).admissible);
    // q = 1 has an empty divisor sum, always admissible
    CHECK(klr_admissible(1, 2, 0.005).admissible);

    CHECK_THROWS_AS(klr_admissible(6, 1, 0.005), std::invalid_argument);
    CHECK_THROWS_AS(klr_admissible(6, 100, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(klr_admissible(6, 100, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(klr_admissible(0, 100, 0.005), std::invalid_argument);
}
