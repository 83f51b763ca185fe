#include "rankone/accc.hpp"
#include "rankone/errors.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <random>
#include <stdexcept>

using namespace rankone;

namespace {

RankOneParams two_by_two() {
    return RankOneParams::explicit_params({2, 2}, {{0, 1}, {0, 1}});
}

RankOneParams katok_tower() {
    return RankOneParams::classic_katok({2, 4, 16, 256, 65536});
}

} // namespace

TEST_CASE("residue fit on a hand-checked block") {
    std::vector<int64_t> A = {0, 1, 2, 4};
    ResidueFit fit = optimal_residue_set(A, 2);
    CHECK(fit.D.members == std::vector<int64_t>{0});
    CHECK(fit.mismatches == 1);
    CHECK(fit.denominator == 4);
    CHECK(fit.discrepancy() == doctest::Approx(0.25));

    // k = 1: everything is one class; zeros dominate [0,4] so include it
    ResidueFit all = optimal_residue_set(A, 1);
    CHECK(all.D.members == std::vector<int64_t>{0});
    CHECK(all.mismatches == 1);   // position 3

    ResidueFit degenerate = optimal_residue_set(std::vector<int64_t>{0}, 7);
    CHECK(degenerate.degenerate);
    CHECK(degenerate.discrepancy() == 0.0);
}

TEST_CASE("residue fit matches the exhaustive subset oracle") {
    std::mt19937_64 rng(401);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<int64_t> A = {0};
        for (int64_t n = 1; n <= 30; ++n)
            if (rng() % 2) A.push_back(n);
        for (int64_t k = 1; k <= 8; ++k) {
            ResidueFit fit = optimal_residue_set(A, k);
            CHECK(fit.mismatches == oracle::exhaustive_residue_mismatches(A, k));
        }
    }
}

TEST_CASE("residue fit validates input") {
    CHECK_THROWS_AS(optimal_residue_set(std::vector<int64_t>{}, 2), std::invalid_argument);
    CHECK_THROWS_AS(optimal_residue_set(std::vector<int64_t>{1, 2}, 2), std::invalid_argument);
    CHECK_THROWS_AS(optimal_residue_set(std::vector<int64_t>{0, 3}, 0), std::invalid_argument);
}

TEST_CASE("block decomposition tiles the window") {
    RankOneParams p = two_by_two();
    BuildingBlock bb = block_decomposition(p, 1, 7);
    CHECK(bb.block == std::vector<int64_t>{0, 1});
    CHECK(bb.max_a == 1);
    CHECK(bb.offsets == std::vector<int64_t>{0, 3});
    CHECK(bb.window_end == 7);
    CHECK(bb.effective_end == 7);
    CHECK(bb.host_stage == 2);

    // window cut inside the second copy: the copy at 3 pokes past 4
    BuildingBlock cut = block_decomposition(p, 1, 4);
    CHECK(cut.offsets == std::vector<int64_t>{0});
    CHECK(cut.effective_end == 3);

    CHECK_THROWS_AS(block_decomposition(p, 1, 100), resource_limit_error);  // no stage covers it
    CHECK_THROWS_AS(block_decomposition(p, 1, 0), std::invalid_argument);
}

TEST_CASE("accc check refuses periodic parameters") {
    RankOneParams periodic = RankOneParams::constant(2, {0, 0}, 3);
    std::vector<int64_t> ks = {2};
    std::vector<int64_t> targets = {2};
    CHECK_THROWS_AS(accc_check(periodic, 0.1, ks, targets), std::invalid_argument);
}

TEST_CASE("accc check on the doubling tower") {
    RankOneParams p = katok_tower();
    std::vector<int64_t> ks = {2};
    std::vector<int64_t> targets = {10};
    AcccReport rep = accc_check(p, 0.1, ks, targets);
    CHECK(rep.epsilon == 0.1);
    // stages 1..4 fit the default budget, stage 5 (3.9e9 bits) does not
    REQUIRE(rep.stages.size() == 4);
    CHECK(rep.stages.back().stage == 4);
    CHECK(rep.stages.back().length == 59520);
    CHECK(rep.stages.back().max_a == 59515);

    REQUIRE(rep.per_k.size() == 1);
    const AcccKResult& k2 = rep.per_k[0];
    CHECK(k2.k == 2);
    REQUIRE(k2.targets.size() == 1);
    CHECK(k2.targets[0].conclusive);
    // best over stages with max(A) >= 10: stage 2 at 4/11
    CHECK(k2.targets[0].best_stage == 2);
    CHECK(k2.targets[0].best_discrepancy == doctest::Approx(4.0 / 11.0));
    CHECK_FALSE(k2.witness);   // 0.36 is nowhere near eps = 0.1
    CHECK(rep.note.find("finite-horizon") != std::string::npos);
}

TEST_CASE("accc targets beyond every stage are inconclusive") {
    RankOneParams p = two_by_two();
    std::vector<int64_t> ks = {2};
    std::vector<int64_t> targets = {2, 1000};
    AcccReport rep = accc_check(p, 0.9, ks, targets);
    REQUIRE(rep.per_k.size() == 1);
    REQUIRE(rep.per_k[0].targets.size() == 2);
    CHECK(rep.per_k[0].targets[0].conclusive);
    CHECK_FALSE(rep.per_k[0].targets[1].conclusive);
    CHECK_FALSE(rep.per_k[0].witness);
}

TEST_CASE("default modulus candidates") {
    RankOneParams p = katok_tower();
    std::vector<int64_t> ks = default_k_candidates(p);
    CHECK(std::find(ks.begin(), ks.end(), 2) != ks.end());
    CHECK(std::find(ks.begin(), ks.end(), 64) != ks.end());
    CHECK(std::find(ks.begin(), ks.end(), 232) != ks.end());     // |v_3|
    CHECK(std::find(ks.begin(), ks.end(), 59520) != ks.end());   // |v_4|
    CHECK(std::is_sorted(ks.begin(), ks.end()));
    CHECK(std::adjacent_find(ks.begin(), ks.end()) == ks.end());
}

TEST_CASE("odometer clause (a)") {
    RankOneParams p = two_by_two();
    // I_{1,2} = {0, 3}: residues mod 2 split 1/1, tie resolves low
    OdometerClauseA tie = odometer_clause_a(p, 1, 2, 2);
    CHECK(tie.j_star == 0);
    CHECK(tie.total == 2);
    CHECK(tie.outside == 1);
    CHECK(tie.fraction == doctest::Approx(0.5));

    OdometerClauseA aligned = odometer_clause_a(p, 1, 2, 3);
    CHECK(aligned.j_star == 0);
    CHECK(aligned.outside == 0);
    CHECK(aligned.fraction == 0.0);

    CHECK_THROWS_AS(odometer_clause_a(p, 2, 2, 2), std::invalid_argument);  // needs m < n
    CHECK_THROWS_AS(odometer_clause_a(p, 1, 2, 0), std::invalid_argument);
}

TEST_CASE("odometer clause (b)") {
    RankOneParams p = RankOneParams::explicit_params({4}, {{0, 0, 1, 1}});
    OdometerClauseB fit = odometer_clause_b(p, 0, 1, 2);
    CHECK(fit.D.members == std::vector<int64_t>{0});
    CHECK(fit.mismatches == 2);
    CHECK(fit.denominator == 4);
    CHECK(fit.discrepancy == doctest::Approx(0.5));

    // l = m: I_{m,m} = {0}, one point against |v_m|+1 positions
    OdometerClauseB self = odometer_clause_b(p, 1, 1, 1);
    CHECK(self.D.members.empty());
    CHECK(self.mismatches == 1);
    CHECK(self.denominator == 1);
    CHECK(self.discrepancy == doctest::Approx(1.0));

    CHECK_THROWS_AS(odometer_clause_b(p, 1, 0, 2), std::invalid_argument);  // needs l <= m
}
