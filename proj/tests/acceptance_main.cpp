// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
// selected criterion fails. Run all criteria or one via --criterion NAME.

#include "rankone/accc.hpp"
#include "rankone/cache.hpp"
#include "rankone/katok.hpp"
#include "rankone/klr.hpp"
#include "rankone/mobius.hpp"
#include "rankone/sarnak.hpp"
#include "rankone/words.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace rankone;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* f, ...) {
    va_list args;
    va_start(args, f);
    char buf[512];
    vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

// ---- sieve-correctness: exact match with trial factorization <= 1e6 ----
Outcome check_sieve_correctness() {
    auto start = std::chrono::steady_clock::now();
    MobiusTable t = MobiusTable::sieve(1000000, 1 << 20, 1);
    int64_t mismatches = 0;
    for (int64_t n = 1; n <= 1000000; ++n)
        if (t.mu(n) != oracle::mu_trial(n)) ++mismatches;
    double secs = seconds_since(start);
    bool pass = mismatches == 0 && secs < 10.0;
    return {pass, fmt("10^6 values, %" PRId64 " mismatches, %.2fs (budget 10s)",
                      mismatches, secs)};
}

// ---- divisor-identity: sum_{d|n} mu(d) = [n = 1] for n <= 1e4 ----
Outcome check_divisor_identity() {
    const int64_t N = 10000;
    MobiusTable t = MobiusTable::sieve(N, 1 << 12, 1);
    std::vector<int64_t> acc(static_cast<size_t>(N) + 1, 0);
    for (int64_t d = 1; d <= N; ++d) {
        int mu = t.mu(d);
        if (mu == 0) continue;
        for (int64_t m = d; m <= N; m += d) acc[static_cast<size_t>(m)] += mu;
    }
    int64_t bad = 0;
    for (int64_t n = 1; n <= N; ++n)
        if (acc[static_cast<size_t>(n)] != (n == 1 ? 1 : 0)) ++bad;
    return {bad == 0, fmt("checked n <= 10^4, %" PRId64 " violations", bad)};
}

// ---- mertens-density-decay: |M(N)|/N strictly decreasing over 1e3..1e6
// and |M(1e6)|/1e6 < 1e-3 ----
Outcome check_mertens_density_decay() {
    MobiusTable t = MobiusTable::sieve(1000000, 1 << 20, 1);
    std::vector<int64_t> points = {1000, 10000, 100000, 1000000};
    std::vector<double> density;
    std::string values;
    for (int64_t N : points) {
        int64_t m = t.mertens(N);
        density.push_back(std::abs(static_cast<double>(m)) / static_cast<double>(N));
        values += fmt("M(1e%d)=%" PRId64 " (%.2e) ",
                      static_cast<int>(std::log10(static_cast<double>(N))), m,
                      density.back());
    }
    bool decreasing = true;
    for (size_t i = 1; i < density.size(); ++i)
        if (!(density[i] < density[i - 1])) decreasing = false;
    bool small_end = density.back() < 1e-3;
    return {decreasing && small_end,
            values + (decreasing ? "strictly decreasing" : "NOT strictly decreasing") +
                (small_end ? ", end < 1e-3" : ", end >= 1e-3")};
}

// ---- klr-oracle: full sweep q, L <= 8, N <= 200, all z, vs naive loop ----
Outcome check_klr_oracle() {
    MobiusTable t = MobiusTable::sieve(1000, 256, 1);
    std::vector<int> mu = oracle::mu_table_trial(1000);
    int64_t cases = 0, bad = 0;
    for (int64_t q = 1; q <= 8; ++q)
        for (int64_t L = 1; L <= 8; ++L)
            for (int64_t N = 1; N <= 200; ++N)
                for (int64_t z = 0; z < L * q; ++z) {
                    ++cases;
                    if (klr_double_sum(t, {q, L, N, z}) != oracle::naive_klr(mu, q, L, N, z))
                        ++bad;
                }
    int64_t pinned = klr_double_sum(t, {2, 2, 8, 0});
    bool pass = bad == 0 && pinned == 6;
    return {pass, fmt("%" PRId64 " cases, %" PRId64 " mismatches; (q,L,N,z)=(2,2,8,0) -> %" PRId64
                      " (want 6)",
                      cases, bad, pinned)};
}

// ---- word-engine: length recursion, zero-count product, nesting identity
// on 1000 randomized parameter sets ----
Outcome check_word_engine() {
    auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(614657);
    const int64_t kSetCount = 1000;
    const int64_t kMaterializeCap = 1 << 21;
    const int64_t kIndexCap = 50000;
    int64_t bad = 0, materialized = 0, nesting_checks = 0;

    for (int64_t trial = 0; trial < kSetCount; ++trial) {
        int64_t depth = 1 + static_cast<int64_t>(rng() % 8);
        std::vector<int64_t> cutting;
        std::vector<std::vector<int64_t>> spacers;
        for (int64_t n = 0; n < depth; ++n) {
            int64_t r = 2 + static_cast<int64_t>(rng() % 11);
            cutting.push_back(r);
            std::vector<int64_t> row;
            for (int64_t i = 0; i < r; ++i) row.push_back(static_cast<int64_t>(rng() % 6));
            spacers.push_back(row);
        }
        RankOneParams p = RankOneParams::explicit_params(cutting, spacers);

        // length recursion against the row data
        for (int64_t n = 0; n < depth; ++n) {
            int64_t expect = cutting[static_cast<size_t>(n)] * stage_length(p, n);
            for (int64_t s : spacers[static_cast<size_t>(n)]) expect += s;
            if (stage_length(p, n + 1) != expect) ++bad;
        }

        // zero-count product formula, against the materialized word where
        // it fits
        int64_t buildable = depth;
        while (buildable > 0 && stage_length(p, buildable) > kMaterializeCap) --buildable;
        int64_t product = 1;
        for (int64_t n = 0; n < depth; ++n) {
            product *= cutting[static_cast<size_t>(n)];
            if (zero_count(p, n + 1) != product) ++bad;
        }
        if (buildable >= 1) {
            ++materialized;
            StageWord w = build_stage(p, buildable, kMaterializeCap);
            if (w.bits.count_zeros() != zero_count(p, buildable)) ++bad;
            if (w.length() != stage_length(p, buildable)) ++bad;
        }

        // nesting: I_{l,n} = { x + y : x in I_{m,n}, y in I_{l,m} }
        int64_t n = 1 + static_cast<int64_t>(rng() % depth);
        while (n > 1 && occurrence_count(p, 0, n) > kIndexCap) --n;
        if (occurrence_count(p, 0, n) <= kIndexCap) {
            int64_t l = static_cast<int64_t>(rng() % n);
            int64_t m = l + static_cast<int64_t>(rng() % (n - l + 1));
            OccurrenceIndex outer = occurrence_index(p, m, n, kIndexCap);
            OccurrenceIndex inner = occurrence_index(p, l, m, kIndexCap);
            std::vector<int64_t> composed;
            composed.reserve(outer.indices.size() * inner.indices.size());
            for (int64_t x : outer.indices)
                for (int64_t y : inner.indices) composed.push_back(x + y);
            std::sort(composed.begin(), composed.end());
            if (composed != occurrence_index(p, l, n, kIndexCap).indices) ++bad;
            ++nesting_checks;
        }
    }
    double secs = seconds_since(start);
    bool pass = bad == 0 && secs < 5.0;
    return {pass, fmt("%" PRId64 " sets, %" PRId64 " materialized, %" PRId64
                      " nesting checks, %" PRId64 " violations, %.2fs (budget 5s)",
                      kSetCount, materialized, nesting_checks, bad, secs)};
}

// ---- km-structure: segment periodicity on 50 randomized Katok sets ----
Outcome check_km_structure() {
    std::mt19937_64 rng(271828);
    int64_t bad = 0, segments = 0;
    const int64_t kStageCap = 1 << 22;
    for (int trial = 0; trial < 50; ++trial) {
        int64_t m = 2 + static_cast<int64_t>(rng() % 4);
        int64_t depth = 1 + static_cast<int64_t>(rng() % 4);
        std::vector<int64_t> schedule;
        std::vector<std::vector<int64_t>> t_rows;
        for (int64_t n = 0; n < depth; ++n) {
            schedule.push_back(m * (1 + static_cast<int64_t>(rng() % 6)));
            std::vector<int64_t> row;
            for (int64_t i = 0; i < m; ++i) row.push_back(static_cast<int64_t>(rng() % m));
            t_rows.push_back(row);
        }
        KatokParams kp = make_katok(m, schedule, t_rows);
        RankOneParams p = to_rank_one(kp);
        for (int64_t n = 0; n < depth; ++n) {
            if (stage_length(p, n + 1) > kStageCap) break;
            SegmentationRow row = segmentation(kp, p, n);
            std::vector<int64_t> zeros = zero_positions(build_stage(p, n + 1, kStageCap));
            for (size_t l = 0; l + 1 < row.sigma.size(); ++l) {
                ++segments;
                if (!ccc_check(zeros, row.q[l], row.sigma[l], row.sigma[l + 1])) ++bad;
            }
        }
    }
    return {bad == 0, fmt("50 sets, %" PRId64 " segments checked, %" PRId64 " aperiodic",
                          segments, bad)};
}

// ---- residue-optimality: greedy fit vs exhaustive subsets, k <= 12 ----
Outcome check_residue_optimality() {
    std::mt19937_64 rng(9973);
    int64_t bad = 0, cases = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int64_t> A = {0};
        for (int64_t n = 1; n <= 30; ++n)
            if (rng() % 2) A.push_back(n);
        for (int64_t k = 1; k <= 12; ++k) {
            ++cases;
            if (optimal_residue_set(A, k).mismatches !=
                oracle::exhaustive_residue_mismatches(A, k))
                ++bad;
        }
    }
    return {bad == 0, fmt("200 sets x 12 moduli = %" PRId64 " cases, %" PRId64 " mismatches",
                          cases, bad)};
}

// ---- inclusion-exclusion: signed expansion equals the direct sum ----
Outcome check_inclusion_exclusion() {
    const int64_t kLen = 10000;
    MobiusTable t = MobiusTable::sieve(kLen, 1 << 12, 1);
    std::mt19937_64 rng(6081);
    int64_t bad = 0;
    for (int trial = 0; trial < 100; ++trial) {
        BitWord x;
        for (int64_t i = 0; i < kLen; ++i) x.push_back(rng() % 2 != 0);
        int64_t l = 1 + static_cast<int64_t>(rng() % 6);
        std::vector<int64_t> offsets;
        for (int64_t i = 0; i < l; ++i)
            offsets.push_back(static_cast<int64_t>(rng() % 9) - 4);
        CylinderFunction f(offsets);
        int64_t N = kLen - f.delta() - 1;

        CorrelationResult direct = correlation_sum(t, x, f, N);
        int64_t expanded = 0;
        for (const ExpansionTerm& term : inclusion_exclusion_expand(f)) {
            int64_t masked = 0;
            for (int64_t n = direct.n_begin; n <= N; ++n) {
                bool all_zero = true;
                for (int64_t idx : term.subset)
                    if (x.bit(n + offsets[static_cast<size_t>(idx - 1)])) {
                        all_zero = false;
                        break;
                    }
                if (all_zero) masked += t.mu(n);
            }
            expanded += term.sign * masked;
        }
        if (direct.S != expanded) ++bad;
    }
    return {bad == 0, fmt("100 random words of length 10^4, l <= 6, %" PRId64 " mismatches",
                          bad)};
}

// ---- disjointness-trend: |S(N)/N| shrinks from 1e3 to 1e7 and ends
// below 0.05 for the doubling-exponent tower ----
Outcome check_disjointness_trend() {
    auto start = std::chrono::steady_clock::now();
    RankOneParams p = RankOneParams::classic_katok({2, 4, 16, 256, 65536});
    MobiusTable t = MobiusTable::sieve(10000001, 1 << 20, 1);
    CylinderFunction f({0});
    std::vector<int64_t> checkpoints = {1000, 10000000};
    std::vector<DecayRow> rows = decay_curve(t, p, f, checkpoints);
    double secs = seconds_since(start);

    double early = std::abs(rows[0].s_over_n);
    double late = std::abs(rows[1].s_over_n);
    bool trend = late < early && late < 0.05;
    bool frozen = rows[0].S == 2 && rows[1].S == 1438;
    bool pass = trend && frozen && secs < 60.0;
    return {pass, fmt("S(1e3)=%" PRId64 " (|S|/N=%.4g), S(1e7)=%" PRId64
                      " (|S|/N=%.4g), %.1fs (budget 60s)",
                      rows[0].S, early, rows[1].S, late, secs)};
}

// ---- cache-roundtrip: byte-identical reload; corrupted header makes the
// CLI exit with code 4 ----
Outcome check_cache_roundtrip() {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "rankone_acceptance";
    fs::create_directories(dir);
    fs::path cache = dir / "mu.rqmu";

    MobiusTable t = MobiusTable::sieve(100000, 1 << 12, 1);
    write_cache(cache.string(), t);
    MobiusTable back = read_cache(cache.string(), 1 << 12);
    bool identical = back.packed() == t.packed() && back.limit() == t.limit();

    // flip one magic byte and expect the CLI to refuse with exit code 4
    {
        std::fstream f(cache.string(), std::ios::binary | std::ios::in | std::ios::out);
        f.put('X');
    }
    std::string cmd = std::string(RANKONE_CLI_PATH) + " mertens --N 1000 --cache " +
                      cache.string() + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    int exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;

    fs::remove_all(dir);
    bool pass = identical && exit_code == 4;
    return {pass, fmt("roundtrip %s, corrupted-header CLI exit code %d (want 4)",
                      identical ? "byte-identical" : "DIFFERS", exit_code)};
}

struct Criterion {
    const char* name;
    std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all = {
        {"sieve-correctness", check_sieve_correctness},
        {"divisor-identity", check_divisor_identity},
        {"mertens-density-decay", check_mertens_density_decay},
        {"klr-oracle", check_klr_oracle},
        {"word-engine", check_word_engine},
        {"km-structure", check_km_structure},
        {"residue-optimality", check_residue_optimality},
        {"inclusion-exclusion", check_inclusion_exclusion},
        {"disjointness-trend", check_disjointness_trend},
        {"cache-roundtrip", check_cache_roundtrip},
    };
    return all;
}

} // namespace

int main(int argc, char** argv) {
    std::string only;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) {
            only = argv[++i];
        } else {
            std::fprintf(stderr, "usage: %s [--criterion NAME]\n", argv[0]);
            return 2;
        }
    }

    int failures = 0, ran = 0;
    for (const Criterion& c : criteria()) {
        if (!only.empty() && only != c.name) continue;
        ++ran;
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s: %s — %s\n", out.pass ? "PASS" : "FAIL", c.name, out.detail.c_str());
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    if (ran == 0) {
        std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
        return 2;
    }
    return failures == 0 ? 0 : 1;
}
