#include "rankone/accc.hpp"

#include "rankone/errors.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace rankone {

BuildingBlock block_decomposition(const RankOneParams& params, int64_t block_stage,
                                  int64_t window_end, int64_t max_bits) {
    if (block_stage < 0 || block_stage > params.depth())
        throw std::invalid_argument("block_decomposition: stage outside [0, depth]");
    if (window_end < 1)
        throw std::invalid_argument("block_decomposition: window must be nonempty");

    int64_t host = block_stage;
    while (stage_length(params, host) < window_end) {
        if (++host > params.depth())
            throw resource_limit_error("block_decomposition: no stage reaches window end " +
                                       std::to_string(window_end));
    }

    BuildingBlock out;
    out.block_stage = block_stage;
    out.host_stage = host;
    out.window_end = window_end;
    out.block = zero_positions(build_stage(params, block_stage, max_bits));
    out.max_a = out.block.back();
    int64_t block_len = stage_length(params, block_stage);

    // Collect starts of fully contained copies; the first start past
    // window_end - |v_n| caps the region where the union identity holds.
    int64_t last_full = window_end - block_len;
    out.effective_end = window_end;
    for_each_occurrence(params, block_stage, host, window_end, [&](int64_t i) {
        if (i <= last_full) {
            out.offsets.push_back(i);
        } else if (out.effective_end == window_end && i < window_end) {
            out.effective_end = i;
        }
    });

    for (size_t i = 1; i < out.offsets.size(); ++i)
        if (out.offsets[i] - out.offsets[i - 1] <= out.max_a)
            throw integrity_error("block_decomposition: offset gap <= max(A) at offset " +
                                  std::to_string(out.offsets[i]));

    // The union of the translated copies must reproduce the zero set of
    // the prefix exactly.
    if (out.effective_end >= 1) {
        std::vector<int64_t> unioned;
        unioned.reserve(out.offsets.size() * out.block.size());
        for (int64_t off : out.offsets)
            for (int64_t a : out.block) unioned.push_back(off + a);
        std::vector<int64_t> zeros =
            canonical_prefix(params, out.effective_end, max_bits).zero_positions();
        if (unioned != zeros)
            throw integrity_error("block_decomposition: translated copies do not tile the zero set");
    }
    return out;
}

ResidueFit optimal_residue_set(std::span<const int64_t> A, int64_t k) {
    if (k < 1) throw std::invalid_argument("optimal_residue_set: k must be >= 1");
    if (A.empty() || A.front() != 0)
        throw std::invalid_argument("optimal_residue_set: A must be nonempty with 0 in A");

    ResidueFit fit;
    fit.D.k = k;
    int64_t max_a = A.back();
    if (max_a == 0) {
        fit.D.members = {0};
        fit.degenerate = true;
        return fit;
    }
    fit.denominator = max_a;

    int64_t classes = std::min(k, max_a + 1);
    std::vector<int64_t> in(static_cast<size_t>(classes), 0);
    for (int64_t a : A) ++in[static_cast<size_t>(a % k)];

    for (int64_t c = 0; c < classes; ++c) {
        int64_t size = (max_a - c) / k + 1;
        int64_t inside = in[static_cast<size_t>(c)];
        int64_t outside = size - inside;
        if (inside > outside) {
            fit.D.members.push_back(c);
            fit.mismatches += outside;
        } else {
            fit.mismatches += inside;
        }
    }
    return fit;
}

std::vector<int64_t> default_k_candidates(const RankOneParams& params, int64_t max_k) {
    std::vector<int64_t> ks;
    for (int64_t k = 2; k <= 64; ++k) ks.push_back(k);
    for (int64_t n = 1; n <= params.depth(); ++n) {
        int64_t len;
        try {
            len = stage_length(params, n);
        } catch (const resource_limit_error&) {
            break;
        }
        if (len > max_k) break;
        ks.push_back(len);
    }
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    return ks;
}

AcccReport accc_check(const RankOneParams& params, double epsilon,
                      std::span<const int64_t> k_candidates,
                      std::span<const int64_t> n_targets,
                      int64_t stage_bit_budget) {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("accc_check: epsilon must be positive");
    if (k_candidates.empty()) throw std::invalid_argument("accc_check: no k candidates");
    if (n_targets.empty()) throw std::invalid_argument("accc_check: no N targets");

    bool any_spacer = false;
    for (int64_t n = 0; n < params.depth() && !any_spacer; ++n)
        any_spacer = params.spacer_sum(n) != 0;
    if (!any_spacer)
        throw std::invalid_argument(
            "accc_check: all spacers are zero, the word is periodic (nontriviality refused)");

    AcccReport rep;
    rep.epsilon = epsilon;

    std::vector<std::vector<int64_t>> stage_zero_sets;
    for (int64_t n = 1; n <= params.depth(); ++n) {
        int64_t len;
        try {
            len = stage_length(params, n);
        } catch (const resource_limit_error&) {
            break;
        }
        if (len > stage_bit_budget) break;
        std::vector<int64_t> zeros = zero_positions(build_stage(params, n, stage_bit_budget));
        rep.stages.push_back({n, len, zeros.back()});
        stage_zero_sets.push_back(std::move(zeros));
    }
    if (rep.stages.empty())
        throw resource_limit_error("accc_check: no stage fits the bit budget");

    for (int64_t k : k_candidates) {
        AcccKResult kr;
        kr.k = k;
        bool all_good = true;
        for (int64_t target : n_targets) {
            AcccTargetResult tr;
            tr.n_target = target;
            for (size_t s = 0; s < rep.stages.size(); ++s) {
                if (rep.stages[s].max_a < target) continue;
                double d = optimal_residue_set(stage_zero_sets[s], k).discrepancy();
                if (!tr.conclusive || d < tr.best_discrepancy) {
                    tr.conclusive = true;
                    tr.best_stage = rep.stages[s].stage;
                    tr.best_discrepancy = d;
                }
            }
            all_good = all_good && tr.conclusive && tr.best_discrepancy < epsilon;
            kr.targets.push_back(tr);
        }
        kr.witness = all_good;
        rep.per_k.push_back(std::move(kr));
    }
    return rep;
}

OdometerClauseA odometer_clause_a(const RankOneParams& params, int64_t m, int64_t n,
                                  int64_t k, int64_t max_count) {
    if (m >= n) throw std::invalid_argument("odometer_clause_a: need m < n");
    if (k < 1) throw std::invalid_argument("odometer_clause_a: k must be >= 1");
    int64_t total = occurrence_count(params, m, n);
    if (total > max_count)
        throw resource_limit_error("odometer_clause_a: |I| = " + std::to_string(total) +
                                   " exceeds budget " + std::to_string(max_count));

    OdometerClauseA out;
    out.total = total;
    int64_t best = -1;
    if (k <= (int64_t{1} << 22)) {
        std::vector<int64_t> counts(static_cast<size_t>(k), 0);
        for_each_occurrence(params, m, n, stage_length(params, n),
                            [&](int64_t i) { ++counts[static_cast<size_t>(i % k)]; });
        for (int64_t j = 0; j < k; ++j)
            if (counts[static_cast<size_t>(j)] > best) {
                best = counts[static_cast<size_t>(j)];
                out.j_star = j;
            }
    } else {
        std::unordered_map<int64_t, int64_t> counts;
        for_each_occurrence(params, m, n, stage_length(params, n),
                            [&](int64_t i) { ++counts[i % k]; });
        for (const auto& [j, c] : counts)
            if (c > best || (c == best && j < out.j_star)) {
                best = c;
                out.j_star = j;
            }
    }
    out.outside = total - best;
    out.fraction = static_cast<double>(out.outside) / static_cast<double>(total);
    return out;
}

OdometerClauseB odometer_clause_b(const RankOneParams& params, int64_t l, int64_t m,
                                  int64_t k, int64_t max_count) {
    if (l > m) throw std::invalid_argument("odometer_clause_b: need l <= m");
    if (k < 1) throw std::invalid_argument("odometer_clause_b: k must be >= 1");
    int64_t total = occurrence_count(params, l, m);
    if (total > max_count)
        throw resource_limit_error("odometer_clause_b: |I| = " + std::to_string(total) +
                                   " exceeds budget " + std::to_string(max_count));

    std::unordered_map<int64_t, int64_t> in;
    for_each_occurrence(params, l, m, stage_length(params, m),
                        [&](int64_t i) { ++in[i % k]; });

    // Positions range over 0..|v_m| inclusive; untouched classes stay out
    // of D and contribute nothing.
    int64_t top = stage_length(params, m);
    OdometerClauseB out;
    out.D.k = k;
    out.denominator = total;
    for (const auto& [c, inside] : in) {
        int64_t size = c <= top ? (top - c) / k + 1 : 0;
        int64_t outside = size - inside;
        if (inside > outside) {
            out.D.members.push_back(c);
            out.mismatches += outside;
        } else {
            out.mismatches += inside;
        }
    }
    std::sort(out.D.members.begin(), out.D.members.end());
    out.discrepancy = static_cast<double>(out.mismatches) / static_cast<double>(total);
    return out;
}

} // namespace rankone
