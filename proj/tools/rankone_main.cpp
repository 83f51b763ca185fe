#include "rankone/accc.hpp"
#include "rankone/cache.hpp"
#include "rankone/config.hpp"
#include "rankone/errors.hpp"
#include "rankone/katok.hpp"
#include "rankone/klr.hpp"
#include "rankone/mobius.hpp"
#include "rankone/sarnak.hpp"
#include "rankone/words.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

namespace {

using namespace rankone;

int resolved_threads(int flag) {
    if (flag > 0) return flag;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    size_t start = 0;
    while (start <= s.size()) {
        size_t end = s.find(sep, start);
        if (end == std::string::npos) end = s.size();
        parts.push_back(s.substr(start, end - start));
        start = end + 1;
    }
    return parts;
}

std::vector<int64_t> parse_int_list(const std::string& s, const char* what) {
    if (s.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
    std::vector<int64_t> out;
    for (const auto& part : split(s, ',')) {
        try {
            out.push_back(parse_scaled_int(part));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(std::string(what) + ": " + e.what());
        }
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& s, const char* what) {
    if (s.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
    std::vector<double> out;
    for (const auto& part : split(s, ',')) {
        size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(part, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string(what) + ": '" + part + "' is not a number");
        }
        if (used != part.size())
            throw std::invalid_argument(std::string(what) + ": '" + part + "' is not a number");
        out.push_back(v);
    }
    return out;
}

std::vector<std::vector<int64_t>> parse_rows(const std::string& s, const char* what) {
    std::vector<std::vector<int64_t>> rows;
    for (const auto& row : split(s, ';')) rows.push_back(parse_int_list(row, what));
    return rows;
}

// "2,4,8" explicit, "linear:a,b" -> a + b*n, "geom:a,b" -> a * b^n
std::vector<int64_t> parse_r_schedule(const std::string& spec, int64_t depth) {
    auto need_depth = [&]() {
        if (depth < 1)
            throw std::invalid_argument("r-schedule: generated schedules need --depth >= 1");
    };
    if (spec.rfind("linear:", 0) == 0) {
        need_depth();
        auto ab = parse_int_list(spec.substr(7), "r-schedule");
        if (ab.size() != 2) throw std::invalid_argument("r-schedule: linear takes two values a,b");
        std::vector<int64_t> out;
        for (int64_t n = 0; n < depth; ++n) out.push_back(ab[0] + ab[1] * n);
        return out;
    }
    if (spec.rfind("geom:", 0) == 0) {
        need_depth();
        auto ab = parse_int_list(spec.substr(5), "r-schedule");
        if (ab.size() != 2) throw std::invalid_argument("r-schedule: geom takes two values a,b");
        std::vector<int64_t> out;
        int64_t r = ab[0];
        for (int64_t n = 0; n < depth; ++n) {
            out.push_back(r);
            if (__builtin_mul_overflow(r, ab[1], &r))
                throw std::invalid_argument("r-schedule: geometric growth overflows 63 bits");
        }
        return out;
    }
    auto out = parse_int_list(spec, "r-schedule");
    if (depth > 0 && static_cast<int64_t>(out.size()) != depth)
        throw std::invalid_argument("r-schedule: explicit list length must equal --depth");
    return out;
}

std::string resolve_cache_path(const std::string& flag, const std::string& from_config,
                               bool default_local) {
    if (!flag.empty()) return flag;
    if (const char* dir = std::getenv("RQ_CACHE_DIR"); dir != nullptr && *dir != '\0')
        return std::string(dir) + "/mobius.rqmu";
    if (!from_config.empty()) return from_config;
    return default_local ? "mobius.rqmu" : "";
}

// An existing file is reused when its header is valid and covers the
// requested limit, rebuilt when the limit is too small, and rejected
// (integrity error) when corrupted. No path means in-memory only.
MobiusTable acquire_table(int64_t limit, int64_t segment_size, int threads,
                          const std::string& cache_path, bool* reused = nullptr) {
    if (reused) *reused = false;
    if (!cache_path.empty() && std::filesystem::exists(cache_path)) {
        auto header = read_cache_header(cache_path);
        if (!header || header->limit >= limit) {
            MobiusTable t = read_cache(cache_path, segment_size);
            if (reused) *reused = true;
            return t;
        }
    }
    MobiusTable t = MobiusTable::sieve(limit, segment_size, threads);
    if (!cache_path.empty()) write_cache(cache_path, t);
    return t;
}

void emit_report(const ojson& j, bool json_mode) {
    std::cout << (json_mode ? j.dump() : j.dump(2)) << "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::invalid_argument("cannot open " + path + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path);
}

ojson decay_rows_json(const std::vector<DecayRow>& rows) {
    ojson arr = ojson::array();
    for (const auto& r : rows)
        arr.push_back({{"N", r.N},
                       {"S", r.S},
                       {"S_over_N", r.s_over_n},
                       {"mask_density", r.mask_density}});
    return arr;
}

std::string decay_rows_csv(const std::vector<DecayRow>& rows) {
    std::string csv = "N,S,S_over_N,mask_density\n";
    for (const auto& r : rows)
        csv += std::to_string(r.N) + "," + std::to_string(r.S) + "," + fmt_double(r.s_over_n) +
               "," + fmt_double(r.mask_density) + "\n";
    return csv;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rank-one word constructions and Mobius statistics"};
    app.require_subcommand(1);
    app.fallthrough();

    int threads_flag = 0;
    bool json_mode = false;
    app.add_option("--threads", threads_flag, "worker threads (0 = all available)");
    app.add_flag("--json", json_mode, "machine-readable one-line JSON output");

    // ---- build-word ----
    auto* cmd_build = app.add_subcommand("build-word", "materialize one stage of the word");
    std::string bw_config, bw_emit, bw_max_bits = std::to_string(kDefaultBitBudget);
    int64_t bw_stage = 0;
    cmd_build->add_option("--config", bw_config, "parameter JSON file")->required();
    cmd_build->add_option("--stage", bw_stage, "stage to build")->required();
    cmd_build->add_option("--emit-bits", bw_emit, "write packed bits (8 symbols/byte, LSB first)");
    cmd_build->add_option("--max-bits", bw_max_bits, "length budget in bits");
    cmd_build->callback([&] {
        ExperimentConfig cfg = config_from_file(bw_config);
        StageWord w = build_stage(cfg.params, bw_stage, parse_scaled_int(bw_max_bits));
        ojson out{{"stage", w.stage}, {"length", w.length()}, {"zeros", w.bits.count_zeros()}};
        if (w.length() <= 256) out["word"] = w.bits.to_string();
        if (!bw_emit.empty()) {
            auto bytes = w.bits.bytes();
            std::ofstream f(bw_emit, std::ios::binary | std::ios::trunc);
            if (!f) throw std::invalid_argument("cannot open " + bw_emit + " for writing");
            f.write(reinterpret_cast<const char*>(bytes.data()),
                    static_cast<std::streamsize>(bytes.size()));
            if (!f) throw std::runtime_error("write failed for " + bw_emit);
            out["bits_path"] = bw_emit;
            out["bytes"] = bytes.size();
        }
        emit_report(out, json_mode);
    });

    // ---- mobius-cache ----
    auto* cmd_cache = app.add_subcommand("mobius-cache", "build or reuse the Mobius value cache");
    std::string mc_limit, mc_out, mc_segment = "1048576";
    cmd_cache->add_option("--limit", mc_limit, "table limit (scaled ints like 1e6 allowed)")
        ->required();
    cmd_cache->add_option("--segment-size", mc_segment, "sieve segment size");
    cmd_cache->add_option("--out", mc_out, "cache file path");
    cmd_cache->callback([&] {
        int64_t limit = parse_scaled_int(mc_limit);
        std::string path = resolve_cache_path(mc_out, "", true);
        bool reused = false;
        MobiusTable t = acquire_table(limit, parse_scaled_int(mc_segment),
                                      resolved_threads(threads_flag), path, &reused);
        emit_report({{"limit", t.limit()},
                     {"path", path},
                     {"reused", reused},
                     {"bytes", 13 + t.packed().size()}},
                    json_mode);
    });

    // ---- mertens ----
    auto* cmd_mertens = app.add_subcommand("mertens", "Mertens sum and density at N");
    std::string mt_n, mt_limit, mt_cache;
    double mt_eps = 0.05;
    cmd_mertens->add_option("--N", mt_n, "horizon")->required();
    cmd_mertens->add_option("--limit", mt_limit, "table limit (default N)");
    cmd_mertens->add_option("--epsilon", mt_eps, "exponent slack in |M|/N^(1/2+eps)");
    cmd_mertens->add_option("--cache", mt_cache, "cache file path");
    cmd_mertens->callback([&] {
        int64_t N = parse_scaled_int(mt_n);
        int64_t limit = mt_limit.empty() ? N : parse_scaled_int(mt_limit);
        MobiusTable t = acquire_table(limit, 1 << 20, resolved_threads(threads_flag),
                                      resolve_cache_path(mt_cache, "", false));
        MertensReport rep = mertens_report(t, N);
        emit_report({{"N", rep.N},
                     {"mertens", rep.mertens},
                     {"density", rep.density()},
                     {"epsilon", mt_eps},
                     {"riemann_ratio", rep.riemann_ratio(mt_eps)}},
                    json_mode);
    });

    // ---- chowla ----
    auto* cmd_chowla = app.add_subcommand("chowla", "shifted Mobius product sum");
    std::string ch_exp, ch_n, ch_limit, ch_cache;
    cmd_chowla->add_option("--exponents", ch_exp, "comma list from {0,1,2}, at least one 1")
        ->required();
    cmd_chowla->add_option("--N", ch_n, "horizon")->required();
    cmd_chowla->add_option("--limit", ch_limit, "table limit (default N + k)");
    cmd_chowla->add_option("--cache", ch_cache, "cache file path");
    cmd_chowla->callback([&] {
        auto exps64 = parse_int_list(ch_exp, "exponents");
        std::vector<int> exps;
        for (int64_t e : exps64) exps.push_back(static_cast<int>(e));
        int64_t N = parse_scaled_int(ch_n);
        int64_t limit = ch_limit.empty() ? N + static_cast<int64_t>(exps.size())
                                         : parse_scaled_int(ch_limit);
        MobiusTable t = acquire_table(limit, 1 << 20, resolved_threads(threads_flag),
                                      resolve_cache_path(ch_cache, "", false));
        emit_report({{"exponents", exps}, {"N", N}, {"sum", chowla_sum(t, exps, N)}}, json_mode);
    });

    // ---- klr-eval ----
    auto* cmd_klr = app.add_subcommand("klr-eval", "windowed residue-class Mobius sums");
    std::string kl_n, kl_limit, kl_cache, kl_search;
    int64_t kl_q = 0, kl_L = 0, kl_z = 0;
    double kl_eps = 0.005;
    cmd_klr->add_option("--q", kl_q, "modulus")->required();
    cmd_klr->add_option("--L", kl_L, "window scale")->required();
    cmd_klr->add_option("--N", kl_n, "horizon")->required();
    auto* kl_z_opt = cmd_klr->add_option("--z", kl_z, "window offset in [0, Lq)");
    cmd_klr->add_option("--search", kl_search, "offset search: exhaustive or stride:K");
    cmd_klr->add_option("--epsilon", kl_eps, "admissibility slack, in (0, 1/100)");
    cmd_klr->add_option("--limit", kl_limit, "table limit (default N + 2Lq)");
    cmd_klr->add_option("--cache", kl_cache, "cache file path");
    cmd_klr->callback([&] {
        if (!kl_search.empty() && kl_z_opt->count() > 0)
            throw std::invalid_argument("klr-eval: give either --z or --search, not both");
        int64_t N = parse_scaled_int(kl_n);
        if (kl_q < 1 || kl_L < 1) throw std::invalid_argument("klr-eval: q and L must be >= 1");
        int64_t window = kl_q * kl_L;
        int64_t limit = kl_limit.empty() ? N + 2 * window : parse_scaled_int(kl_limit);
        MobiusTable t = acquire_table(limit, 1 << 20, resolved_threads(threads_flag),
                                      resolve_cache_path(kl_cache, "", false));

        int64_t z = kl_z, value = 0;
        if (!kl_search.empty()) {
            int64_t stride = 1;
            if (kl_search != "exhaustive") {
                if (kl_search.rfind("stride:", 0) != 0)
                    throw std::invalid_argument("klr-eval: --search takes exhaustive or stride:K");
                stride = parse_scaled_int(kl_search.substr(7));
            }
            KlrOffsetResult best =
                klr_best_offset(t, kl_q, kl_L, N, stride, resolved_threads(threads_flag));
            z = best.z;
            value = best.value;
        } else {
            value = klr_double_sum(t, {kl_q, kl_L, N, z, kl_eps});
        }

        ojson out{{"q", kl_q}, {"L", kl_L}, {"N", N}, {"z", z}, {"value", value},
                  {"value_over_N", static_cast<double>(value) / static_cast<double>(N)}};
        if (kl_L >= 2)
            out["admissible"] = klr_admissible(kl_q, kl_L, kl_eps).admissible;
        else
            out["admissible"] = nullptr;
        out["epsilon"] = kl_eps;
        out["j_range"] = "inclusive";
        if (!kl_search.empty()) out["search"] = kl_search;
        std::cout << out.dump() << "\n";
    });

    // ---- accc-check ----
    auto* cmd_accc = app.add_subcommand("accc-check", "residue-class approximation evidence");
    std::string ac_config, ac_kset, ac_targets, ac_stage_bits = std::to_string(int64_t{1} << 20);
    double ac_eps = -1.0;
    cmd_accc->add_option("--config", ac_config, "parameter JSON file")->required();
    cmd_accc->add_option("--epsilon", ac_eps, "discrepancy threshold");
    cmd_accc->add_option("--k-set", ac_kset, "moduli to try (default: 2..64 + stage lengths)");
    cmd_accc->add_option("--n-targets", ac_targets, "block-size thresholds (default 10,100,1000)");
    cmd_accc->add_option("--stage-bits", ac_stage_bits, "per-stage materialization budget");
    cmd_accc->callback([&] {
        ExperimentConfig cfg = config_from_file(ac_config);
        double eps = ac_eps >= 0.0 ? ac_eps : cfg.epsilon;
        if (eps < 0.0)
            throw std::invalid_argument("accc-check: --epsilon (or config epsilon) is required");
        int64_t budget = parse_scaled_int(ac_stage_bits);
        std::vector<int64_t> ks = !ac_kset.empty() ? parse_int_list(ac_kset, "k-set")
                                : !cfg.k_set.empty() ? cfg.k_set
                                                     : default_k_candidates(cfg.params, budget);
        std::vector<int64_t> targets = !ac_targets.empty()
                                           ? parse_int_list(ac_targets, "n-targets")
                                       : !cfg.n_targets.empty() ? cfg.n_targets
                                                                : std::vector<int64_t>{10, 100, 1000};
        AcccReport rep = accc_check(cfg.params, eps, ks, targets, budget);

        ojson stages = ojson::array();
        for (const auto& s : rep.stages)
            stages.push_back({{"stage", s.stage}, {"length", s.length}, {"max_a", s.max_a}});
        ojson results = ojson::array();
        for (const auto& kr : rep.per_k) {
            ojson targets_j = ojson::array();
            for (const auto& tr : kr.targets) {
                ojson t{{"n_target", tr.n_target}, {"conclusive", tr.conclusive}};
                if (tr.conclusive) {
                    t["best_stage"] = tr.best_stage;
                    t["best_discrepancy"] = tr.best_discrepancy;
                }
                targets_j.push_back(std::move(t));
            }
            results.push_back({{"k", kr.k}, {"witness", kr.witness}, {"targets", targets_j}});
        }
        emit_report({{"epsilon", rep.epsilon},
                     {"stages", stages},
                     {"k_results", results},
                     {"note", rep.note}},
                    json_mode);
    });

    // ---- odometer-check ----
    auto* cmd_odo = app.add_subcommand("odometer-check", "congruency fit of occurrence indices");
    std::string od_config;
    int64_t od_l = -1, od_m = -1, od_n = -1, od_k = 0;
    cmd_odo->add_option("--config", od_config, "parameter JSON file")->required();
    cmd_odo->add_option("--l", od_l, "inner stage for clause (b)");
    cmd_odo->add_option("--m", od_m, "middle stage")->required();
    cmd_odo->add_option("--n", od_n, "outer stage for clause (a)");
    cmd_odo->add_option("--k", od_k, "modulus")->required();
    cmd_odo->callback([&] {
        if (od_l < 0 && od_n < 0)
            throw std::invalid_argument(
                "odometer-check: give --n for clause (a) and/or --l for clause (b)");
        ExperimentConfig cfg = config_from_file(od_config);
        ojson out;
        if (od_n >= 0) {
            OdometerClauseA a = odometer_clause_a(cfg.params, od_m, od_n, od_k);
            out["clause_a"] = {{"m", od_m},      {"n", od_n},           {"k", od_k},
                               {"j_star", a.j_star}, {"total", a.total},
                               {"outside", a.outside}, {"fraction", a.fraction}};
        }
        if (od_l >= 0) {
            OdometerClauseB b = odometer_clause_b(cfg.params, od_l, od_m, od_k);
            ojson bj{{"l", od_l},
                     {"m", od_m},
                     {"k", od_k},
                     {"mismatches", b.mismatches},
                     {"denominator", b.denominator},
                     {"discrepancy", b.discrepancy},
                     {"D_size", b.D.members.size()}};
            if (b.D.members.size() <= 1024) bj["D"] = b.D.members;
            out["clause_b"] = std::move(bj);
        }
        emit_report(out, json_mode);
    });

    // ---- katok-gen ----
    auto* cmd_kat = app.add_subcommand("katok-gen", "emit run-structured spacer parameters");
    std::string kg_rsched, kg_ttable, kg_out;
    int64_t kg_m = 2, kg_depth = 0;
    cmd_kat->add_option("--m", kg_m, "number of constant runs per stage");
    cmd_kat->add_option("--r-schedule", kg_rsched, "comma list, linear:a,b, or geom:a,b")
        ->required();
    cmd_kat->add_option("--t-table", kg_ttable, "run values: rows split by ';' (default 0,1)");
    cmd_kat->add_option("--depth", kg_depth, "stages to generate (needed for linear/geom)");
    cmd_kat->add_option("--out", kg_out, "write the parameter JSON here instead of stdout");
    cmd_kat->callback([&] {
        std::vector<int64_t> schedule = parse_r_schedule(kg_rsched, kg_depth);
        std::vector<std::vector<int64_t>> t_rows =
            kg_ttable.empty() ? std::vector<std::vector<int64_t>>{{0, 1}}
                              : parse_rows(kg_ttable, "t-table");
        RankOneParams params = RankOneParams::km(kg_m, std::move(schedule), std::move(t_rows));
        std::string text = params_to_json(params).dump(2) + "\n";
        if (kg_out.empty())
            std::cout << text;
        else {
            write_text_file(kg_out, text);
            emit_report({{"out", kg_out}, {"depth", params.depth()}}, json_mode);
        }
    });

    // ---- cond-check ----
    auto* cmd_cond = app.add_subcommand("cond-check", "per-stage growth/spacer condition report");
    std::string cc_config, cc_mcand, cc_eps, cc_csv;
    int64_t cc_horizon = 0, cc_tail = 0;
    cmd_cond->add_option("--config", cc_config, "parameter JSON file")->required();
    cmd_cond->add_option("--horizon", cc_horizon, "stages to report (default: depth)");
    cmd_cond->add_option("--m-candidates", cc_mcand, "value-count candidates (default 1,2,4,8)");
    cmd_cond->add_option("--epsilon", cc_eps, "epsilon list (default 0.1,0.01)");
    cmd_cond->add_option("--tail-window", cc_tail, "tail stages for min/max framing (default 3)");
    cmd_cond->add_option("--csv", cc_csv, "also write per-stage rows as CSV");
    cmd_cond->callback([&] {
        ExperimentConfig cfg = config_from_file(cc_config);
        int64_t horizon = cc_horizon > 0   ? cc_horizon
                          : cfg.horizon > 0 ? cfg.horizon
                                            : cfg.params.depth();
        std::vector<int64_t> mcand = !cc_mcand.empty() ? parse_int_list(cc_mcand, "m-candidates")
                                     : !cfg.m_candidates.empty() ? cfg.m_candidates
                                                                 : std::vector<int64_t>{1, 2, 4, 8};
        std::vector<double> eps = !cc_eps.empty()        ? parse_double_list(cc_eps, "epsilon")
                                  : !cfg.epsilons.empty() ? cfg.epsilons
                                                          : std::vector<double>{0.1, 0.01};
        int64_t tail = cc_tail > 0 ? cc_tail : cfg.tail_window > 0 ? cfg.tail_window : 3;
        ConditionReport rep = condition_report(cfg.params, horizon, mcand, eps, tail);

        ojson rows = ojson::array();
        std::string csv =
            "stage,r,p,length,log_eligible,growth_term,change_eligible,change_term,"
            "spacer_ratio,spacer_ratio_running_max,flat_stack_ratio\n";
        for (const auto& r : rep.rows) {
            ojson row{{"stage", r.stage}, {"r", r.r}, {"p", r.p}, {"length", r.length},
                      {"log_eligible", r.log_eligible}};
            row["growth_term"] = r.log_eligible ? ojson(r.growth_term) : ojson(nullptr);
            row["change_eligible"] = r.change_eligible;
            row["change_term"] = r.change_eligible ? ojson(r.change_term) : ojson(nullptr);
            row["spacer_ratio"] = r.spacer_ratio;
            row["spacer_ratio_running_max"] = r.spacer_ratio_running_max;
            row["flat_stack_ratio"] = r.flat_stack_ratio;
            rows.push_back(std::move(row));
            csv += std::to_string(r.stage) + "," + std::to_string(r.r) + "," +
                   std::to_string(r.p) + "," + fmt_double(r.length) + "," +
                   (r.log_eligible ? "1" : "0") + "," +
                   (r.log_eligible ? fmt_double(r.growth_term) : "") + "," +
                   (r.change_eligible ? "1" : "0") + "," +
                   (r.change_eligible ? fmt_double(r.change_term) : "") + "," +
                   fmt_double(r.spacer_ratio) + "," + fmt_double(r.spacer_ratio_running_max) +
                   "," + fmt_double(r.flat_stack_ratio) + "\n";
        }
        ojson values = ojson::array();
        for (const auto& cell : rep.value_table)
            values.push_back({{"m", cell.m},
                              {"epsilon", cell.epsilon},
                              {"all_pass", cell.all_pass},
                              {"per_stage", cell.per_stage}});
        ojson out{{"horizon", rep.horizon},
                  {"tail_window", rep.tail_window},
                  {"rows", rows},
                  {"has_eligible", rep.has_eligible},
                  {"spacer_ratio_K", rep.spacer_ratio_K},
                  {"value_table", values}};
        if (rep.has_eligible) {
            out["growth_tail_min"] = rep.growth_tail_min;
            out["growth_tail_max"] = rep.growth_tail_max;
        }
        if (!cc_csv.empty()) {
            write_text_file(cc_csv, csv);
            out["csv"] = cc_csv;
        }
        emit_report(out, json_mode);
    });

    // ---- sarnak-sum ----
    auto* cmd_sar = app.add_subcommand("sarnak-sum", "correlation-sum decay curve");
    std::string sa_config, sa_offsets, sa_checkpoints, sa_out, sa_limit, sa_cache;
    std::string sa_max_bits = std::to_string(kDefaultBitBudget);
    cmd_sar->add_option("--config", sa_config, "parameter JSON file")->required();
    cmd_sar->add_option("--offsets", sa_offsets, "cylinder offsets, e.g. 0,2,5");
    cmd_sar->add_option("--checkpoints", sa_checkpoints, "horizons, e.g. 1e3,1e4");
    cmd_sar->add_option("--out", sa_out, "write the curve CSV here");
    cmd_sar->add_option("--limit", sa_limit, "sieve limit (default: max checkpoint + delta)");
    cmd_sar->add_option("--cache", sa_cache, "cache file path");
    cmd_sar->add_option("--max-bits", sa_max_bits, "prefix length budget in bits");
    cmd_sar->callback([&] {
        ExperimentConfig cfg = config_from_file(sa_config);
        std::vector<int64_t> offsets = !sa_offsets.empty()
                                           ? parse_int_list(sa_offsets, "offsets")
                                           : cfg.offsets;
        if (offsets.empty())
            throw std::invalid_argument("sarnak-sum: --offsets (or config offsets) is required");
        std::vector<int64_t> checkpoints = !sa_checkpoints.empty()
                                               ? parse_int_list(sa_checkpoints, "checkpoints")
                                               : cfg.checkpoints;
        if (checkpoints.empty())
            throw std::invalid_argument(
                "sarnak-sum: --checkpoints (or config checkpoints) is required");

        CylinderFunction f(offsets);
        int64_t max_cp = *std::max_element(checkpoints.begin(), checkpoints.end());
        int64_t limit = !sa_limit.empty()    ? parse_scaled_int(sa_limit)
                        : cfg.sieve_limit > 0 ? cfg.sieve_limit
                                              : max_cp + f.delta();
        if (limit < max_cp + f.delta())
            throw std::invalid_argument(
                "sarnak-sum: sieve_limit (" + std::to_string(limit) +
                ") must be >= max checkpoint + max |offset| (" +
                std::to_string(max_cp + f.delta()) + ")");

        MobiusTable t = acquire_table(limit, 1 << 20, resolved_threads(threads_flag),
                                      resolve_cache_path(sa_cache, cfg.cache_path, false));
        std::vector<DecayRow> rows =
            decay_curve(t, cfg.params, f, checkpoints, parse_scaled_int(sa_max_bits));

        if (json_mode) {
            emit_report({{"offsets", offsets}, {"rows", decay_rows_json(rows)}}, true);
            if (!sa_out.empty()) write_text_file(sa_out, decay_rows_csv(rows));
        } else if (!sa_out.empty()) {
            write_text_file(sa_out, decay_rows_csv(rows));
            std::cout << "wrote " << rows.size() << " rows to " << sa_out << "\n";
        } else {
            std::cout << decay_rows_csv(rows);
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const resource_limit_error& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const integrity_error& e) {
        std::cerr << "integrity: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
