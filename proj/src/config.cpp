#include "rankone/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rankone {

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", x);
    return buf;
}

int64_t parse_scaled_int(const std::string& text) {
    const auto bad = [&]() {
        return std::invalid_argument("'" + text + "' is not an integer (plain or NeM form)");
    };
    size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }
    std::string digits;      // mantissa with the dot removed
    int64_t frac_len = 0;
    bool seen_dot = false, seen_digit = false;
    for (; i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.'); ++i) {
        if (text[i] == '.') {
            if (seen_dot) throw bad();
            seen_dot = true;
        } else {
            digits += text[i];
            seen_digit = true;
            if (seen_dot) ++frac_len;
        }
    }
    if (!seen_digit) throw bad();
    int64_t exp10 = 0;
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool exp_neg = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            exp_neg = text[i] == '-';
            ++i;
        }
        if (i >= text.size()) throw bad();
        for (; i < text.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(text[i]))) throw bad();
            exp10 = exp10 * 10 + (text[i] - '0');
            if (exp10 > 100) throw bad();
        }
        if (exp_neg) exp10 = -exp10;
    }
    if (i != text.size()) throw bad();

    exp10 -= frac_len;
    // Trailing fractional zeros may cancel the exponent deficit.
    while (exp10 < 0 && !digits.empty() && digits.back() == '0') {
        digits.pop_back();
        ++exp10;
    }
    if (exp10 < 0) throw bad();
    if (digits.empty()) digits = "0";

    int64_t value = 0;
    for (char c : digits) {
        if (__builtin_mul_overflow(value, int64_t{10}, &value) ||
            __builtin_add_overflow(value, int64_t{c - '0'}, &value))
            throw bad();
    }
    for (int64_t e = 0; e < exp10; ++e)
        if (__builtin_mul_overflow(value, int64_t{10}, &value)) throw bad();
    return negative ? -value : value;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::invalid_argument(path + " " + what);
}

int64_t to_int(const ojson& j, const std::string& path) {
    if (j.is_number_integer()) return j.get<int64_t>();
    if (j.is_number_unsigned()) {
        uint64_t v = j.get<uint64_t>();
        if (v > static_cast<uint64_t>(std::numeric_limits<int64_t>::max()))
            fail(path, "overflows 63-bit integers");
        return static_cast<int64_t>(v);
    }
    if (j.is_number_float()) {
        double v = j.get<double>();
        if (v < -9.0e18 || v > 9.0e18) fail(path, "overflows 63-bit integers");
        auto n = static_cast<int64_t>(v);
        if (static_cast<double>(n) != v) fail(path, "must be an integer");
        return n;
    }
    if (j.is_string()) {
        try {
            return parse_scaled_int(j.get<std::string>());
        } catch (const std::invalid_argument& e) {
            fail(path, e.what());
        }
    }
    fail(path, "must be an integer");
}

std::vector<int64_t> to_int_array(const ojson& j, const std::string& path) {
    if (!j.is_array()) fail(path, "must be an array of integers");
    std::vector<int64_t> out;
    out.reserve(j.size());
    for (size_t i = 0; i < j.size(); ++i)
        out.push_back(to_int(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<std::vector<int64_t>> to_int_matrix(const ojson& j, const std::string& path) {
    if (!j.is_array()) fail(path, "must be an array of integer rows");
    std::vector<std::vector<int64_t>> out;
    out.reserve(j.size());
    for (size_t i = 0; i < j.size(); ++i)
        out.push_back(to_int_array(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

void check_keys(const ojson& j, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key)) fail(where + "." + key, "is not a recognized field");
}

void check_depth(const ojson& j, size_t stages) {
    if (j.contains("depth") && to_int(j["depth"], "params.depth") != static_cast<int64_t>(stages))
        fail("params.depth", "must match the number of cutting entries (" +
                                 std::to_string(stages) + ")");
}

} // namespace

RankOneParams params_from_json(const ojson& j) {
    if (!j.is_object()) fail("params", "must be a JSON object");
    if (!j.contains("generator")) fail("params.generator", "is required");
    if (!j["generator"].is_string()) fail("params.generator", "must be a string");
    std::string gen = j["generator"].get<std::string>();

    try {
        if (gen == "explicit") {
            check_keys(j, {"generator", "depth", "cutting", "spacers"}, "params");
            if (!j.contains("cutting")) fail("params.cutting", "is required");
            if (!j.contains("spacers")) fail("params.spacers", "is required");
            auto cutting = to_int_array(j["cutting"], "params.cutting");
            check_depth(j, cutting.size());
            return RankOneParams::explicit_params(std::move(cutting),
                                                  to_int_matrix(j["spacers"], "params.spacers"));
        }
        if (gen == "classic-katok") {
            check_keys(j, {"generator", "depth", "cutting"}, "params");
            if (!j.contains("cutting")) fail("params.cutting", "is required");
            auto cutting = to_int_array(j["cutting"], "params.cutting");
            check_depth(j, cutting.size());
            return RankOneParams::classic_katok(std::move(cutting));
        }
        if (gen == "km") {
            check_keys(j, {"generator", "depth", "m", "cutting", "t_table"}, "params");
            if (!j.contains("m")) fail("params.m", "is required");
            if (!j.contains("cutting")) fail("params.cutting", "is required");
            if (!j.contains("t_table")) fail("params.t_table", "is required");
            auto cutting = to_int_array(j["cutting"], "params.cutting");
            check_depth(j, cutting.size());
            return RankOneParams::km(to_int(j["m"], "params.m"), std::move(cutting),
                                     to_int_matrix(j["t_table"], "params.t_table"));
        }
        if (gen == "constant") {
            check_keys(j, {"generator", "depth", "cutting", "spacers"}, "params");
            if (!j.contains("depth")) fail("params.depth", "is required for constant");
            if (!j.contains("cutting")) fail("params.cutting", "is required");
            if (!j.contains("spacers")) fail("params.spacers", "is required");
            int64_t r = j["cutting"].is_array() && j["cutting"].size() == 1
                            ? to_int(j["cutting"][0], "params.cutting[0]")
                            : to_int(j["cutting"], "params.cutting");
            return RankOneParams::constant(r, to_int_array(j["spacers"], "params.spacers"),
                                           to_int(j["depth"], "params.depth"));
        }
    } catch (const std::out_of_range&) {
        throw;
    } catch (const std::invalid_argument& e) {
        std::string what = e.what();
        if (what.rfind("params", 0) == 0) throw;
        throw std::invalid_argument("params." + what);
    }
    fail("params.generator",
         "must be one of explicit, classic-katok, km, constant (got '" + gen + "')");
}

ojson params_to_json(const RankOneParams& p) {
    ojson j;
    j["generator"] = generator_name(p.generator());
    j["depth"] = p.depth();
    switch (p.generator()) {
        case Generator::Explicit: {
            ojson cutting = ojson::array(), spacers = ojson::array();
            for (int64_t n = 0; n < p.depth(); ++n) {
                cutting.push_back(p.cutting(n));
                spacers.push_back(p.spacer_row(n));
            }
            j["cutting"] = std::move(cutting);
            j["spacers"] = std::move(spacers);
            break;
        }
        case Generator::ClassicKatok: {
            ojson cutting = ojson::array();
            for (int64_t n = 0; n < p.depth(); ++n) cutting.push_back(p.cutting(n));
            j["cutting"] = std::move(cutting);
            break;
        }
        case Generator::Km: {
            j["m"] = p.km_m();
            ojson cutting = ojson::array();
            for (int64_t n = 0; n < p.depth(); ++n) cutting.push_back(p.cutting(n));
            j["cutting"] = std::move(cutting);
            j["t_table"] = p.t_table();
            break;
        }
        case Generator::Constant: {
            j["cutting"] = p.cutting(0);
            j["spacers"] = p.spacer_row(0);
            break;
        }
    }
    return j;
}

ExperimentConfig config_from_json(const ojson& j) {
    if (!j.is_object()) fail("config", "must be a JSON object");
    if (!j.contains("params")) {
        ExperimentConfig cfg{params_from_json(j)};
        return cfg;
    }
    check_keys(j,
               {"params", "sieve_limit", "cache_path", "offsets", "checkpoints", "k_set",
                "n_targets", "m_candidates", "epsilons", "epsilon", "horizon", "tail_window"},
               "config");
    ExperimentConfig cfg{params_from_json(j["params"])};
    if (j.contains("sieve_limit")) cfg.sieve_limit = to_int(j["sieve_limit"], "config.sieve_limit");
    if (j.contains("cache_path")) {
        if (!j["cache_path"].is_string()) fail("config.cache_path", "must be a string");
        cfg.cache_path = j["cache_path"].get<std::string>();
    }
    if (j.contains("offsets")) cfg.offsets = to_int_array(j["offsets"], "config.offsets");
    if (j.contains("checkpoints"))
        cfg.checkpoints = to_int_array(j["checkpoints"], "config.checkpoints");
    if (j.contains("k_set")) cfg.k_set = to_int_array(j["k_set"], "config.k_set");
    if (j.contains("n_targets")) cfg.n_targets = to_int_array(j["n_targets"], "config.n_targets");
    if (j.contains("m_candidates"))
        cfg.m_candidates = to_int_array(j["m_candidates"], "config.m_candidates");
    if (j.contains("epsilons")) {
        if (!j["epsilons"].is_array()) fail("config.epsilons", "must be an array of numbers");
        for (const auto& e : j["epsilons"]) {
            if (!e.is_number()) fail("config.epsilons", "must be an array of numbers");
            cfg.epsilons.push_back(e.get<double>());
        }
    }
    if (j.contains("epsilon")) {
        if (!j["epsilon"].is_number()) fail("config.epsilon", "must be a number");
        cfg.epsilon = j["epsilon"].get<double>();
    }
    if (j.contains("horizon")) cfg.horizon = to_int(j["horizon"], "config.horizon");
    if (j.contains("tail_window"))
        cfg.tail_window = to_int(j["tail_window"], "config.tail_window");
    return cfg;
}

ExperimentConfig config_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    ojson j;
    try {
        j = ojson::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("config: " + path + ": " + e.what());
    }
    return config_from_json(j);
}

} // namespace rankone
