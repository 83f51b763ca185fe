#pragma once

#include "rankone/words.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rankone {

using ojson = nlohmann::ordered_json;

// %.15g rendering, enough digits to round-trip the values we report.
std::string fmt_double(double x);

// "25000", "1e6", "2.5e3" -> exact int64; anything fractional or
// overflowing is rejected.
int64_t parse_scaled_int(const std::string& text);

// Parameter schema:
//   {"generator": "explicit",      "depth": d, "cutting": [...], "spacers": [[...], ...]}
//   {"generator": "classic-katok", "depth": d, "cutting": [...]}
//   {"generator": "km",            "depth": d, "m": m, "cutting": [...], "t_table": [[...], ...]}
//   {"generator": "constant",      "depth": d, "cutting": r, "spacers": [...]}
// depth is optional wherever the cutting list implies it; a km t_table
// with a single row is shared across stages. Errors carry field paths.
RankOneParams params_from_json(const ojson& j);
ojson params_to_json(const RankOneParams& p);

struct ExperimentConfig {
    RankOneParams params;
    int64_t sieve_limit = 0;          // 0 = not set
    std::string cache_path;           // empty = not set
    std::vector<int64_t> offsets;
    std::vector<int64_t> checkpoints;
    std::vector<int64_t> k_set;
    std::vector<int64_t> n_targets;
    std::vector<int64_t> m_candidates;
    std::vector<double> epsilons;
    double epsilon = -1.0;            // < 0 = not set
    int64_t horizon = 0;              // 0 = not set
    int64_t tail_window = 0;          // 0 = not set
};

// A config file is either a bare parameter object or a wrapper holding
// "params" plus experiment fields.
ExperimentConfig config_from_json(const ojson& j);
ExperimentConfig config_from_file(const std::string& path);

} // namespace rankone
