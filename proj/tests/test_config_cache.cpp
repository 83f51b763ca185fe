#include "rankone/cache.hpp"
#include "rankone/config.hpp"
#include "rankone/errors.hpp"

#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <unistd.h>

using namespace rankone;

namespace {

struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const char* name)
        : path(std::filesystem::temp_directory_path() /
               (std::string("rankone_test_") + name + "_" + std::to_string(::getpid()))) {}
    ~TempFile() { std::filesystem::remove(path); }
    std::string str() const { return path.string(); }
};

} // namespace

TEST_CASE("scaled integer parsing") {
    CHECK(parse_scaled_int("25000") == 25000);
    CHECK(parse_scaled_int("1e6") == 1000000);
    CHECK(parse_scaled_int("2.5e3") == 2500);
    CHECK(parse_scaled_int("1.5e1") == 15);
    CHECK(parse_scaled_int("2.50e2") == 250);
    CHECK(parse_scaled_int("10e-1") == 1);
    CHECK(parse_scaled_int("-3e2") == -300);
    CHECK(parse_scaled_int("+7") == 7);
    CHECK(parse_scaled_int("0") == 0);
    CHECK(parse_scaled_int("9223372036854775807") == 9223372036854775807LL);

    CHECK_THROWS_AS(parse_scaled_int("1.5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scaled_int("2e-1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scaled_int("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scaled_int(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_scaled_int("1e"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scaled_int("1e19"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scaled_int("1.2.3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scaled_int("1e101"), std::invalid_argument);
}

TEST_CASE("params round-trip through JSON") {
    RankOneParams expl = RankOneParams::explicit_params({2, 3}, {{0, 1}, {2, 0, 1}});
    ojson j = params_to_json(expl);
    CHECK(j["generator"] == "explicit");
    CHECK(j["depth"] == 2);
    RankOneParams back = params_from_json(j);
    CHECK(back.cutting(1) == 3);
    CHECK(back.spacer_row(1) == std::vector<int64_t>{2, 0, 1});

    RankOneParams katok = RankOneParams::classic_katok({4, 8});
    ojson jk = params_to_json(katok);
    CHECK(jk["generator"] == "classic-katok");
    CHECK_FALSE(jk.contains("spacers"));
    CHECK(params_from_json(jk).spacer_row(1) ==
          std::vector<int64_t>{0, 0, 0, 0, 1, 1, 1, 1});

    RankOneParams km = RankOneParams::km(3, {6, 6}, {{2, 0, 1}});
    ojson jm = params_to_json(km);
    CHECK(jm["m"] == 3);
    CHECK(jm["t_table"].size() == 2);   // the shared row is expanded
    CHECK(params_from_json(jm).spacer_row(0) ==
          std::vector<int64_t>{2, 2, 0, 0, 1, 1});

    RankOneParams cst = RankOneParams::constant(2, {0, 3}, 4);
    ojson jc = params_to_json(cst);
    CHECK(jc["cutting"] == 2);            // scalar form
    CHECK(jc["spacers"].size() == 2);     // one flat row
    RankOneParams cback = params_from_json(jc);
    CHECK(cback.depth() == 4);
    CHECK(cback.spacer_row(3) == std::vector<int64_t>{0, 3});
}

TEST_CASE("params JSON rejects malformed input") {
    CHECK_THROWS_WITH_AS(params_from_json(ojson::parse(R"({"cutting": [2]})")),
                         doctest::Contains("params.generator"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(params_from_json(ojson::parse(R"({"generator": "nope"})")),
                         doctest::Contains("must be one of"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        params_from_json(ojson::parse(R"({"generator": "explicit", "spacers": [[0,0]]})")),
        doctest::Contains("params.cutting"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        params_from_json(ojson::parse(
            R"({"generator": "explicit", "cutting": [2], "spacers": [[0,0]], "m": 2})")),
        doctest::Contains("params.m"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        params_from_json(ojson::parse(
            R"({"generator": "explicit", "depth": 3, "cutting": [2], "spacers": [[0,0]]})")),
        doctest::Contains("params.depth"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        params_from_json(ojson::parse(
            R"({"generator": "explicit", "cutting": [2], "spacers": [[0,"x"]]})")),
        doctest::Contains("params.spacers[0][1]"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        params_from_json(ojson::parse(
            R"({"generator": "km", "m": 2, "cutting": [5], "t_table": [[0,1]]})")),
        doctest::Contains("divisible"), std::invalid_argument);
}

TEST_CASE("experiment config wrapper") {
    ojson bare = ojson::parse(R"({"generator": "classic-katok", "cutting": [2, 4]})");
    ExperimentConfig plain = config_from_json(bare);
    CHECK(plain.params.depth() == 2);
    CHECK(plain.sieve_limit == 0);
    CHECK(plain.epsilon == -1.0);

    ojson wrapped = ojson::parse(R"({
        "params": {"generator": "classic-katok", "cutting": [2, 4]},
        "sieve_limit": "1e5",
        "cache_path": "/tmp/mu.rqmu",
        "offsets": [0, 2],
        "checkpoints": ["1e3", 500],
        "epsilon": 0.05,
        "horizon": 2
    })");
    ExperimentConfig cfg = config_from_json(wrapped);
    CHECK(cfg.sieve_limit == 100000);
    CHECK(cfg.cache_path == "/tmp/mu.rqmu");
    CHECK(cfg.offsets == std::vector<int64_t>{0, 2});
    CHECK(cfg.checkpoints == std::vector<int64_t>{1000, 500});
    CHECK(cfg.epsilon == 0.05);
    CHECK(cfg.horizon == 2);

    ojson unknown = ojson::parse(R"({
        "params": {"generator": "classic-katok", "cutting": [2]},
        "sieve_limits": 10
    })");
    CHECK_THROWS_WITH_AS(config_from_json(unknown), doctest::Contains("sieve_limits"),
                         std::invalid_argument);
}

TEST_CASE("config file loading") {
    TempFile cfg("config.json");
    {
        std::ofstream out(cfg.str());
        out << R"({"generator": "constant", "depth": 2, "cutting": 3, "spacers": [1, 0, 2]})";
    }
    ExperimentConfig loaded = config_from_file(cfg.str());
    CHECK(loaded.params.generator() == Generator::Constant);
    CHECK(loaded.params.depth() == 2);

    CHECK_THROWS_WITH_AS(config_from_file("/nonexistent/rankone.json"),
                         doctest::Contains("cannot open"), std::invalid_argument);

    TempFile bad("bad.json");
    {
        std::ofstream out(bad.str());
        out << "{not json";
    }
    CHECK_THROWS_AS(config_from_file(bad.str()), std::invalid_argument);
}

TEST_CASE("cache round-trip is byte-identical") {
    TempFile cache("cache.rqmu");
    MobiusTable t = MobiusTable::sieve(1000, 128);
    write_cache(cache.str(), t);

    auto header = read_cache_header(cache.str());
    REQUIRE(header.has_value());
    CHECK(header->limit == 1000);

    MobiusTable back = read_cache(cache.str(), 128);
    CHECK(back.limit() == 1000);
    CHECK(back.packed() == t.packed());
    CHECK(back.mertens(1000) == t.mertens(1000));

    // the file is exactly header + payload
    CHECK(std::filesystem::file_size(cache.path) == 13 + t.packed().size());
}

TEST_CASE("cache header probing") {
    CHECK_FALSE(read_cache_header("/nonexistent/mu.rqmu").has_value());

    TempFile shorty("short.rqmu");
    {
        std::ofstream out(shorty.str(), std::ios::binary);
        out << "RQ";
    }
    CHECK_FALSE(read_cache_header(shorty.str()).has_value());
    CHECK_THROWS_AS(read_cache(shorty.str(), 128), integrity_error);
}

TEST_CASE("cache corruption is rejected") {
    TempFile cache("corrupt.rqmu");
    MobiusTable t = MobiusTable::sieve(1000, 128);

    auto corrupt_byte = [&](size_t pos, char value) {
        write_cache(cache.str(), t);
        std::fstream f(cache.str(), std::ios::binary | std::ios::in | std::ios::out);
        f.seekp(static_cast<std::streamoff>(pos));
        f.put(value);
    };

    corrupt_byte(0, 'X');   // magic
    CHECK_FALSE(read_cache_header(cache.str()).has_value());
    CHECK_THROWS_AS(read_cache(cache.str(), 128), integrity_error);

    corrupt_byte(4, 0x02);  // version
    CHECK_FALSE(read_cache_header(cache.str()).has_value());
    CHECK_THROWS_AS(read_cache(cache.str(), 128), integrity_error);

    corrupt_byte(20, static_cast<char>(0xFF));  // payload: reserved 11 pairs
    CHECK_THROWS_AS(read_cache(cache.str(), 128), integrity_error);

    // truncated payload
    write_cache(cache.str(), t);
    std::filesystem::resize_file(cache.path, 100);
    CHECK_THROWS_AS(read_cache(cache.str(), 128), integrity_error);

    // trailing bytes
    write_cache(cache.str(), t);
    {
        std::ofstream f(cache.str(), std::ios::binary | std::ios::app);
        f << "zz";
    }
    CHECK_THROWS_AS(read_cache(cache.str(), 128), integrity_error);
}
