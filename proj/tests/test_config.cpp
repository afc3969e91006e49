#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/experiments.hpp"

using namespace at;
using namespace at::config;

namespace {

const char* kSample = R"([experiment]
kind = oracle_equivalence
seed = 12345
output_dir = out

# a comment line
[antitree]
n = 6
r = 3
s = 4
w = 2.0

[disorder]
kind = two_point_symmetric
sigma = 1.0

[spectral]
grid = 0.5 1.5 2.5
counts = 1 2 3
)";

} // namespace

TEST_CASE("parse and typed getters") {
    const auto cfg = parse(kSample);
    CHECK(cfg.get("experiment", "kind") == "oracle_equivalence");
    CHECK(cfg.get_seed("experiment", "seed") == 12345);
    CHECK(cfg.get_int("antitree", "n") == 6);
    CHECK(cfg.get_double("antitree", "w") == 2.0);
    CHECK(cfg.get_doubles("spectral", "grid") == std::vector<double>{0.5, 1.5, 2.5});
    CHECK(cfg.get_ints("spectral", "counts") == std::vector<long>{1, 2, 3});
    CHECK(cfg.has("disorder", "sigma"));
    CHECK_FALSE(cfg.has("disorder", "nope"));
    CHECK(cfg.get_or("disorder", "nope", "fallback") == "fallback");
    CHECK(cfg.get_int_or("antitree", "missing", 9) == 9);
    CHECK(cfg.get_double_or("antitree", "missing", 0.5) == 0.5);
}

TEST_CASE("missing keys and bad numbers raise config errors") {
    const auto cfg = parse(kSample);
    CHECK_THROWS_AS(cfg.get("nosection", "x"), Error);
    CHECK_THROWS_AS(cfg.get("antitree", "missing"), Error);
    CHECK_THROWS_AS(cfg.get_int("experiment", "kind"), Error);
    CHECK_THROWS_AS(cfg.get_double("experiment", "kind"), Error);
    try {
        cfg.get("antitree", "missing");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::config);
    }
}

TEST_CASE("duplicate keys are rejected with the line number") {
    const std::string dup = "[a]\nx = 1\nx = 2\n";
    try {
        parse(dup);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("3") != std::string::npos);
    }
    CHECK_THROWS_AS(parse("x = 1\n"), Error);           // key before any section
    CHECK_THROWS_AS(parse("[a]\nbroken line\n"), Error); // no equals sign
}

TEST_CASE("emit round-trips") {
    const auto cfg = parse(kSample);
    const auto again = parse(cfg.emit());
    CHECK(again.emit() == cfg.emit());
    CHECK(again.get("antitree", "s") == "4");
}

TEST_CASE("set adds and overwrites") {
    auto cfg = parse("[a]\nx = 1\n");
    cfg.set("a", "x", "2");
    cfg.set("b", "y", "3");
    CHECK(cfg.get("a", "x") == "2");
    CHECK(cfg.get("b", "y") == "3");
}

TEST_CASE("strict key checking names the offender") {
    const auto cfg = parse("[a]\nx = 1\nsigma_typo = 2\n");
    try {
        check_keys(cfg, {{"a", {"x"}}});
        FAIL("expected an error");
    } catch (const Error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("sigma_typo") != std::string::npos);
        CHECK(msg.find("a") != std::string::npos);
    }
    CHECK_NOTHROW(check_keys(cfg, {{"a", {"x", "sigma_typo"}}}));
}

TEST_CASE("experiment validation accepts a minimal oracle config") {
    auto cfg = parse(kSample);
    // drop the scratch section not in the oracle schema
    Config trimmed;
    for (const auto& [name, section] : cfg.sections)
        if (name != "spectral")
            for (const auto& [k, v] : section) trimmed.set(name, k, v);
    CHECK_NOTHROW(experiments::validate_experiment(trimmed));

    trimmed.set("antitree", "sigma_typo", "1");
    CHECK_THROWS_AS(experiments::validate_experiment(trimmed), Error);
}

TEST_CASE("pipeline validation names the s = m * n constraint") {
    Config cfg;
    cfg.set("experiment", "kind", "antitree_pipeline");
    cfg.set("experiment", "seed", "1");
    cfg.set("experiment", "output_dir", "out");
    cfg.set("disorder", "kind", "two_point_symmetric");
    cfg.set("disorder", "sigma", "1.0");
    cfg.set("antitree", "w", "0.0");
    cfg.set("spectral", "lambda", "3.0");
    cfg.set("pipeline", "configs", "10:2:3");
    cfg.set("pipeline", "s", "25"); // 10 * 3 = 30, mismatch
    try {
        experiments::validate_experiment(cfg);
        FAIL("expected an error");
    } catch (const Error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("m * n") != std::string::npos);
        CHECK(msg.find("25") != std::string::npos);
    }
    cfg.set("pipeline", "s", "30");
    CHECK_NOTHROW(experiments::validate_experiment(cfg));
}

TEST_CASE("experiment kind names round-trip") {
    using experiments::Kind;
    for (Kind k : {Kind::oracle_equivalence, Kind::harmonic_mc, Kind::channel_conjugation,
                   Kind::sde_refinement, Kind::goe_gap_compare, Kind::antitree_pipeline})
        CHECK(experiments::kind_from_name(experiments::kind_name(k)) == k);
    CHECK_THROWS_AS(experiments::kind_from_name("bogus"), Error);
}
