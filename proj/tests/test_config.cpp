#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dwsim/config.hpp"
#include "dwsim/units.hpp"

using namespace dwsim;

TEST_CASE("parses keys, comments and blank lines") {
    const Config cfg = Config::from_string(
        "# header comment\n"
        "protocol.dt2 = 110   # inline comment\n"
        "\n"
        "bath.temperature_mk = 15\n"
        "protocol.stage3_ramp = sine\n");
    CHECK(cfg.get_double("protocol.dt2", 0) == 110.0);
    CHECK(cfg.get_double("bath.temperature_mk", 0) == 15.0);
    CHECK(cfg.get_string("protocol.stage3_ramp", "") == "sine");
    CHECK(cfg.get_double("missing.key", 42.0) == 42.0);
    CHECK(cfg.has("protocol.dt2"));
    CHECK_FALSE(cfg.has("missing.key"));
}

TEST_CASE("parse errors carry location") {
    try {
        Config::from_string("a = 1\nnot a key value pair\n", "test.cfg");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("test.cfg:2") != std::string::npos);
    }
}

TEST_CASE("typed getter failures") {
    const Config cfg = Config::from_string("a = abc\nb = 1.5\nc = maybe\n");
    CHECK_THROWS_AS(cfg.get_double("a", 0), ConfigError);
    CHECK_THROWS_AS(cfg.get_int("b", 0), ConfigError);
    CHECK_THROWS_AS(cfg.get_bool("c", false), ConfigError);
    CHECK(cfg.get_double("b", 0) == 1.5);
}

TEST_CASE("bool forms") {
    const Config cfg = Config::from_string("a = on\nb = false\nc = 1\nd = no\n");
    CHECK(cfg.get_bool("a", false));
    CHECK_FALSE(cfg.get_bool("b", true));
    CHECK(cfg.get_bool("c", false));
    CHECK_FALSE(cfg.get_bool("d", true));
}

TEST_CASE("overrides replace values") {
    Config cfg = Config::from_string("a = 1\n");
    cfg.apply_override("a=2");
    cfg.apply_override("new.key = 3");
    CHECK(cfg.get_double("a", 0) == 2.0);
    CHECK(cfg.get_double("new.key", 0) == 3.0);
    CHECK_THROWS_AS(cfg.apply_override("garbage"), ConfigError);
}

TEST_CASE("time literals") {
    const double omega = UnitSystem::default_device().omega;
    CHECK(parse_time("110", omega) == 110.0);
    CHECK(parse_time("110/w", omega) == 110.0);
    CHECK(parse_time("1us", omega) == doctest::Approx(12.566370614));
    CHECK(parse_time("0.1us", omega) == doctest::Approx(1.2566370614));
    CHECK_THROWS_AS(parse_time("12 parsecs", omega), ConfigError);

    const Config cfg = Config::from_string("t1 = 0.5us\nt2 = 7\n");
    CHECK(cfg.get_time("t1", 0, omega) == doctest::Approx(6.2831853));
    CHECK(cfg.get_time("t2", 0, omega) == 7.0);
    CHECK(cfg.get_time("t3", 9.0, omega) == 9.0);
}

TEST_CASE("lists") {
    const Config cfg = Config::from_string("xs = 0,1.5,3e-4\nbad = 1,zz\n");
    const auto xs = cfg.get_list("xs");
    REQUIRE(xs.size() == 3);
    CHECK(xs[1] == 1.5);
    CHECK(xs[2] == 3e-4);
    CHECK_THROWS_AS(cfg.get_list("bad"), ConfigError);
    CHECK(cfg.get_list("absent").empty());
}

TEST_CASE("json round trip") {
    const Config cfg = Config::from_string("a = 1\nb.c = x\n");
    const auto j = cfg.to_json();
    CHECK(j.at("a") == "1");
    CHECK(j.at("b.c") == "x");
}
