#include "wstark/config.hpp"
#include "wstark/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>

using namespace wstark;

TEST_CASE("config parses sections, comments and bare keys") {
    const auto c = KeyValueConfig::parse("top = 1\n# comment\n[lattice]\nv0 = 4.5  \n f=0.5\n\n[run]\nmodel = exact\n");
    CHECK(c.get_int("top") == 1);
    CHECK(c.get_double("lattice.v0") == 4.5);
    CHECK(c.get_double("lattice.f") == 0.5);
    CHECK(c.get_string("run.model") == "exact");
    CHECK(c.keys("lattice") == std::vector<std::string>{"f", "v0"});
    CHECK(c.get_double("lattice.f0", 0.25) == 0.25);
}

TEST_CASE("config rejects malformed input with the line number") {
    CHECK_THROWS_AS(KeyValueConfig::parse("[lattice\nv0 = 1"), ConfigError);
    CHECK_THROWS_WITH_AS(KeyValueConfig::parse("[a]\nno equals sign", "f.cfg"), doctest::Contains("f.cfg:2"),
                         ConfigError);
    const auto c = KeyValueConfig::parse("[a]\nx = abc\nn = 1.5\nb = maybe");
    CHECK_THROWS_AS(c.get_double("a.x"), ConfigError);
    CHECK_THROWS_AS(c.get_int("a.n"), ConfigError);
    CHECK_THROWS_AS(c.get_bool("a.b", false), ConfigError);
    CHECK_THROWS_AS(c.get_string("a.missing"), ConfigError);
    CHECK_THROWS_AS(KeyValueConfig::load("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("config text round trip is lossless") {
    KeyValueConfig c;
    c.set("lattice.v0", format_double(4.5));
    c.set("lattice.f0", format_double(0.1));
    c.set("run.t_end", format_double(1.0 / 3.0));
    const auto back = KeyValueConfig::parse(c.to_string());
    CHECK(back.to_string() == c.to_string());
    CHECK(back.get_double("run.t_end") == 1.0 / 3.0);
    CHECK(back.get_double("lattice.f0") == 0.1);
}

TEST_CASE("format_double round-trips every double exactly") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, std::numeric_limits<double>::denorm_min(), 0.0}) {
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
    CHECK(format_double(0.5) == "0.5");
}
