#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "smms/config.hpp"
#include "smms/errors.hpp"
#include "smms/expr.hpp"

using namespace smms;

TEST_SUITE("config") {
    TEST_CASE("INI sections merge defaults") {
        const auto specs = parse_ini(R"(# header
[defaults]
domain = circle
nodes = 64

[a]
task = poincare
f = sin(x)   # trailing comment
; whole-line comment
[b]
task = lsi
nodes = 128
p = 1.5; 2; 3
)",
                                     "t.ini");
        REQUIRE(specs.size() == 2);
        CHECK(specs[0].id() == "a");
        CHECK(specs[0].str("domain") == "circle");
        CHECK(specs[0].num("nodes") == 64);
        CHECK(specs[0].str("f") == "sin(x)");
        CHECK(specs[1].num("nodes") == 128);
        CHECK(specs[1].numbers("p") == std::vector<double>{1.5, 2, 3});
    }

    TEST_CASE("JSON mirrors INI") {
        const auto ini = parse_ini("[defaults]\nnodes = 64\n[a]\ntask = poincare\nk = 1\nf = x\n", "t.ini");
        const auto json = parse_json(R"({"defaults": {"nodes": 64},
            "scenarios": [{"id": "a", "task": "poincare", "k": 1, "f": "x"}]})",
                                     "t.json");
        REQUIRE(json.size() == 1);
        CHECK(json[0].id() == "a");
        CHECK(json[0].num("nodes") == ini[0].num("nodes"));
        CHECK(json[0].num("k") == ini[0].num("k"));
        CHECK(json[0].str("f") == ini[0].str("f"));
        const auto map = parse_json(R"({"a": {"task": "lsi", "p": [1, 2]}})", "m.json");
        CHECK(map[0].numbers("p") == std::vector<double>{1, 2});
    }

    TEST_CASE("malformed files are parse errors") {
        const auto dir = std::filesystem::temp_directory_path() / "smms_config_errors";
        std::filesystem::create_directories(dir);
        std::ofstream(dir / "empty.ini") << "";
        std::ofstream(dir / "comment.ini") << "# only a comment\n";
        CHECK_THROWS_AS(load_scenarios((dir / "empty.ini").string()), ParseError);
        CHECK_THROWS_AS(load_scenarios((dir / "comment.ini").string()), ParseError);
        std::filesystem::remove_all(dir);
        CHECK_THROWS_AS(parse_ini("k = 1\n[a]\ntask = lsi\n", "e.ini"), ParseError);
        CHECK_THROWS_AS(parse_ini("[a]\nk = 1\nk = 2\n", "e.ini"), ParseError);
        CHECK_THROWS_AS(parse_ini("[a]\nk = 1\n[a]\nk = 2\n", "e.ini"), ParseError);
        CHECK_THROWS_AS(parse_ini("[a]\nthis line has no equals\n", "e.ini"), ParseError);
        CHECK_THROWS_AS(parse_json("{not json", "e.json"), ParseError);
        CHECK_THROWS_AS(load_scenarios("/nonexistent/path.ini"), ParseError);
    }

    TEST_CASE("unread keys are rejected") {
        auto specs = parse_ini("[a]\ntask = lsi\nnodse = 64\n", "e.ini");
        specs[0].str("task");
        CHECK_THROWS_AS(specs[0].reject_unused(), ParseError);
        specs[0].num("nodse");
        CHECK_NOTHROW(specs[0].reject_unused());
    }

    TEST_CASE("numbers and booleans") {
        CHECK(parse_number("pi/2", "r") == doctest::Approx(std::numbers::pi / 2));
        CHECK(std::isinf(parse_number("-inf", "a")));
        CHECK(parse_number("1e-3", "dt") == 1e-3);
        CHECK_THROWS_AS(parse_number("abc", "dt"), ParseError);
        auto specs = parse_ini("[a]\nyes = true\nno = 0\nbad = maybe\n", "b.ini");
        CHECK(specs[0].flag("yes", false));
        CHECK(!specs[0].flag("no", true));
        CHECK_THROWS_AS(specs[0].flag("bad", true), ParseError);
        CHECK(specs[0].flag("absent", true));
    }

    TEST_CASE("directories load in name order") {
        const auto dir = std::filesystem::temp_directory_path() / "smms_config_test";
        std::filesystem::remove_all(dir);
        std::filesystem::create_directories(dir);
        std::ofstream(dir / "b.ini") << "[z]\ntask = lsi\n";
        std::ofstream(dir / "a.json") << R"({"y": {"task": "lsi"}})";
        std::ofstream(dir / "ignored.txt") << "junk";
        const auto specs = load_scenarios(dir.string());
        REQUIRE(specs.size() == 2);
        CHECK(specs[0].id() == "y");
        CHECK(specs[1].id() == "z");
        std::filesystem::remove_all(dir);
    }

    TEST_CASE("expressions") {
        const Expression e("2 + cos(x)^2 * exp(-x/2)");
        CHECK(e(0.5) == doctest::Approx(2 + std::pow(std::cos(0.5), 2) * std::exp(-0.25)));
        CHECK(Expression("-2^2")(0) == doctest::Approx(-4));
        CHECK(Expression("2^3^2")(0) == doctest::Approx(512));
        CHECK(Expression("pow(x, 3) + max(1, x) - min(1, x)")(2) == doctest::Approx(9));
        CHECK(Expression("pi * e")(0) == doctest::Approx(std::numbers::pi * std::numbers::e));
        const Expression xt("x * exp(-t)", {"x", "t"});
        CHECK(xt.eval({{"x", 2}, {"t", 1}}) == doctest::Approx(2 * std::exp(-1.0)));
        CHECK_THROWS_AS(Expression("1 +"), ParseError);
        CHECK_THROWS_AS(Expression("y + 1"), ParseError);
        CHECK_THROWS_AS(Expression("foo(x)"), ParseError);
        CHECK_THROWS_AS(Expression("(x"), ParseError);
    }
}
