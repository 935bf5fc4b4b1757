#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "smms/config.hpp"
#include "smms/errors.hpp"
#include "smms/scenario.hpp"

using namespace smms;

namespace {

namespace fs = std::filesystem;

const char* kPoincare = "task = poincare\nweight = quadratic\nnodes = 128\nk = 1\nf = x + sin(x)\n";

fs::path fresh_dir(const std::string& name) {
    const auto d = fs::temp_directory_path() / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_SUITE("scenario") {
    TEST_CASE("a minimal Poincare scenario passes and writes its files") {
        const auto root = fresh_dir("smms_scenario_min");
        const auto specs = parse_ini(std::string("[p1]\n") + kPoincare, "m.ini");
        const RunRecord r = run_scenario(specs[0], root);
        CHECK(r.status == kStatusPass);
        CHECK(r.verdict == "pass");
        CHECK(r.version == artifact_version());
        REQUIRE(!r.files.empty());
        for (const auto& f : r.files) CHECK(fs::exists(root / f));
        fs::remove_all(root);
    }

    TEST_CASE("statuses map error classes") {
        const auto root = fresh_dir("smms_scenario_status");
        const auto bad = parse_ini("[pme]\ntask = solve-pme\ndomain = circle\np = 2.5\nm = 2\nu0 = 2 + cos(x)\n"
                                   "[typo]\ntask = poincare\nnodez = 64\n"
                                   "[unknown]\ntask = nope\n",
                                   "s.ini");
        CHECK(run_scenario(bad[0], root).status == kStatusPrecondition);
        CHECK(run_scenario(bad[1], root).status == kStatusParse);
        const RunRecord u = run_scenario(bad[2], root);
        CHECK(u.status == kStatusParse);
        CHECK(u.verdict == "error");
        CHECK(diagnostic_line(u).find("status=2 scenario=unknown") != std::string::npos);
        fs::remove_all(root);
    }

    TEST_CASE("suite status is the worst scenario status") {
        const auto root = fresh_dir("smms_scenario_suite");
        std::string text;
        for (const char* id : {"c", "a", "b"}) text += std::string("[") + id + "]\n" + kPoincare;
        const auto ok = run_suite(parse_ini(text, "ok.ini"), root / "ok", 2);
        CHECK(ok.status == kStatusPass);
        REQUIRE(ok.records.size() == 3);
        CHECK(ok.records[0].scenario_id == "a");
        std::ostringstream summary;
        write_summary(ok.records, summary);
        int lines = 0;
        for (char ch : summary.str()) lines += ch == '\n';
        CHECK(lines == 4);

        const auto bad = run_suite(parse_ini(text + "[d]\ntask = cd-check\nweight = quadratic\nk = 2\n", "bad.ini"),
                                   root / "bad", 2);
        CHECK(bad.status == kStatusInequality);
        CHECK(bad.records.back().verdict == "fail");
        CHECK(bad.records.back().status == kStatusInequality);

        const auto expected = run_suite(
            parse_ini("[d]\ntask = cd-check\nweight = quadratic\nk = 2\nexpect = fail\n", "e.ini"), root / "e", 1);
        CHECK(expected.status == kStatusPass);
        fs::remove_all(root);
    }

    TEST_CASE("shared output directories are rejected") {
        const auto specs = parse_ini(std::string("[a]\noutput = same\n") + kPoincare + "[b]\noutput = same\n" + kPoincare,
                                     "o.ini");
        CHECK_THROWS_AS(run_suite(specs, fresh_dir("smms_scenario_shared"), 1), ParseError);
    }

    TEST_CASE("results do not depend on the job count") {
        const auto root = fresh_dir("smms_scenario_jobs");
        std::string text;
        for (int j = 0; j < 6; ++j) {
            text += "[s" + std::to_string(j) + "]\ntask = lsi\nweight = quadratic\nnodes = 128\nk = 1\n"
                    "f = random(" + std::to_string(j) + ")\n";
        }
        const auto specs = parse_ini(text, "j.ini");
        const auto r1 = run_suite(specs, root / "j1", 1);
        const auto r4 = run_suite(specs, root / "j4", 4);
        std::ostringstream s1, s4;
        write_summary(r1.records, s1);
        write_summary(r4.records, s4);
        CHECK(s1.str() == s4.str());
        for (const auto& rec : r1.records) {
            for (const auto& f : rec.files) CHECK(slurp(root / "j1" / f) == slurp(root / "j4" / f));
        }
        fs::remove_all(root);
    }

    TEST_CASE("output root honours the environment") {
        ::setenv("SMMS_OUTPUT_ROOT", "/tmp/smms_env_root", 1);
        CHECK(output_root() == fs::path("/tmp/smms_env_root"));
        ::unsetenv("SMMS_OUTPUT_ROOT");
        CHECK(output_root("fallback") == fs::path("fallback"));
    }
}
