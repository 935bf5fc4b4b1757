// Runs every shipped criterion suite and prints one PASS/FAIL line per criterion.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "smms/config.hpp"
#include "smms/scenario.hpp"

namespace fs = std::filesystem;
using namespace smms;

namespace {

const char* kLabels[] = {
    "operator identities converge at order >= 1.8",
    "CD(1,inf) holds and CD(2,inf) fails on the OU space",
    "Poincare equality and LSI on seeded fields",
    "variance and entropy decay",
    "hypercontractivity at the critical time",
    "Lp derivative identity against finite differences",
    "Wasserstein contraction and translation oracle",
    "Gaussian isoperimetry",
    "Euclidean and sphere profiles, Brunn-Minkowski",
    "nonlinear solver convergence, mass and ODE case",
    "closed-manifold gradient bounds and hypothesis rejection",
    "local estimate constant finite and refinement stable",
    "Jacobi eigencheck",
    "determinism across reruns and job counts",
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Relative path -> bytes of every output except timing.csv.
std::map<std::string, std::string> snapshot(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (!e.is_regular_file() || e.path().filename() == "timing.csv") continue;
        out[fs::relative(e.path(), root).string()] = slurp(e.path());
    }
    return out;
}

std::string describe(const SuiteResult& r) {
    std::string bad;
    for (const auto& rec : r.records) {
        if (rec.status != kStatusPass) {
            bad += " " + rec.scenario_id + "=" + rec.verdict + (rec.reason.empty() ? "" : "(" + rec.reason + ")");
        }
    }
    return std::to_string(r.records.size()) + " scenarios" + (bad.empty() ? "" : ";" + bad);
}

bool run_criterion(int n, const fs::path& suites, const fs::path& work) {
    char name[32];
    std::snprintf(name, sizeof name, "criterion_%02d", n);
    const auto root = work / name;
    bool ok = false;
    std::string detail;
    try {
        if (n == 14) {
            // Whole shipped suite: serial run, parallel run, and a serial rerun.
            const auto specs = load_scenarios(suites.string());
            const auto a = run_suite(specs, root / "jobs1", 1);
            const auto b = run_suite(specs, root / "jobs4", 4);
            const auto c = run_suite(specs, root / "rerun", 1);
            const auto sa = snapshot(root / "jobs1");
            const bool same = sa == snapshot(root / "jobs4") && sa == snapshot(root / "rerun");
            ok = same && a.status == kStatusPass && b.status == kStatusPass && c.status == kStatusPass;
            detail = std::to_string(sa.size()) + " files " + (same ? "identical" : "differ") + ", " + describe(a);
        } else {
            const auto r = run_suite(load_scenarios((suites / (std::string(name) + ".ini")).string()), root, 4);
            ok = r.status == kStatusPass;
            detail = describe(r);
        }
    } catch (const std::exception& e) {
        detail = std::string("error: ") + e.what();
    }
    std::printf("criterion %2d: %s  %s [%s]\n", n, ok ? "PASS" : "FAIL", kLabels[n - 1], detail.c_str());
    std::fflush(stdout);
    return ok;
}

} // namespace

int main(int argc, char** argv) {
    const fs::path suites = argc > 1 ? argv[1] : SMMS_SUITE_DIR;
    const fs::path work = fs::temp_directory_path() / "smms_acceptance";
    fs::remove_all(work);
    int failures = 0;
    for (int n = 1; n <= 14; ++n) failures += run_criterion(n, suites, work) ? 0 : 1;
    fs::remove_all(work);
    std::printf("%d of 14 criteria passed\n", 14 - failures);
    return failures == 0 ? 0 : 1;
}
