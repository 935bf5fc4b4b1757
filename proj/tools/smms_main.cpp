#include <cmath>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "smms/config.hpp"
#include "smms/errors.hpp"
#include "smms/nonlinear.hpp"
#include "smms/scenario.hpp"
#include "smms/space.hpp"

namespace {

int report(const smms::SuiteResult& result) {
    for (const auto& r : result.records) {
        std::cout << r.scenario_id << ' ' << r.verdict << " (expected " << r.expected << ")";
        if (!std::isnan(r.worst_margin)) std::cout << " worst_margin=" << smms::format_number(r.worst_margin);
        std::cout << '\n';
        if (r.status != smms::kStatusPass) std::cerr << smms::diagnostic_line(r) << '\n';
    }
    return result.status;
}

int run(const std::string& path, int jobs) {
    try {
        const auto specs = smms::load_scenarios(path);
        const auto root = smms::output_root();
        const int status = report(smms::run_suite(specs, root, jobs));
        std::cout << "summary: " << (root / "summary.csv").string() << '\n';
        return status;
    } catch (const smms::ParseError& e) {
        std::cerr << "smms: status=" << smms::kStatusParse << " scenario= reason=\"" << e.what() << "\"\n";
        return smms::kStatusParse;
    } catch (const smms::PreconditionError& e) {
        std::cerr << "smms: status=" << smms::kStatusPrecondition << " scenario= reason=\"" << e.what() << "\"\n";
        return smms::kStatusPrecondition;
    } catch (const std::exception& e) {
        std::cerr << "smms: status=" << smms::kStatusSolver << " scenario= reason=\"" << e.what() << "\"\n";
        return smms::kStatusSolver;
    }
}

void list_registries() {
    std::cout << "weights:\n";
    for (const auto& e : smms::WeightSpec::registry()) {
        std::cout << "  " << e.id << (e.params.empty() ? "" : " [" + e.params + "]") << "  " << e.description << '\n';
    }
    std::cout << "nonlinearities:\n";
    for (const auto& e : smms::NonlinearitySpec::registry()) {
        std::cout << "  " << e.id << (e.params.empty() ? "" : " [" + e.params + "]") << "  " << e.description << '\n';
    }
    std::cout << "aux functions:\n";
    for (const auto& e : smms::AuxFunction::registry()) {
        std::cout << "  " << e.id << (e.params.empty() ? "" : " [" + e.params + "]") << "  " << e.description << '\n';
    }
    std::cout << "tasks:\n";
    for (const auto& t : smms::task_names()) std::cout << "  " << t << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical checks of functional inequalities on weighted 1-D spaces"};
    app.require_subcommand(1);

    std::string config;
    auto* run_cmd = app.add_subcommand("run", "Run every scenario of one config file");
    run_cmd->add_option("config", config, "Scenario file (.ini or .json)")->required();

    std::string suite_path;
    int jobs = 1;
    auto* suite_cmd = app.add_subcommand("suite", "Run a suite file or a directory of scenario files");
    suite_cmd->add_option("path", suite_path, "Suite file or directory")->required();
    suite_cmd->add_option("--jobs,-j", jobs, "Scenarios run concurrently")->check(CLI::PositiveNumber);

    auto* list_cmd = app.add_subcommand("list-registries", "List weights, nonlinearities, aux functions and tasks");
    auto* version_cmd = app.add_subcommand("version", "Print the artifact version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : smms::kStatusParse;
    }

    if (*run_cmd) return run(config, 1);
    if (*suite_cmd) return run(suite_path, jobs);
    if (*list_cmd) {
        list_registries();
        return 0;
    }
    if (*version_cmd) {
        std::cout << "smms " << smms::artifact_version() << '\n';
        return 0;
    }
    return smms::kStatusParse;
}
