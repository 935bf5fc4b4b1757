#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "smms/config.hpp"
#include "smms/report.hpp"

namespace smms {

enum ExitStatus : int {
    kStatusPass = 0,
    kStatusInequality = 1,
    kStatusParse = 2,
    kStatusPrecondition = 3,
    kStatusSolver = 4,
};

std::string artifact_version();

/// Outcome of one scenario; one row of summary.csv.
struct RunRecord {
    std::string scenario_id;
    std::string task;
    std::string start;  // ISO 8601 UTC, written to timing.csv only
    std::string end;
    std::string version;
    std::string verdict;   // pass | fail | hypotheses_unmet | error
    std::string expected;  // verdict the scenario declares (default pass)
    double worst_margin = kNotApplicable;
    int status = kStatusPass;
    std::string reason;              // set when status != 0
    std::vector<std::string> files;  // relative to the output root
};

// Names accepted by the `task` key.
const std::vector<std::string>& task_names();

// SMMS_OUTPUT_ROOT when set, else `fallback`.
std::filesystem::path output_root(const std::filesystem::path& fallback = "smms_out");

// Runs one scenario, writes its files under root/<output or id>/ and never
// throws for scenario-level errors: they become the record's status.
RunRecord run_scenario(const ScenarioSpec& spec, const std::filesystem::path& root);

struct SuiteResult {
    std::vector<RunRecord> records;  // sorted by scenario id
    int status = kStatusPass;        // max over records
};

// Runs up to `jobs` scenarios concurrently and writes summary.csv and timing.csv under root.
SuiteResult run_suite(const std::vector<ScenarioSpec>& specs, const std::filesystem::path& root, int jobs);

// scenario_id,task,verdict,expected,status,worst_margin,version,files
void write_summary(const std::vector<RunRecord>& records, std::ostream& os);
// scenario_id,start,end
void write_timing(const std::vector<RunRecord>& records, std::ostream& os);

// smms: status=<n> scenario=<id> reason="<text>"
std::string diagnostic_line(const RunRecord& record);

} // namespace smms
