#pragma once

#include <cmath>
#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace smms {

enum class Verdict { Pass, Fail, HypothesesUnmet };

std::string to_string(Verdict v);

inline constexpr double kNotApplicable = std::numeric_limits<double>::quiet_NaN();

// One evaluated instance of an inequality lhs <= rhs. Margins are always
// rhs - lhs, so "pass" means margin >= -tol for every check.
struct Sample {
    std::string probe;
    double x = kNotApplicable;
    double t = kNotApplicable;
    double lhs = 0;
    double rhs = 0;
    double margin = 0;
    double tol = kNotApplicable;  // per-sample tolerance; falls back to the report's
};

struct Hypothesis {
    std::string name;
    bool holds = true;
    double witness = 0;  // worst value of the hypothesis expression seen
    std::string detail;
};

/// Per-check record: samples, worst margin, verdict, free-form metadata.
class InequalityReport {
public:
    InequalityReport() = default;
    InequalityReport(std::string name, double tol) : name_(std::move(name)), tol_(tol) {}

    void add(std::string probe, double x, double t, double lhs, double rhs);
    void add(std::string probe, double x, double t, double lhs, double rhs, double tol);
    void add_sample(Sample s);
    void note(std::string key, std::string value);
    void note(std::string key, double value);
    void warn(std::string message);
    void add_hypothesis(Hypothesis h);

    // Recomputes the worst margin and the verdict: pass iff every sample has
    // margin >= -tol. Unmet hypotheses override pass/fail; an empty sample set
    // passes vacuously.
    void finalize();

    const std::string& name() const noexcept { return name_; }
    double tol() const noexcept { return tol_; }
    void set_tol(double tol) { tol_ = tol; }
    double worst_margin() const noexcept { return worst_margin_; }
    const Sample* worst() const;
    double tolerance_of(const Sample& s) const { return std::isnan(s.tol) ? tol_ : s.tol; }
    Verdict verdict() const noexcept { return verdict_; }
    bool passed() const noexcept { return verdict_ == Verdict::Pass; }
    bool hypotheses_met() const;

    const std::vector<Sample>& samples() const noexcept { return samples_; }
    const std::vector<std::pair<std::string, std::string>>& metadata() const noexcept { return metadata_; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }
    const std::vector<Hypothesis>& hypotheses() const noexcept { return hypotheses_; }
    std::string metadata_value(const std::string& key) const;

    // Merge samples, warnings and hypotheses of another report; prefixes probes.
    void absorb(const InequalityReport& other, const std::string& prefix);

private:
    std::string name_;
    double tol_ = 0;
    std::vector<Sample> samples_;
    std::vector<std::pair<std::string, std::string>> metadata_;
    std::vector<std::string> warnings_;
    std::vector<Hypothesis> hypotheses_;
    double worst_margin_ = std::numeric_limits<double>::infinity();
    std::size_t worst_index_ = 0;
    Verdict verdict_ = Verdict::Pass;
};

// Decay studies: lhs = observed functional at t, rhs = theoretical bound.
struct DecayReport {
    InequalityReport inequality;
    std::vector<double> times;
    std::vector<double> observed_ratio;
    std::vector<double> theoretical_rate;
    double worst_excess = 0;  // max(observed ratio / rate - 1)

    bool passed() const { return inequality.passed(); }
};

// Gradient-estimate checks along a nonlinear solution.
struct GradientBoundReport {
    std::string theorem;
    InequalityReport inequality;
    double sup_v = 0;           // M
    double curvature_const = 0; // K = (p - 1)(m - 1) k
    double a = 0;
    double empirical_constant = kNotApplicable;  // local estimates only
    std::string sup_convention;

    bool passed() const { return inequality.passed(); }
};

std::string format_number(double x);
// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

// kind,probe,x,t,lhs,rhs,margin with one "summary" row carrying the worst sample.
void write_csv(const InequalityReport& report, std::ostream& os);
// t,lhs,rhs,margin
void write_decay_csv(const DecayReport& report, std::ostream& os);
// Two whitespace-separated columns.
void write_plot_data(const std::vector<double>& xs, const std::vector<double>& ys, std::ostream& os);

} // namespace smms
