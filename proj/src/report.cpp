#include "smms/report.hpp"

#include <cstdio>
#include <ostream>

namespace smms {

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::HypothesesUnmet: return "hypotheses_unmet";
    }
    return "unknown";
}

std::string format_number(double x) {
    if (std::isnan(x)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void InequalityReport::add(std::string probe, double x, double t, double lhs, double rhs) {
    add_sample(Sample{std::move(probe), x, t, lhs, rhs, rhs - lhs});
}

void InequalityReport::add(std::string probe, double x, double t, double lhs, double rhs, double tol) {
    add_sample(Sample{std::move(probe), x, t, lhs, rhs, rhs - lhs, tol});
}

void InequalityReport::add_sample(Sample s) { samples_.push_back(std::move(s)); }

void InequalityReport::note(std::string key, std::string value) {
    for (auto& [k, v] : metadata_) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    metadata_.emplace_back(std::move(key), std::move(value));
}

void InequalityReport::note(std::string key, double value) { note(std::move(key), format_number(value)); }

void InequalityReport::warn(std::string message) { warnings_.push_back(std::move(message)); }

void InequalityReport::add_hypothesis(Hypothesis h) { hypotheses_.push_back(std::move(h)); }

bool InequalityReport::hypotheses_met() const {
    for (const auto& h : hypotheses_)
        if (!h.holds) return false;
    return true;
}

std::string InequalityReport::metadata_value(const std::string& key) const {
    for (const auto& [k, v] : metadata_)
        if (k == key) return v;
    return {};
}

void InequalityReport::finalize() {
    worst_margin_ = std::numeric_limits<double>::infinity();
    worst_index_ = 0;
    bool all_within = true;
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const double m = samples_[i].margin;
        if (std::isnan(m) || !(m >= -tolerance_of(samples_[i]))) all_within = false;
        if (std::isnan(m) || m < worst_margin_) {
            worst_margin_ = m;
            worst_index_ = i;
            if (std::isnan(m)) break;
        }
    }
    if (!hypotheses_met()) {
        verdict_ = Verdict::HypothesesUnmet;
    } else {
        verdict_ = all_within ? Verdict::Pass : Verdict::Fail;
    }
}

const Sample* InequalityReport::worst() const {
    return samples_.empty() ? nullptr : &samples_[worst_index_];
}

void InequalityReport::absorb(const InequalityReport& other, const std::string& prefix) {
    for (Sample s : other.samples_) {
        s.probe = prefix + s.probe;
        samples_.push_back(std::move(s));
    }
    for (const auto& w : other.warnings_) warnings_.push_back(prefix + w);
    for (Hypothesis h : other.hypotheses_) {
        h.name = prefix + h.name;
        hypotheses_.push_back(std::move(h));
    }
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

void write_csv(const InequalityReport& report, std::ostream& os) {
    os << "kind,probe,x,t,lhs,rhs,margin\n";
    for (const auto& s : report.samples()) {
        os << "point," << csv_field(s.probe) << ',' << format_number(s.x) << ',' << format_number(s.t) << ','
           << format_number(s.lhs) << ',' << format_number(s.rhs) << ',' << format_number(s.margin) << '\n';
    }
    if (const Sample* w = report.worst()) {
        os << "summary," << csv_field(w->probe) << ',' << format_number(w->x) << ',' << format_number(w->t) << ','
           << format_number(w->lhs) << ',' << format_number(w->rhs) << ',' << format_number(w->margin) << '\n';
    }
}

void write_decay_csv(const DecayReport& report, std::ostream& os) {
    os << "t,lhs,rhs,margin\n";
    for (const auto& s : report.inequality.samples()) {
        os << format_number(s.t) << ',' << format_number(s.lhs) << ',' << format_number(s.rhs) << ','
           << format_number(s.margin) << '\n';
    }
}

void write_plot_data(const std::vector<double>& xs, const std::vector<double>& ys, std::ostream& os) {
    const std::size_t n = std::min(xs.size(), ys.size());
    for (std::size_t i = 0; i < n; ++i) os << format_number(xs[i]) << ' ' << format_number(ys[i]) << '\n';
}

} // namespace smms
