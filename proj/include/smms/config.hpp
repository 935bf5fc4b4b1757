#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace smms {

/// One [section] of a scenario file: key = value pairs in file order.
/// Accessors record which keys were read so that typos surface as parse errors.
class ScenarioSpec {
public:
    ScenarioSpec() = default;
    ScenarioSpec(std::string id, std::string origin) : id_(std::move(id)), origin_(std::move(origin)) {}

    const std::string& id() const noexcept { return id_; }
    const std::string& origin() const noexcept { return origin_; }

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string str(const std::string& key) const;
    std::string str(const std::string& key, const std::string& fallback) const;
    double num(const std::string& key) const;
    double num(const std::string& key, double fallback) const;
    long integer(const std::string& key, long fallback) const;
    bool flag(const std::string& key, bool fallback) const;
    // Whitespace- or comma-separated numbers.
    std::vector<double> numbers(const std::string& key, std::vector<double> fallback = {}) const;
    // ';'-separated items, trimmed, empty items dropped.
    std::vector<std::string> items(const std::string& key) const;

    // Throws ParseError naming any key that was never read.
    void reject_unused() const;

    const std::map<std::string, std::string>& values() const noexcept { return values_; }

private:
    std::string id_;
    std::string origin_;
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> used_;
};

// Parses the sectioned key = value format. A [defaults] section supplies
// values to every later section that does not set them. '#' and ';' start
// comments at the beginning of a line or after whitespace.
std::vector<ScenarioSpec> parse_ini(const std::string& text, const std::string& origin);

// JSON mirror: {"defaults": {...}, "scenarios": [{"id": ..., ...}, ...]}
// or an object mapping ids to key/value objects. Arrays become space-joined lists.
std::vector<ScenarioSpec> parse_json(const std::string& text, const std::string& origin);

// Reads a file (JSON when it ends in .json or starts with '{') or every
// .ini/.json file of a directory in name order. Throws ParseError when no
// scenarios are found or ids repeat.
std::vector<ScenarioSpec> load_scenarios(const std::string& path);

double parse_number(const std::string& text, const std::string& what);

} // namespace smms
