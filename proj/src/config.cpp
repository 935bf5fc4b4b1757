#include "smms/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "smms/errors.hpp"
#include "smms/expr.hpp"

namespace smms {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string strip_comment(const std::string& line) {
    for (std::size_t i = 0; i < line.size(); ++i) {
        if ((line[i] == '#' || line[i] == ';') && (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1])))) {
            // ';' separates list items inside values; only treat it as a comment at line start.
            if (line[i] == ';' && trim(line.substr(0, i)).size() > 0) continue;
            return line.substr(0, i);
        }
    }
    return line;
}

void check_id(const std::string& id, const std::string& where) {
    if (id.empty()) throw ParseError(where + ": empty scenario id");
    for (char c : id) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
            throw ParseError(where + ": scenario id '" + id + "' may only use letters, digits, '_', '-', '.'");
        }
    }
}

std::vector<ScenarioSpec> apply_defaults(std::vector<ScenarioSpec> specs, const std::map<std::string, std::string>& d) {
    for (auto& s : specs) {
        for (const auto& [k, v] : d) {
            if (!s.has(k)) s.set(k, v);
        }
    }
    return specs;
}

} // namespace

void ScenarioSpec::set(const std::string& key, const std::string& value) { values_[key] = value; }

std::string ScenarioSpec::str(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ParseError("scenario '" + id_ + "': missing key '" + key + "'");
    used_.insert(key);
    return it->second;
}

std::string ScenarioSpec::str(const std::string& key, const std::string& fallback) const {
    return has(key) ? str(key) : fallback;
}

double parse_number(const std::string& text, const std::string& what) {
    const std::string t = lower(trim(text));
    if (t == "inf" || t == "+inf" || t == "infinity") return std::numeric_limits<double>::infinity();
    if (t == "-inf" || t == "-infinity") return -std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    try {
        const double v = std::stod(t, &used);
        if (used == t.size()) return v;
    } catch (const std::exception&) {
    }
    // Constant expressions such as pi/2 or 2*exp(-1).
    try {
        return Expression(t, {}).eval({});
    } catch (const ParseError&) {
        throw ParseError(what + ": '" + text + "' is not a number");
    }
}

double ScenarioSpec::num(const std::string& key) const {
    return parse_number(str(key), "scenario '" + id_ + "' key '" + key + "'");
}

double ScenarioSpec::num(const std::string& key, double fallback) const { return has(key) ? num(key) : fallback; }

long ScenarioSpec::integer(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    const double v = num(key);
    if (std::floor(v) != v || std::abs(v) > 1e15) {
        throw ParseError("scenario '" + id_ + "' key '" + key + "': expected an integer");
    }
    return static_cast<long>(v);
}

bool ScenarioSpec::flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = lower(trim(str(key)));
    if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
    if (v == "false" || v == "no" || v == "0" || v == "off") return false;
    throw ParseError("scenario '" + id_ + "' key '" + key + "': expected a boolean");
}

std::vector<double> ScenarioSpec::numbers(const std::string& key, std::vector<double> fallback) const {
    if (!has(key)) return fallback;
    std::string v = str(key);
    std::replace(v.begin(), v.end(), ',', ' ');
    std::replace(v.begin(), v.end(), ';', ' ');
    std::istringstream is(v);
    std::vector<double> out;
    std::string tok;
    while (is >> tok) out.push_back(parse_number(tok, "scenario '" + id_ + "' key '" + key + "'"));
    return out;
}

std::vector<std::string> ScenarioSpec::items(const std::string& key) const {
    std::vector<std::string> out;
    if (!has(key)) return out;
    std::istringstream is(str(key));
    std::string item;
    while (std::getline(is, item, ';')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

void ScenarioSpec::reject_unused() const {
    std::vector<std::string> unused;
    for (const auto& [k, v] : values_) {
        if (!used_.count(k)) unused.push_back(k);
    }
    if (unused.empty()) return;
    std::string list;
    for (const auto& k : unused) list += (list.empty() ? "" : ", ") + k;
    throw ParseError("scenario '" + id_ + "': unknown key(s) " + list);
}

std::vector<ScenarioSpec> parse_ini(const std::string& text, const std::string& origin) {
    std::vector<ScenarioSpec> specs;
    std::map<std::string, std::string> defaults;
    bool in_defaults = false;
    std::istringstream is(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        const std::string where = origin + ":" + std::to_string(lineno);
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(where + ": unterminated section header");
            const std::string id = trim(line.substr(1, line.size() - 2));
            if (id == "defaults") {
                in_defaults = true;
                continue;
            }
            check_id(id, where);
            for (const auto& prev : specs) {
                if (prev.id() == id) throw ParseError(where + ": duplicate scenario id '" + id + "'");
            }
            in_defaults = false;
            specs.emplace_back(id, origin);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(where + ": expected 'key = value'");
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(where + ": empty key");
        if (in_defaults) {
            defaults[key] = value;
            continue;
        }
        if (specs.empty()) throw ParseError(where + ": key '" + key + "' outside any section");
        if (specs.back().has(key)) throw ParseError(where + ": duplicate key '" + key + "'");
        specs.back().set(key, value);
    }
    return apply_defaults(std::move(specs), defaults);
}

namespace {

std::string json_scalar(const nlohmann::json& v, const std::string& where) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) {
        std::ostringstream os;
        os.precision(17);
        os << v.get<double>();
        return os.str();
    }
    if (v.is_array()) {
        std::string out;
        for (const auto& e : v) out += (out.empty() ? "" : " ") + json_scalar(e, where);
        return out;
    }
    throw ParseError(where + ": unsupported JSON value");
}

ScenarioSpec json_section(const std::string& id, const nlohmann::json& obj, const std::string& origin) {
    if (!obj.is_object()) throw ParseError(origin + ": scenario '" + id + "' must be an object");
    check_id(id, origin);
    ScenarioSpec s(id, origin);
    for (const auto& [k, v] : obj.items()) {
        if (k == "id") continue;
        s.set(lower(k), json_scalar(v, origin + ": " + id + "." + k));
    }
    return s;
}

} // namespace

std::vector<ScenarioSpec> parse_json(const std::string& text, const std::string& origin) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(origin + ": " + e.what());
    }
    if (!doc.is_object()) throw ParseError(origin + ": top level must be an object");
    std::map<std::string, std::string> defaults;
    if (doc.contains("defaults")) {
        for (const auto& [k, v] : doc["defaults"].items()) defaults[lower(k)] = json_scalar(v, origin + ": defaults");
    }
    std::vector<ScenarioSpec> specs;
    if (doc.contains("scenarios")) {
        if (!doc["scenarios"].is_array()) throw ParseError(origin + ": 'scenarios' must be an array");
        for (const auto& sc : doc["scenarios"]) {
            if (!sc.is_object() || !sc.contains("id") || !sc["id"].is_string()) {
                throw ParseError(origin + ": every scenario needs a string 'id'");
            }
            specs.push_back(json_section(sc["id"].get<std::string>(), sc, origin));
        }
    } else {
        for (const auto& [id, obj] : doc.items()) {
            if (id == "defaults") continue;
            specs.push_back(json_section(id, obj, origin));
        }
    }
    return apply_defaults(std::move(specs), defaults);
}

namespace {

std::vector<ScenarioSpec> load_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ParseError("cannot read '" + p.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    const std::string t = trim(text);
    if (p.extension() == ".json" || (!t.empty() && t.front() == '{')) return parse_json(text, p.string());
    return parse_ini(text, p.string());
}

} // namespace

std::vector<ScenarioSpec> load_scenarios(const std::string& path) {
    namespace fs = std::filesystem;
    std::vector<ScenarioSpec> specs;
    std::error_code ec;
    if (fs::is_directory(path, ec)) {
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(path)) {
            const auto ext = e.path().extension();
            if (e.is_regular_file() && (ext == ".ini" || ext == ".json")) files.push_back(e.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            auto part = load_file(f);
            specs.insert(specs.end(), part.begin(), part.end());
        }
    } else {
        specs = load_file(path);
    }
    if (specs.empty()) throw ParseError("'" + path + "' contains no scenarios");
    std::set<std::string> seen;
    for (const auto& s : specs) {
        if (!seen.insert(s.id()).second) throw ParseError("duplicate scenario id '" + s.id() + "'");
    }
    return specs;
}

} // namespace smms
