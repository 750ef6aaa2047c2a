#pragma once

// Experiment configs: a small TOML subset (scalar key = value, numeric
// arrays, [section] tables, # comments) with a schema version key, a
// mandatory seed, and strict unknown-key rejection. Parse errors carry line
// numbers and map onto exit code 2 in the CLI.

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ergokit/common.hpp"

namespace ergokit {

constexpr const char* config_schema = "ergokit/1";

struct ConfigValue {
    enum Kind { int_v, float_v, string_v, bool_v, array_v } kind = int_v;
    i64 i = 0;
    double f = 0;
    std::string s;
    bool b = false;
    std::vector<double> arr;
    int line = 0;
};

struct ExperimentConfig {
    std::string experiment;
    u64 seed = 0;
    int threads = 0;  // 0: resolve via --threads / ERGOKIT_THREADS / hardware
    std::string out_dir;
    std::map<std::string, ConfigValue> params;
    std::map<std::string, double> tolerances;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

[[noreturn]] inline void bad_config(int line, const std::string& what) {
    throw config_error("config line " + std::to_string(line) + ": " + what);
}

inline bool looks_numeric(const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '+' || t[0] == '-') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(t[i])) && t[i] != '.' && t[i] != 'e' &&
            t[i] != 'E' && t[i] != '+' && t[i] != '-' && t[i] != '_')
            return false;
    return true;
}

inline ConfigValue parse_scalar(const std::string& raw, int line) {
    ConfigValue v;
    v.line = line;
    std::string t = trim(raw);
    if (t.empty()) bad_config(line, "missing value");
    if (t.front() == '"') {
        if (t.size() < 2 || t.back() != '"') bad_config(line, "unterminated string");
        v.kind = ConfigValue::string_v;
        v.s = t.substr(1, t.size() - 2);
        if (v.s.find('"') != std::string::npos) bad_config(line, "stray quote in string");
        return v;
    }
    if (t == "true" || t == "false") {
        v.kind = ConfigValue::bool_v;
        v.b = (t == "true");
        return v;
    }
    if (!looks_numeric(t)) bad_config(line, "unrecognized value '" + t + "'");
    std::string digits;
    for (char c : t)
        if (c != '_') digits += c;
    bool floaty = digits.find('.') != std::string::npos ||
                  digits.find('e') != std::string::npos || digits.find('E') != std::string::npos;
    std::size_t used = 0;
    try {
        if (floaty) {
            v.kind = ConfigValue::float_v;
            v.f = std::stod(digits, &used);
        } else {
            v.kind = ConfigValue::int_v;
            v.i = std::stoll(digits, &used);
            v.f = double(v.i);
        }
    } catch (const std::exception&) {
        bad_config(line, "malformed number '" + t + "'");
    }
    if (used != digits.size()) bad_config(line, "trailing junk in number '" + t + "'");
    return v;
}

inline ConfigValue parse_value(const std::string& raw, int line) {
    std::string t = trim(raw);
    if (!t.empty() && t.front() == '[') {
        if (t.back() != ']') bad_config(line, "unterminated array");
        ConfigValue v;
        v.kind = ConfigValue::array_v;
        v.line = line;
        std::string body = t.substr(1, t.size() - 2);
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) bad_config(line, "empty array element");
            ConfigValue e = parse_scalar(item, line);
            if (e.kind != ConfigValue::int_v && e.kind != ConfigValue::float_v)
                bad_config(line, "arrays hold numbers only");
            v.arr.push_back(e.f);
        }
        if (v.arr.empty() && !trim(body).empty()) bad_config(line, "malformed array");
        return v;
    }
    return parse_scalar(raw, line);
}

inline bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
    return true;
}

}  // namespace detail

inline ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::string section;  // "" = root
    bool saw_schema = false, saw_seed = false, saw_experiment = false;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = detail::trim(detail::strip_comment(raw));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') detail::bad_config(line, "unterminated table header");
            section = detail::trim(s.substr(1, s.size() - 2));
            if (section != "params" && section != "tolerances")
                detail::bad_config(line, "unknown table [" + section + "]");
            continue;
        }
        std::size_t eq = s.find('=');
        if (eq == std::string::npos) detail::bad_config(line, "expected key = value");
        std::string key = detail::trim(s.substr(0, eq));
        if (!detail::valid_key(key)) detail::bad_config(line, "bad key '" + key + "'");
        if (!seen.insert(section + "." + key).second)
            detail::bad_config(line, "duplicate key '" + key + "'");
        ConfigValue v = detail::parse_value(s.substr(eq + 1), line);

        if (section == "params") {
            cfg.params[key] = v;
            continue;
        }
        if (section == "tolerances") {
            if (v.kind != ConfigValue::int_v && v.kind != ConfigValue::float_v)
                detail::bad_config(line, "tolerance must be a number");
            if (v.f <= 0) detail::bad_config(line, "tolerance must be positive");
            cfg.tolerances[key] = v.f;
            continue;
        }
        if (key == "schema") {
            if (v.kind != ConfigValue::string_v || v.s != config_schema)
                detail::bad_config(line, std::string("schema must be \"") + config_schema + "\"");
            saw_schema = true;
        } else if (key == "experiment") {
            if (v.kind != ConfigValue::string_v || v.s.empty())
                detail::bad_config(line, "experiment must be a nonempty string");
            cfg.experiment = v.s;
            saw_experiment = true;
        } else if (key == "seed") {
            if (v.kind != ConfigValue::int_v || v.i < 0)
                detail::bad_config(line, "seed must be a nonnegative integer");
            cfg.seed = u64(v.i);
            saw_seed = true;
        } else if (key == "threads") {
            if (v.kind != ConfigValue::int_v || v.i < 0 || v.i > 256)
                detail::bad_config(line, "threads must be an integer in [0, 256]");
            cfg.threads = int(v.i);
        } else if (key == "out") {
            if (v.kind != ConfigValue::string_v) detail::bad_config(line, "out must be a string");
            cfg.out_dir = v.s;
        } else {
            detail::bad_config(line, "unknown key '" + key + "'");
        }
    }
    if (!saw_schema) throw config_error("config: missing schema key");
    if (!saw_experiment) throw config_error("config: missing experiment key");
    if (!saw_seed) throw config_error("config: missing seed key");
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

// typed access to [params] with defaults; consumed keys are tracked so that
// unknown ones are rejected once the experiment has read everything it knows
struct ParamReader {
    const std::map<std::string, ConfigValue>* params;
    std::set<std::string> consumed;

    explicit ParamReader(const ExperimentConfig& cfg) : params(&cfg.params) {}

    const ConfigValue* find(const std::string& name) {
        consumed.insert(name);
        auto it = params->find(name);
        return it == params->end() ? nullptr : &it->second;
    }

    u64 count(const std::string& name, u64 fallback) {
        const ConfigValue* v = find(name);
        if (!v) return fallback;
        if (v->kind != ConfigValue::int_v || v->i <= 0)
            detail::bad_config(v->line, "param '" + name + "' must be a positive integer");
        return u64(v->i);
    }

    double real(const std::string& name, double fallback) {
        const ConfigValue* v = find(name);
        if (!v) return fallback;
        if (v->kind != ConfigValue::int_v && v->kind != ConfigValue::float_v)
            detail::bad_config(v->line, "param '" + name + "' must be a number");
        return v->f;
    }

    std::string text(const std::string& name, const std::string& fallback) {
        const ConfigValue* v = find(name);
        if (!v) return fallback;
        if (v->kind != ConfigValue::string_v)
            detail::bad_config(v->line, "param '" + name + "' must be a string");
        return v->s;
    }

    std::vector<double> reals(const std::string& name, std::vector<double> fallback) {
        const ConfigValue* v = find(name);
        if (!v) return fallback;
        if (v->kind == ConfigValue::int_v || v->kind == ConfigValue::float_v) return {v->f};
        if (v->kind != ConfigValue::array_v)
            detail::bad_config(v->line, "param '" + name + "' must be a numeric array");
        if (v->arr.empty()) detail::bad_config(v->line, "param '" + name + "' is empty");
        return v->arr;
    }

    void finish() const {
        for (const auto& [key, value] : *params)
            if (!consumed.count(key))
                detail::bad_config(value.line, "unknown param '" + key + "'");
    }
};

}  // namespace ergokit
