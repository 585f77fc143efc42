#include "wallbench/config.hpp"

#include "wallbench/error.hpp"
#include "wallbench/text.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace wallbench {

namespace {

std::string qualified(const std::string& section, const std::string& key) {
    return section + "." + key;
}

} // namespace

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("config: read failed for " + path.string());
    return from_text(buffer.str());
}

RunConfig RunConfig::from_text(const std::string& text) {
    RunConfig cfg;
    std::string section = "run";
    std::size_t line_no = 0;
    std::istringstream lines(text);
    std::string raw;
    while (std::getline(lines, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#' || line.front() == ';') continue;

        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": malformed section header");
            }
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section.empty()) {
                throw ConfigError("config line " + std::to_string(line_no) + ": empty section name");
            }
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        }
        if (cfg.has(section, key)) {
            throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key " +
                              qualified(section, key));
        }
        cfg.values_[section][key] = value;
    }
    return cfg;
}

void RunConfig::set(const std::string& section, const std::string& key, const std::string& value) {
    if (section.empty() || key.empty()) throw ConfigError("config: empty section or key");
    values_[section][key] = value;
}

bool RunConfig::has(const std::string& section, const std::string& key) const {
    const auto sec = values_.find(section);
    return sec != values_.end() && sec->second.count(key) != 0;
}

std::string RunConfig::get_string(const std::string& section, const std::string& key) const {
    const auto sec = values_.find(section);
    if (sec != values_.end()) {
        const auto it = sec->second.find(key);
        if (it != sec->second.end()) return it->second;
    }
    throw ConfigError("config: missing required key " + qualified(section, key));
}

std::string RunConfig::get_string(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
    return has(section, key) ? get_string(section, key) : fallback;
}

double RunConfig::get_double(const std::string& section, const std::string& key,
                             double fallback) const {
    if (!has(section, key)) return fallback;
    try {
        return parse_double(get_string(section, key));
    } catch (const ValidationError&) {
        throw ConfigError("config: " + qualified(section, key) + " is not a number");
    }
}

long long RunConfig::get_int(const std::string& section, const std::string& key,
                             long long fallback) const {
    if (!has(section, key)) return fallback;
    try {
        return parse_int(get_string(section, key));
    } catch (const ValidationError&) {
        throw ConfigError("config: " + qualified(section, key) + " is not an integer");
    }
}

std::uint64_t RunConfig::get_u64(const std::string& section, const std::string& key,
                                 std::uint64_t fallback) const {
    if (!has(section, key)) return fallback;
    try {
        return parse_u64(get_string(section, key));
    } catch (const ValidationError&) {
        throw ConfigError("config: " + qualified(section, key) + " is not an unsigned integer");
    }
}

bool RunConfig::get_bool(const std::string& section, const std::string& key, bool fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get_string(section, key);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("config: " + qualified(section, key) + " must be true/false/1/0");
}

std::vector<int> RunConfig::get_int_list(const std::string& section, const std::string& key,
                                         const std::vector<int>& fallback) const {
    if (!has(section, key)) return fallback;
    std::vector<int> out;
    for (const std::string& part : split(get_string(section, key), ',')) {
        try {
            out.push_back(static_cast<int>(parse_int(trim(part))));
        } catch (const ValidationError&) {
            throw ConfigError("config: " + qualified(section, key) +
                              " must be a comma-separated integer list");
        }
    }
    if (out.empty()) {
        throw ConfigError("config: " + qualified(section, key) + " must not be empty");
    }
    return out;
}

std::string RunConfig::canonical_text() const {
    std::string out;
    for (const auto& [section, entries] : values_) {
        out += "[" + section + "]\n";
        for (const auto& [key, value] : entries) out += key + " = " + value + "\n";
    }
    return out;
}

std::uint64_t RunConfig::hash() const { return fnv1a64(canonical_text()); }

void RunConfig::require_known(const std::vector<std::string>& allowed) const {
    std::string unknown;
    for (const auto& [section, entries] : values_) {
        for (const auto& [key, value] : entries) {
            const std::string name = qualified(section, key);
            if (std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
                unknown += unknown.empty() ? name : ", " + name;
            }
        }
    }
    if (!unknown.empty()) throw ConfigError("config: unknown keys: " + unknown);
}

} // namespace wallbench
