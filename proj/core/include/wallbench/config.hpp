#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace wallbench {

/// Sectioned key-value run configuration. Text form is INI-like: `[section]`
/// headers, `key = value` lines, `#`/`;` comments; keys before the first
/// header land in [run]. Typed getters raise ConfigError naming the key, and
/// require_known rejects anything outside the schema the command declares.
class RunConfig {
public:
    RunConfig() = default;

    static RunConfig from_file(const std::filesystem::path& path);
    static RunConfig from_text(const std::string& text);

    /// Overrides or inserts one value (CLI flags go through here).
    void set(const std::string& section, const std::string& key, const std::string& value);
    bool has(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    long long get_int(const std::string& section, const std::string& key,
                      long long fallback) const;
    std::uint64_t get_u64(const std::string& section, const std::string& key,
                          std::uint64_t fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<int> get_int_list(const std::string& section, const std::string& key,
                                  const std::vector<int>& fallback) const;

    /// Sorted, whitespace-normalized rendering; the reproducibility hash input.
    std::string canonical_text() const;
    std::uint64_t hash() const;

    /// Every present section.key must appear in `allowed`.
    void require_known(const std::vector<std::string>& allowed) const;

private:
    std::map<std::string, std::map<std::string, std::string>> values_;
};

} // namespace wallbench
