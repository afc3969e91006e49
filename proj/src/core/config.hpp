#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace at::config {

/// Line-oriented config: `[section]` headers followed by `key = value` lines.
/// Blank lines and `#` comments are ignored; keys and sections keep file
/// order so emit() round-trips. Duplicate keys within a section are errors.
struct Config {
    using Section = std::vector<std::pair<std::string, std::string>>;
    std::vector<std::pair<std::string, Section>> sections;

    bool has(const std::string& section, const std::string& key) const;
    const std::string& get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double_or(const std::string& section, const std::string& key,
                         double fallback) const;
    long get_int(const std::string& section, const std::string& key) const;
    long get_int_or(const std::string& section, const std::string& key, long fallback) const;
    std::uint64_t get_seed(const std::string& section, const std::string& key) const;
    std::vector<double> get_doubles(const std::string& section, const std::string& key) const;
    std::vector<long> get_ints(const std::string& section, const std::string& key) const;

    void set(const std::string& section, const std::string& key, const std::string& value);

    std::string emit() const;
};

Config parse(const std::string& text);
Config parse_file(const std::string& path);

/// Strict-mode key check: every (section, key) present in the config must be
/// listed in the schema; rejections name the offending section and key.
void check_keys(const Config& cfg, const std::map<std::string, std::set<std::string>>& schema);

} // namespace at::config
