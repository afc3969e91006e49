#include "core/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"

namespace at::config {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

const Config::Section* find_section(const Config& cfg, const std::string& name) {
    for (const auto& [sname, sec] : cfg.sections)
        if (sname == name) return &sec;
    return nullptr;
}

const std::string* find_value(const Config& cfg, const std::string& section,
                              const std::string& key) {
    const auto* sec = find_section(cfg, section);
    if (!sec) return nullptr;
    for (const auto& [k, v] : *sec)
        if (k == key) return &v;
    return nullptr;
}

double to_double(const std::string& section, const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw_config("[" + section + "] " + key + ": '" + v + "' is not a number");
    return x;
}

long to_long(const std::string& section, const std::string& key, const std::string& v) {
    long x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || p != v.data() + v.size())
        throw_config("[" + section + "] " + key + ": '" + v + "' is not an integer");
    return x;
}

} // namespace

bool Config::has(const std::string& section, const std::string& key) const {
    return find_value(*this, section, key) != nullptr;
}

const std::string& Config::get(const std::string& section, const std::string& key) const {
    const auto* v = find_value(*this, section, key);
    if (!v) throw_config("missing required key '" + key + "' in section [" + section + "]");
    return *v;
}

std::string Config::get_or(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
    const auto* v = find_value(*this, section, key);
    return v ? *v : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
    return to_double(section, key, get(section, key));
}

double Config::get_double_or(const std::string& section, const std::string& key,
                             double fallback) const {
    const auto* v = find_value(*this, section, key);
    return v ? to_double(section, key, *v) : fallback;
}

long Config::get_int(const std::string& section, const std::string& key) const {
    return to_long(section, key, get(section, key));
}

long Config::get_int_or(const std::string& section, const std::string& key,
                        long fallback) const {
    const auto* v = find_value(*this, section, key);
    return v ? to_long(section, key, *v) : fallback;
}

std::uint64_t Config::get_seed(const std::string& section, const std::string& key) const {
    const std::string& v = get(section, key);
    std::uint64_t x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || p != v.data() + v.size())
        throw_config("[" + section + "] " + key + ": '" + v + "' is not a valid seed");
    return x;
}

std::vector<double> Config::get_doubles(const std::string& section,
                                        const std::string& key) const {
    std::istringstream in(get(section, key));
    std::vector<double> out;
    std::string tok;
    while (in >> tok) out.push_back(to_double(section, key, tok));
    if (out.empty()) throw_config("[" + section + "] " + key + ": empty list");
    return out;
}

std::vector<long> Config::get_ints(const std::string& section, const std::string& key) const {
    std::istringstream in(get(section, key));
    std::vector<long> out;
    std::string tok;
    while (in >> tok) out.push_back(to_long(section, key, tok));
    if (out.empty()) throw_config("[" + section + "] " + key + ": empty list");
    return out;
}

void Config::set(const std::string& section, const std::string& key,
                 const std::string& value) {
    for (auto& [sname, sec] : sections)
        if (sname == section) {
            for (auto& [k, v] : sec)
                if (k == key) {
                    v = value;
                    return;
                }
            sec.emplace_back(key, value);
            return;
        }
    sections.emplace_back(section, Section{{key, value}});
}

std::string Config::emit() const {
    std::string out;
    for (const auto& [sname, sec] : sections) {
        out += "[" + sname + "]\n";
        for (const auto& [k, v] : sec) out += k + " = " + v + "\n";
        out += "\n";
    }
    return out;
}

Config parse(const std::string& text) {
    Config cfg;
    Config::Section* current = nullptr;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw_config("line " + std::to_string(lineno) + ": unterminated section header");
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (name.empty())
                throw_config("line " + std::to_string(lineno) + ": empty section name");
            if (find_section(cfg, name))
                throw_config("line " + std::to_string(lineno) + ": duplicate section [" + name +
                             "]");
            cfg.sections.emplace_back(name, Config::Section{});
            current = &cfg.sections.back().second;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw_config("line " + std::to_string(lineno) + ": expected 'key = value'");
        if (!current)
            throw_config("line " + std::to_string(lineno) + ": key before any [section]");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw_config("line " + std::to_string(lineno) + ": empty key");
        for (const auto& [k, v] : *current)
            if (k == key)
                throw_config("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        current->emplace_back(key, value);
    }
    return cfg;
}

Config parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void check_keys(const Config& cfg, const std::map<std::string, std::set<std::string>>& schema) {
    for (const auto& [sname, sec] : cfg.sections) {
        const auto it = schema.find(sname);
        if (it == schema.end()) throw_config("unknown section [" + sname + "]");
        for (const auto& [k, v] : sec)
            if (!it->second.contains(k))
                throw_config("unknown key '" + k + "' in section [" + sname + "]");
    }
}

} // namespace at::config
