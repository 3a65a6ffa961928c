#include "emflight/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace emflight {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

double parse_strict_double(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    if (t.empty()) throw ConfigError(what + ": empty numeric value");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE)
        throw ConfigError(what + ": '" + t + "' is not a number");
    return v;
}

int parse_strict_int(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    if (t.empty()) throw ConfigError(what + ": empty integer value");
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size() || errno == ERANGE)
        throw ConfigError(what + ": '" + t + "' is not an integer");
    return static_cast<int>(v);
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
    Config cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": empty section name");
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected 'key = value', got '" + t + "'");
        Entry e;
        e.section = section;
        e.key = trim(t.substr(0, eq));
        e.value = trim(t.substr(eq + 1));
        e.line = lineno;
        if (e.key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (cfg.find(e.section, e.key))
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": duplicate key '" + e.key + "'");
        cfg.entries_.push_back(std::move(e));
    }
    return cfg;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), path);
}

const Config::Entry* Config::find(const std::string& section,
                                  const std::string& key) const {
    for (const auto& e : entries_)
        if (e.section == section && e.key == key) return &e;
    return nullptr;
}

bool Config::has_section(const std::string& section) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const Entry& e) { return e.section == section; });
}

bool Config::has_key(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

double Config::get_double(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) throw ConfigError(origin_ + ": missing required key '" + key + "'" +
                              (section.empty() ? "" : " in section [" + section + "]"));
    return parse_strict_double(e->value, "key '" + key + "'");
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    const Entry* e = find(section, key);
    return e ? parse_strict_double(e->value, "key '" + key + "'") : fallback;
}

int Config::get_int(const std::string& section, const std::string& key,
                    int fallback) const {
    const Entry* e = find(section, key);
    return e ? parse_strict_int(e->value, "key '" + key + "'") : fallback;
}

std::string Config::get_string(const std::string& section,
                               const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) throw ConfigError(origin_ + ": missing required key '" + key + "'" +
                              (section.empty() ? "" : " in section [" + section + "]"));
    return e->value;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
    const Entry* e = find(section, key);
    return e ? e->value : fallback;
}

std::vector<double> Config::get_double_list(const std::string& section,
                                            const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) throw ConfigError(origin_ + ": missing required key '" + key + "'");
    std::vector<double> out;
    std::string item;
    std::istringstream ss(e->value);
    while (std::getline(ss, item, ','))
        out.push_back(parse_strict_double(item, "key '" + key + "'"));
    if (out.empty()) throw ConfigError("key '" + key + "': empty list");
    return out;
}

std::vector<std::string> Config::keys(const std::string& section) const {
    std::vector<std::string> out;
    for (const auto& e : entries_)
        if (e.section == section) out.push_back(e.key);
    return out;
}

std::vector<std::string> Config::sections() const {
    std::vector<std::string> out;
    for (const auto& e : entries_)
        if (std::find(out.begin(), out.end(), e.section) == out.end())
            out.push_back(e.section);
    return out;
}

}  // namespace emflight
