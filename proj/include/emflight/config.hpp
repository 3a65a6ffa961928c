#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace emflight {

// Raised for malformed config files, unknown keys, and invalid values.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// INI-flavoured key-value file: optional [section] headers, `key = value`
// lines, '#' comments. Keys that appear before any section header live in
// the unnamed section "". Duplicate keys within a section are an error.
class Config {
  public:
    struct Entry {
        std::string section;
        std::string key;
        std::string value;
        int line = 0;
    };

    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text,
                               const std::string& origin = "<string>");

    bool has_section(const std::string& section) const;
    bool has_key(const std::string& section, const std::string& key) const;

    // Required getters throw ConfigError naming the missing/invalid key.
    double get_double(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key,
                      double fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    // Comma-separated list of numbers.
    std::vector<double> get_double_list(const std::string& section,
                                        const std::string& key) const;

    // Keys of one section in file order.
    std::vector<std::string> keys(const std::string& section) const;
    std::vector<std::string> sections() const;

    const Entry* find(const std::string& section, const std::string& key) const;
    const std::string& origin() const { return origin_; }

  private:
    std::vector<Entry> entries_;
    std::string origin_;
};

// Strict scalar parsing: the whole token must be consumed.
double parse_strict_double(const std::string& text, const std::string& what);
int parse_strict_int(const std::string& text, const std::string& what);

}  // namespace emflight
