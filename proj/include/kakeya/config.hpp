#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace kakeya {

/// Config file parse error with the offending line number.
class config_error : public std::runtime_error {
public:
    config_error(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

struct ConfigEntry {
    std::string key;
    std::string value;
    int line = 0;
};

/// Flat key = value file. '#' starts a comment; blank lines are ignored.
/// Duplicate keys are rejected.
std::vector<ConfigEntry> parse_config_entries(const std::string& text);
std::map<std::string, std::string> parse_config_file(const std::string& path);
std::map<std::string, std::string> parse_config_text(const std::string& text);

/// "2^-6" or a plain decimal; rejects non-positive values.
double parse_scale(const std::string& value);

/// Comma-separated list of scales.
std::vector<double> parse_scale_list(const std::string& value);

} // namespace kakeya
