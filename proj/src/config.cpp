#include "kakeya/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace kakeya {

namespace {
std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}
} // namespace

std::vector<ConfigEntry> parse_config_entries(const std::string& text) {
    std::vector<ConfigEntry> out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string trimmed = trim(line);
        if (trimmed.empty()) continue;
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos) {
            throw config_error(line_no, "expected key = value, got '" + trimmed + "'");
        }
        ConfigEntry entry;
        entry.key = trim(trimmed.substr(0, eq));
        entry.value = trim(trimmed.substr(eq + 1));
        entry.line = line_no;
        if (entry.key.empty()) throw config_error(line_no, "empty key");
        if (entry.value.empty()) {
            throw config_error(line_no, "empty value for key '" + entry.key + "'");
        }
        for (const ConfigEntry& seen : out) {
            if (seen.key == entry.key) {
                throw config_error(line_no, "duplicate key '" + entry.key + "'");
            }
        }
        out.push_back(std::move(entry));
    }
    return out;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> out;
    for (const ConfigEntry& entry : parse_config_entries(text)) out[entry.key] = entry.value;
    return out;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

double parse_scale(const std::string& value) {
    double result = 0.0;
    const auto caret = value.find('^');
    try {
        if (caret != std::string::npos) {
            const double base = std::stod(value.substr(0, caret));
            const double exp = std::stod(value.substr(caret + 1));
            result = std::pow(base, exp);
        } else {
            result = std::stod(value);
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse scale '" + value + "'");
    }
    if (!(result > 0.0)) throw std::invalid_argument("scale must be positive: '" + value + "'");
    return result;
}

std::vector<double> parse_scale_list(const std::string& value) {
    std::vector<double> out;
    std::string token;
    std::istringstream in(value);
    while (std::getline(in, token, ',')) {
        if (token.find_first_not_of(" \t") == std::string::npos) continue;
        out.push_back(parse_scale(token));
    }
    if (out.empty()) throw std::invalid_argument("empty scale list");
    return out;
}

} // namespace kakeya
