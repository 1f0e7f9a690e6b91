#include "wicklab/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "wicklab/errors.hpp"

namespace wicklab {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        std::string t = trim(cur);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& s, char sep) {
    std::vector<double> out;
    for (const auto& tok : split_list(s, sep)) {
        char* end = nullptr;
        double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0')
            throw config_error("not a number: '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& s, char sep) {
    std::vector<int> out;
    for (double v : parse_double_list(s, sep)) out.push_back(static_cast<int>(v));
    return out;
}

bool ConfigSection::has(const std::string& key) const {
    for (const auto& [k, v] : entries)
        if (k == key) return true;
    return false;
}

std::optional<std::string> ConfigSection::get(const std::string& key) const {
    for (const auto& [k, v] : entries)
        if (k == key) return v;
    return std::nullopt;
}

std::string ConfigSection::get_or(const std::string& key,
                                  const std::string& dflt) const {
    auto v = get(key);
    return v ? *v : dflt;
}

std::string ConfigSection::require(const std::string& key) const {
    auto v = get(key);
    if (!v)
        throw config_error("missing key '" + key + "' in section [" + name + "]");
    return *v;
}

std::vector<std::string> ConfigSection::get_all(const std::string& key) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries)
        if (k == key) out.push_back(v);
    return out;
}

double ConfigSection::as_double(const std::string& key) const {
    std::string v = require(key);
    char* end = nullptr;
    double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str())
        throw config_error("key '" + key + "' is not a number: '" + v + "'");
    return x;
}

double ConfigSection::as_double_or(const std::string& key, double dflt) const {
    return has(key) ? as_double(key) : dflt;
}

int ConfigSection::as_int(const std::string& key) const {
    return static_cast<int>(as_double(key));
}

int ConfigSection::as_int_or(const std::string& key, int dflt) const {
    return has(key) ? as_int(key) : dflt;
}

Config Config::parse(const std::string& text) {
    Config cfg;
    ConfigSection* cur = nullptr;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("line " + std::to_string(lineno) +
                                   ": unterminated section header");
            cfg.sections.push_back({trim(line.substr(1, line.size() - 2)), {}});
            cur = &cfg.sections.back();
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(lineno) +
                               ": expected 'key = value'");
        if (!cur) {
            cfg.sections.push_back({"", {}});
            cur = &cfg.sections.back();
        }
        cur->entries.emplace_back(trim(line.substr(0, eq)),
                                  trim(line.substr(eq + 1)));
    }
    return cfg;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

const ConfigSection* Config::find(const std::string& name) const {
    for (const auto& s : sections)
        if (s.name == name) return &s;
    return nullptr;
}

std::vector<const ConfigSection*> Config::find_all(const std::string& name) const {
    std::vector<const ConfigSection*> out;
    for (const auto& s : sections)
        if (s.name == name) out.push_back(&s);
    return out;
}

} // namespace wicklab
