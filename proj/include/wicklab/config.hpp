#ifndef WICKLAB_CONFIG_HPP
#define WICKLAB_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

namespace wicklab {

// Flat key/value text with [section] headers.  '#' starts a comment, keys
// may repeat (each occurrence is kept, in order), section names may repeat
// (each occurrence opens a new section instance).

struct ConfigSection {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;

    bool has(const std::string& key) const;
    std::optional<std::string> get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& dflt) const;
    std::string require(const std::string& key) const;
    std::vector<std::string> get_all(const std::string& key) const;

    double as_double(const std::string& key) const;
    double as_double_or(const std::string& key, double dflt) const;
    int as_int(const std::string& key) const;
    int as_int_or(const std::string& key, int dflt) const;
};

struct Config {
    std::vector<ConfigSection> sections;

    static Config parse(const std::string& text);
    static Config parse_file(const std::string& path);

    const ConfigSection* find(const std::string& name) const;
    std::vector<const ConfigSection*> find_all(const std::string& name) const;
};

std::vector<std::string> split_list(const std::string& s, char sep = ',');
std::vector<double> parse_double_list(const std::string& s, char sep = ',');
std::vector<int> parse_int_list(const std::string& s, char sep = ',');
std::string trim(const std::string& s);

} // namespace wicklab

#endif
