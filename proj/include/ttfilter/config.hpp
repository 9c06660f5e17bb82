#pragma once

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ttfilter/common.hpp"

namespace ttfilter {

/// Key-value experiment configuration with nested tables:
///
///   # comment
///   [filter]
///   eps_tt = 1e-3
///   horizon = 20
///
/// Values stay strings until typed access. Unknown sections or keys are hard
/// errors at validation time; silent typos in experiment configs are the
/// main reproducibility hazard.
class Config {
public:
    Config() = default;

    static Config parse(std::istream& is) {
        Config cfg;
        std::string line, section;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError("config line " + std::to_string(lineno) +
                                      ": malformed section header");
                section = trim(line.substr(1, line.size() - 2));
                if (section.empty())
                    throw ConfigError("config line " + std::to_string(lineno) + ": empty section");
                cfg.tables_[section];
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty())
                throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
            if (section.empty())
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": key outside any [section]");
            cfg.tables_[section][key] = value;
        }
        return cfg;
    }

    static Config parse_file(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw ConfigError("cannot open config file: " + path);
        return parse(is);
    }

    static Config parse_string(const std::string& text) {
        std::istringstream is(text);
        return parse(is);
    }

    bool has(const std::string& section, const std::string& key) const {
        const auto s = tables_.find(section);
        return s != tables_.end() && s->second.count(key) > 0;
    }

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
        const auto s = tables_.find(section);
        if (s == tables_.end()) return fallback;
        const auto k = s->second.find(key);
        return k == s->second.end() ? fallback : k->second;
    }

    double get_double(const std::string& section, const std::string& key, double fallback) const {
        if (!has(section, key)) return fallback;
        const std::string v = tables_.at(section).at(key);
        std::size_t pos = 0;
        double out = 0.0;
        try {
            out = std::stod(v, &pos);
        } catch (const std::exception&) {
            throw ConfigError("config [" + section + "] " + key + ": not a number: " + v);
        }
        if (pos != v.size())
            throw ConfigError("config [" + section + "] " + key + ": trailing junk: " + v);
        return out;
    }

    long long get_int(const std::string& section, const std::string& key, long long fallback) const {
        if (!has(section, key)) return fallback;
        const std::string v = tables_.at(section).at(key);
        std::size_t pos = 0;
        long long out = 0;
        try {
            out = std::stoll(v, &pos);
        } catch (const std::exception&) {
            throw ConfigError("config [" + section + "] " + key + ": not an integer: " + v);
        }
        if (pos != v.size())
            throw ConfigError("config [" + section + "] " + key + ": trailing junk: " + v);
        return out;
    }

    bool get_bool(const std::string& section, const std::string& key, bool fallback) const {
        if (!has(section, key)) return fallback;
        const std::string v = tables_.at(section).at(key);
        if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
        if (v == "false" || v == "0" || v == "no" || v == "off") return false;
        throw ConfigError("config [" + section + "] " + key + ": not a boolean: " + v);
    }

    std::vector<long long> get_int_list(const std::string& section, const std::string& key,
                                        std::vector<long long> fallback) const {
        if (!has(section, key)) return fallback;
        std::vector<long long> out;
        std::istringstream is(tables_.at(section).at(key));
        std::string item;
        while (std::getline(is, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            try {
                out.push_back(std::stoll(item));
            } catch (const std::exception&) {
                throw ConfigError("config [" + section + "] " + key + ": bad list entry: " + item);
            }
        }
        if (out.empty())
            throw ConfigError("config [" + section + "] " + key + ": empty list");
        return out;
    }

    std::vector<double> get_double_list(const std::string& section, const std::string& key,
                                        std::vector<double> fallback) const {
        if (!has(section, key)) return fallback;
        std::vector<double> out;
        std::istringstream is(tables_.at(section).at(key));
        std::string item;
        while (std::getline(is, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            try {
                out.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw ConfigError("config [" + section + "] " + key + ": bad list entry: " + item);
            }
        }
        if (out.empty())
            throw ConfigError("config [" + section + "] " + key + ": empty list");
        return out;
    }

    /// Reject any section or key the schema does not declare.
    void validate_schema(const std::map<std::string, std::set<std::string>>& schema) const {
        for (const auto& [section, entries] : tables_) {
            const auto s = schema.find(section);
            if (s == schema.end())
                throw ConfigError("config: unknown section [" + section + "]");
            for (const auto& [key, value] : entries) {
                (void)value;
                if (!s->second.count(key))
                    throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");
            }
        }
    }

private:
    static std::string trim(const std::string& s) {
        const auto begin = s.find_first_not_of(" \t\r");
        if (begin == std::string::npos) return "";
        const auto end = s.find_last_not_of(" \t\r");
        return s.substr(begin, end - begin + 1);
    }

    std::map<std::string, std::map<std::string, std::string>> tables_;
};

}  // namespace ttfilter
