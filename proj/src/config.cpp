#include "dwsim/config.hpp"

#include <fstream>
#include <sstream>

namespace dwsim {

namespace {
std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}
} // namespace

Config Config::from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return from_string(ss.str(), path);
}

Config Config::from_string(const std::string& text, const std::string& origin) {
    Config cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        cfg.values_[key] = val;
    }
    return cfg;
}

void Config::apply_override(const std::string& keyval) {
    const auto eq = keyval.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override must look like key=value: " + keyval);
    values_[trim(keyval.substr(0, eq))] = trim(keyval.substr(eq + 1));
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

std::string Config::get_string(const std::string& key, const std::string& def) const {
    const auto it = values_.find(key);
    return it == values_.end() ? def : it->second;
}

double Config::get_double(const std::string& key, double def) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return def;
    try {
        size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a number: '" + it->second + "'");
    }
}

int Config::get_int(const std::string& key, int def) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return def;
    try {
        size_t pos = 0;
        const int v = std::stoi(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not an integer: '" + it->second + "'");
    }
}

bool Config::get_bool(const std::string& key, bool def) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return def;
    const std::string& v = it->second;
    if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "off" || v == "0" || v == "no") return false;
    throw ConfigError("config key '" + key + "': not a boolean: '" + v + "'");
}

double parse_time(const std::string& text, double omega) {
    std::string t = text;
    double scale = 1.0;
    if (t.size() > 2 && t.compare(t.size() - 2, 2, "us") == 0) {
        scale = 1e-6 * omega; // microseconds -> 1/omega
        t = t.substr(0, t.size() - 2);
    } else if (t.size() > 2 && t.compare(t.size() - 2, 2, "/w") == 0) {
        t = t.substr(0, t.size() - 2);
    }
    size_t pos = 0;
    const double v = std::stod(t, &pos);
    if (pos != t.size()) throw ConfigError("bad time literal: '" + text + "'");
    return v * scale;
}

double Config::get_time(const std::string& key, double def, double omega) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return def;
    try {
        return parse_time(it->second, omega);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': bad time literal '" + it->second + "'");
    }
}

std::vector<double> Config::get_list(const std::string& key) const {
    const auto it = values_.find(key);
    std::vector<double> out;
    if (it == values_.end()) return out;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError("config key '" + key + "': bad list entry '" + item + "'");
        }
    }
    return out;
}

nlohmann::json Config::to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : values_) j[k] = v;
    return j;
}

} // namespace dwsim
