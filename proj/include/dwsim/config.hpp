#pragma once
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace dwsim {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat dotted-key configuration ("protocol.dt2 = 110  # comment").
class Config {
  public:
    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text, const std::string& origin = "<string>");

    void apply_override(const std::string& keyval); // "key=value"
    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& def) const;
    double get_double(const std::string& key, double def) const;
    int get_int(const std::string& key, int def) const;
    bool get_bool(const std::string& key, bool def) const;
    // duration in 1/omega; accepts a plain number (already 1/omega) or a
    // value with a "us" suffix converted using omega
    double get_time(const std::string& key, double def, double omega) const;
    std::vector<double> get_list(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const { return values_; }
    nlohmann::json to_json() const;

  private:
    std::map<std::string, std::string> values_;
};

double parse_time(const std::string& text, double omega);

} // namespace dwsim
