#include "qmp/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qmp/errors.hpp"

namespace qmp {

namespace {
std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_num(const std::string& key, const std::string& raw) {
    char* end = nullptr;
    double v = std::strtod(raw.c_str(), &end);
    if (end == raw.c_str() || *end != '\0')
        throw ConfigError("config key '" + key + "': not a number: '" + raw + "'");
    return v;
}
} // namespace

bool Config::has(const std::string& key) const { return values.count(key) != 0; }

std::string Config::str(const std::string& key, const std::string& def) const {
    auto it = values.find(key);
    return it == values.end() ? def : it->second;
}

std::string Config::require(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw ConfigError("missing config key '" + key + "'");
    return it->second;
}

double Config::num(const std::string& key, double def) const {
    auto it = values.find(key);
    return it == values.end() ? def : parse_num(key, it->second);
}

int Config::integer(const std::string& key, int def) const {
    auto it = values.find(key);
    if (it == values.end()) return def;
    double v = parse_num(key, it->second);
    int n = int(v);
    if (double(n) != v) throw ConfigError("config key '" + key + "': expected integer");
    return n;
}

uint64_t Config::u64(const std::string& key, uint64_t def) const {
    auto it = values.find(key);
    if (it == values.end()) return def;
    const std::string& raw = it->second;
    char* end = nullptr;
    unsigned long long v = std::strtoull(raw.c_str(), &end, 10);
    if (end == raw.c_str() || *end != '\0')
        throw ConfigError("config key '" + key + "': not an unsigned integer: '" + raw + "'");
    return uint64_t(v);
}

bool Config::flag(const std::string& key, bool def) const {
    auto it = values.find(key);
    if (it == values.end()) return def;
    const std::string& v = it->second;
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw ConfigError("config key '" + key + "': not a boolean: '" + v + "'");
}

std::array<double, 4> Config::vec4(const std::string& key, const std::array<double, 4>& def) const {
    auto it = values.find(key);
    if (it == values.end()) return def;
    std::string raw = it->second;
    for (char& c : raw)
        if (c == ',') c = ' ';
    std::istringstream in(raw);
    std::array<double, 4> out{};
    for (int i = 0; i < 4; ++i)
        if (!(in >> out[i]))
            throw ConfigError("config key '" + key + "': expected 4 numbers");
    double extra;
    if (in >> extra) throw ConfigError("config key '" + key + "': expected 4 numbers");
    return out;
}

std::vector<double> Config::num_list(const std::string& key, const std::vector<double>& def) const {
    auto it = values.find(key);
    if (it == values.end()) return def;
    std::string raw = it->second;
    for (char& c : raw)
        if (c == ',') c = ' ';
    std::istringstream in(raw);
    std::vector<double> out;
    double v;
    while (in >> v) out.push_back(v);
    if (out.empty()) throw ConfigError("config key '" + key + "': expected numbers");
    return out;
}

Config parse_config(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        if (!section.empty()) key = section + "." + key;
        cfg.values[key] = val;
    }
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

} // namespace qmp
