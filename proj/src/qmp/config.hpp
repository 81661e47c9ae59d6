#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qmp {

// key = value pairs with optional [section] grouping; a line "x = 1" under
// [dynamics] is stored as "dynamics.x". '#' and ';' start comments.
struct Config {
    std::map<std::string, std::string> values;

    bool has(const std::string& key) const;
    std::string str(const std::string& key, const std::string& def) const;
    std::string require(const std::string& key) const;
    double num(const std::string& key, double def) const;
    int integer(const std::string& key, int def) const;
    uint64_t u64(const std::string& key, uint64_t def) const;
    bool flag(const std::string& key, bool def) const;
    // four comma or space separated numbers, row-major 2x2
    std::array<double, 4> vec4(const std::string& key, const std::array<double, 4>& def) const;
    // comma or space separated numbers, any count
    std::vector<double> num_list(const std::string& key, const std::vector<double>& def) const;
};

Config parse_config(const std::string& text);
Config load_config(const std::string& path);

} // namespace qmp
