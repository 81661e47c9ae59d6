#pragma once

#include <string>
#include <vector>

namespace qmp {

// shortest round-trippable-ish numeric text, stable across runs
std::string fmt_num(double v);
std::string fmt_int(long long v);

std::string csv_line(const std::vector<std::string>& fields);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows);

std::vector<std::vector<std::string>> parse_csv(const std::string& text, bool skip_header);

} // namespace qmp
