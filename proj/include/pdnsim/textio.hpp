#pragma once

#include <string>
#include <vector>

namespace pdnsim::textio {

// printf-style formatting into a std::string.
std::string fmt(const char* format, ...);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);
std::vector<std::string> split_lines(const std::string& s);

bool parse_double(const std::string& s, double& out);
bool parse_int(const std::string& s, long& out);
bool parse_bool(const std::string& s, bool& out);

}  // namespace pdnsim::textio
