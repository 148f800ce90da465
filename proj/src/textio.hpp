#pragma once

#include <string>
#include <string_view>
#include <vector>

// Deterministic text helpers shared by the CSV emitters, the config-file
// reader, and the CLI plumbing.

namespace offload {

// Shortest fixed formatting that round-trips an IEEE double: %.17g.
std::string format_double(double value);

// Writes content to path atomically (temp file in the same directory, then
// rename). The file always ends up with LF line endings because callers build
// the content with '\n' and the stream is opened in binary mode. Throws
// std::runtime_error on I/O failure.
void write_file_atomic(const std::string& path, const std::string& content);

// Whole-file read; throws std::runtime_error when the file cannot be opened.
std::string read_file(const std::string& path);

std::string trim(std::string_view text);
std::vector<std::string> split(std::string_view text, char delimiter);

// Strict scalar parsing: the full token must be consumed.
bool parse_double(const std::string& token, double& out);
bool parse_size(const std::string& token, std::size_t& out);

// Comma-separated list of doubles; throws std::invalid_argument with `what`
// in the message on any malformed entry.
std::vector<double> parse_double_list(const std::string& text, const char* what);

}  // namespace offload
