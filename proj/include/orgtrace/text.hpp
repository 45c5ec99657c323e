#pragma once

// Small string helpers shared across modules. ASCII-only case folding.

#include <string>
#include <string_view>
#include <vector>

namespace orgtrace::text {

std::string_view trim(std::string_view s);
std::string lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
bool starts_with_icase(std::string_view s, std::string_view prefix);
std::vector<std::string_view> split(std::string_view s, char sep);
std::vector<std::string> split_lines(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string collapse_whitespace(std::string_view s);

// Replaces invalid UTF-8 sequences with U+FFFD.
std::string sanitize_utf8(std::string_view bytes);
void append_utf8(std::string& out, char32_t cp);

// True iff `needle` occurs in `hay` bounded by non-word characters.
bool contains_word(std::string_view hay, std::string_view needle);

std::string sha256_hex(std::string_view bytes);

// Reads a text resource: `path` if nonempty, otherwise the bundled file.
std::string load_resource(const std::string& path, std::string_view bundled_name);
std::string read_file(const std::string& path);

// Lines of a config list, skipping blanks and '#' comments.
std::vector<std::string> config_lines(std::string_view content);

}  // namespace orgtrace::text
