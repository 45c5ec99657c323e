#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace orgtrace {

struct EmbeddedFile {
  std::string_view name;  // path relative to the data/ directory
  std::string_view bytes;
};

namespace detail {
std::span<const EmbeddedFile> embedded_table();
}

// Bundled data file by relative name, e.g. "lang/en.txt".
std::optional<std::string_view> embedded_file(std::string_view name);
std::vector<EmbeddedFile> embedded_files_under(std::string_view prefix);

}  // namespace orgtrace
