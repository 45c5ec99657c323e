#include "orgtrace/embedded.hpp"

namespace orgtrace {

std::optional<std::string_view> embedded_file(std::string_view name) {
  for (const auto& f : detail::embedded_table()) {
    if (f.name == name) return f.bytes;
  }
  return std::nullopt;
}

std::vector<EmbeddedFile> embedded_files_under(std::string_view prefix) {
  std::vector<EmbeddedFile> out;
  for (const auto& f : detail::embedded_table()) {
    if (f.name.starts_with(prefix)) out.push_back(f);
  }
  return out;
}

}  // namespace orgtrace
