#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace orgtrace {

struct PolicyText {
  std::string url;
  std::vector<std::string> paragraphs;
  std::string full_text;  // paragraphs joined by blank lines
};

// Visible text of a page split into paragraphs (script, style, nav, header
// and footer dropped; paragraphs under 3 tokens dropped).
// Throws Error{EmptyDocument}.
PolicyText extract_text(std::string_view html, std::string url = {});

}  // namespace orgtrace
