#pragma once

// Tolerant single-pass HTML scanner. Malformed markup never throws; unknown
// constructs are skipped or kept as text.

#include <string>
#include <string_view>
#include <vector>

namespace orgtrace {

struct Anchor {
  std::string href;  // raw attribute value, entities decoded
  std::string text;  // visible text, whitespace collapsed
};

struct HtmlScan {
  std::vector<Anchor> anchors;      // document order, including nav/footer links
  std::vector<std::string> blocks;  // visible text blocks outside skipped subtrees
  std::string title;
};

HtmlScan scan_html(std::string_view html);

// Decodes character references (&amp;, &#39;, &#x27;, common named ones).
std::string decode_entities(std::string_view text);

}  // namespace orgtrace
