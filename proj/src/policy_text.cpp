#include "orgtrace/policy_text.hpp"

#include <cctype>

#include "orgtrace/error.hpp"
#include "orgtrace/html.hpp"
#include "orgtrace/text.hpp"

namespace orgtrace {

namespace {

constexpr std::size_t kMinTokens = 3;

std::size_t token_count(std::string_view s) {
  std::size_t n = 0;
  for (auto t : text::split(s, ' ')) {
    if (!t.empty()) ++n;
  }
  return n;
}

bool looks_like_markup(std::string_view s) {
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (s[i] == '<' && (std::isalpha(static_cast<unsigned char>(s[i + 1])) || s[i + 1] == '!' || s[i + 1] == '/')) {
      return true;
    }
  }
  return false;
}

// Plain-text bodies: blank lines delimit paragraphs.
std::vector<std::string> plain_paragraphs(std::string_view body) {
  std::vector<std::string> out;
  std::string current;
  for (const auto& line : text::split_lines(body)) {
    if (text::trim(line).empty()) {
      if (!current.empty()) out.push_back(text::collapse_whitespace(current));
      current.clear();
      continue;
    }
    current += " ";
    current += line;
  }
  if (!current.empty()) out.push_back(text::collapse_whitespace(current));
  return out;
}

}  // namespace

PolicyText extract_text(std::string_view html, std::string url) {
  const auto body = text::sanitize_utf8(html);
  std::vector<std::string> raw;
  if (looks_like_markup(body)) {
    raw = scan_html(body).blocks;
  } else {
    raw = plain_paragraphs(body);
  }

  PolicyText out;
  out.url = std::move(url);
  for (auto& p : raw) {
    if (token_count(p) >= kMinTokens) out.paragraphs.push_back(std::move(p));
  }
  if (out.paragraphs.empty()) throw Error(Errc::EmptyDocument, "no visible text paragraphs");
  out.full_text = text::join(out.paragraphs, "\n\n");
  return out;
}

}  // namespace orgtrace
