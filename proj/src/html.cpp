#include "orgtrace/html.hpp"

#include <array>
#include <cctype>
#include <charconv>

#include "orgtrace/text.hpp"

namespace orgtrace {

namespace {

constexpr std::array kRawText{"script", "style", "noscript", "template", "textarea", "svg"};
constexpr std::array kChrome{"nav", "header", "footer", "aside", "select", "button"};
constexpr std::array kBlock{"p",     "div",   "li",  "ul",     "ol",      "h1",         "h2",   "h3", "h4",
                            "h5",    "h6",    "br",  "tr",     "td",      "th",         "table", "section",
                            "article", "main", "dd", "dt",     "dl",      "blockquote", "pre",  "hr", "body",
                            "html",  "title", "address", "figcaption", "caption", "center"};

template <std::size_t N>
bool one_of(std::string_view name, const std::array<const char*, N>& set) {
  for (const char* s : set) {
    if (name == s) return true;
  }
  return false;
}

struct Tag {
  std::string name;
  bool closing = false;
  std::vector<std::pair<std::string, std::string>> attrs;
};

bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':';
}

// Parses the tag starting at html[pos] == '<'; advances pos past '>'.
Tag parse_tag(std::string_view html, std::size_t& pos) {
  Tag tag;
  std::size_t i = pos + 1;
  if (i < html.size() && html[i] == '/') {
    tag.closing = true;
    ++i;
  }
  while (i < html.size() && name_char(html[i])) tag.name.push_back(static_cast<char>(std::tolower(html[i++])));
  while (i < html.size() && html[i] != '>') {
    const char c = html[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == '/') {
      ++i;
      continue;
    }
    std::string key;
    while (i < html.size() && !std::isspace(static_cast<unsigned char>(html[i])) && html[i] != '=' &&
           html[i] != '>' && html[i] != '/') {
      key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(html[i++]))));
    }
    if (key.empty()) {
      ++i;
      continue;
    }
    while (i < html.size() && std::isspace(static_cast<unsigned char>(html[i]))) ++i;
    std::string value;
    if (i < html.size() && html[i] == '=') {
      ++i;
      while (i < html.size() && std::isspace(static_cast<unsigned char>(html[i]))) ++i;
      if (i < html.size() && (html[i] == '"' || html[i] == '\'')) {
        const char q = html[i++];
        const auto end = html.find(q, i);
        const auto stop = end == std::string_view::npos ? html.size() : end;
        value = std::string(html.substr(i, stop - i));
        i = end == std::string_view::npos ? html.size() : end + 1;
      } else {
        while (i < html.size() && !std::isspace(static_cast<unsigned char>(html[i])) && html[i] != '>') {
          value.push_back(html[i++]);
        }
      }
    }
    tag.attrs.emplace_back(std::move(key), decode_entities(value));
  }
  pos = i < html.size() ? i + 1 : html.size();
  return tag;
}

std::size_t find_icase(std::string_view hay, std::string_view needle, std::size_t from) {
  for (std::size_t i = from; i + needle.size() <= hay.size(); ++i) {
    if (text::iequals(hay.substr(i, needle.size()), needle)) return i;
  }
  return std::string_view::npos;
}

}  // namespace

std::string decode_entities(std::string_view s) {
  static const std::pair<std::string_view, char32_t> kNamed[] = {
      {"amp", '&'},        {"lt", '<'},         {"gt", '>'},         {"quot", '"'},       {"apos", '\''},
      {"nbsp", ' '},       {"copy", 0xA9},      {"reg", 0xAE},       {"trade", 0x2122},   {"hellip", 0x2026},
      {"mdash", 0x2014},   {"ndash", 0x2013},   {"rsquo", 0x2019},   {"lsquo", 0x2018},   {"ldquo", 0x201C},
      {"rdquo", 0x201D},   {"laquo", 0xAB},     {"raquo", 0xBB},     {"eacute", 0xE9},    {"egrave", 0xE8},
      {"aacute", 0xE1},    {"oacute", 0xF3},    {"iacute", 0xED},    {"uacute", 0xFA},    {"ntilde", 0xF1},
      {"uuml", 0xFC},      {"ouml", 0xF6},      {"auml", 0xE4},      {"ccedil", 0xE7},    {"szlig", 0xDF},
      {"middot", 0xB7},    {"bull", 0x2022},    {"euro", 0x20AC},
  };
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    const auto semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out.push_back(s[i++]);
      continue;
    }
    const auto ref = s.substr(i + 1, semi - i - 1);
    bool done = false;
    if (!ref.empty() && ref[0] == '#') {
      unsigned long cp = 0;
      const bool hex = ref.size() > 1 && (ref[1] == 'x' || ref[1] == 'X');
      const auto digits = ref.substr(hex ? 2 : 1);
      auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
      if (ec == std::errc() && p == digits.data() + digits.size() && !digits.empty()) {
        text::append_utf8(out, cp == 0xA0 ? U' ' : static_cast<char32_t>(cp));
        done = true;
      }
    } else {
      for (const auto& [name, cp] : kNamed) {
        if (ref == name) {
          text::append_utf8(out, cp);
          done = true;
          break;
        }
      }
    }
    if (done) {
      i = semi + 1;
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

HtmlScan scan_html(std::string_view html) {
  HtmlScan scan;
  std::string block;
  int chrome_depth = 0;
  bool in_anchor = false;
  Anchor anchor;

  auto flush_block = [&] {
    auto t = text::collapse_whitespace(decode_entities(block));
    if (!t.empty()) scan.blocks.push_back(std::move(t));
    block.clear();
  };
  auto close_anchor = [&] {
    if (!in_anchor) return;
    anchor.text = text::collapse_whitespace(decode_entities(anchor.text));
    scan.anchors.push_back(std::move(anchor));
    anchor = Anchor{};
    in_anchor = false;
  };

  std::size_t pos = 0;
  while (pos < html.size()) {
    const char c = html[pos];
    if (c != '<') {
      const auto next = html.find('<', pos);
      const auto chunk = html.substr(pos, (next == std::string_view::npos ? html.size() : next) - pos);
      if (chrome_depth == 0) block.append(chunk);
      if (in_anchor) anchor.text.append(chunk);
      pos = next == std::string_view::npos ? html.size() : next;
      continue;
    }
    if (html.substr(pos, 4) == "<!--") {
      const auto end = html.find("-->", pos + 4);
      pos = end == std::string_view::npos ? html.size() : end + 3;
      continue;
    }
    if (pos + 1 < html.size() && (html[pos + 1] == '!' || html[pos + 1] == '?')) {
      const auto end = html.find('>', pos);
      pos = end == std::string_view::npos ? html.size() : end + 1;
      continue;
    }
    const bool tag_start = pos + 1 < html.size() &&
                           (std::isalpha(static_cast<unsigned char>(html[pos + 1])) || html[pos + 1] == '/');
    if (!tag_start) {
      if (chrome_depth == 0) block.push_back('<');
      if (in_anchor) anchor.text.push_back('<');
      ++pos;
      continue;
    }

    Tag tag = parse_tag(html, pos);
    if (tag.name.empty()) continue;

    if (!tag.closing && tag.name == "title") {
      const auto end = find_icase(html, "</title", pos);
      const auto stop = end == std::string_view::npos ? html.size() : end;
      if (scan.title.empty()) scan.title = text::collapse_whitespace(decode_entities(html.substr(pos, stop - pos)));
      pos = stop;
      if (end != std::string_view::npos) parse_tag(html, pos);
      continue;
    }
    if (!tag.closing && one_of(tag.name, kRawText)) {
      const auto end = find_icase(html, "</" + tag.name, pos);
      pos = end == std::string_view::npos ? html.size() : end;
      if (end != std::string_view::npos) parse_tag(html, pos);
      continue;
    }
    if (one_of(tag.name, kChrome)) {
      if (!tag.closing) {
        if (chrome_depth == 0) flush_block();
        ++chrome_depth;
      } else if (chrome_depth > 0) {
        --chrome_depth;
        if (chrome_depth == 0) block.clear();
      }
      continue;
    }
    if (tag.name == "a") {
      if (tag.closing) {
        close_anchor();
      } else {
        close_anchor();
        for (const auto& [k, v] : tag.attrs) {
          if (k == "href") {
            anchor.href = std::string(text::trim(v));
            in_anchor = true;
          }
        }
      }
      continue;
    }
    if (one_of(tag.name, kBlock)) {
      if (chrome_depth == 0) flush_block();
      if (tag.name == "br" && in_anchor) anchor.text.push_back(' ');
      continue;
    }
    // Inline tags separate words only when the markup did.
  }
  close_anchor();
  if (chrome_depth == 0) flush_block();
  return scan;
}

}  // namespace orgtrace
