#include "orgtrace/discovery.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "orgtrace/html.hpp"
#include "orgtrace/text.hpp"
#include "orgtrace/url.hpp"

namespace orgtrace {

namespace {

// Path words: "/legal/privacy-policy.html" -> "legal privacy policy html".
std::string path_words(std::string_view path) {
  std::string out;
  for (char ch : path) {
    const auto c = static_cast<unsigned char>(ch);
    out.push_back(std::isalnum(c) ? static_cast<char>(std::tolower(c)) : ' ');
  }
  return text::collapse_whitespace(out);
}

bool ignorable_href(std::string_view href) {
  return href.empty() || href.front() == '#' || text::starts_with_icase(href, "javascript:") ||
         text::starts_with_icase(href, "mailto:") || text::starts_with_icase(href, "tel:");
}

bool success_status(int status) { return status >= 200 && status < 300; }

}  // namespace

std::string_view candidate_source_name(CandidateSource source) {
  return source == CandidateSource::HomepageLink ? "homepage_link" : "search_result";
}

LinkLexicon::LinkLexicon(std::vector<std::pair<std::string, double>> keywords) {
  for (auto& [k, w] : keywords) {
    auto key = text::lower(text::trim(k));
    if (key.empty()) continue;
    if (!(w > 0)) throw Error(Errc::ConfigError, "link keyword '" + key + "' needs a positive weight");
    keywords_.emplace_back(std::move(key), w);
  }
  if (keywords_.empty()) throw Error(Errc::ConfigError, "link lexicon is empty");
  std::stable_sort(keywords_.begin(), keywords_.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
}

LinkLexicon LinkLexicon::parse(std::string_view content) {
  std::vector<std::pair<std::string, double>> keywords;
  for (const auto& line : text::config_lines(content)) {
    const auto cols = text::split(line, '\t');
    if (cols.size() != 2) throw Error(Errc::ConfigError, "malformed link lexicon line '" + line + "'");
    keywords.emplace_back(std::string(cols[0]), std::stod(std::string(cols[1])));
  }
  return LinkLexicon(std::move(keywords));
}

const LinkLexicon& LinkLexicon::bundled() {
  static const LinkLexicon lexicon = parse(text::load_resource("", "link_lexicon.tsv"));
  return lexicon;
}

double LinkLexicon::best_weight(std::string_view s) const {
  const auto folded = text::collapse_whitespace(text::lower(s));
  for (const auto& [k, w] : keywords_) {
    if (text::contains_word(folded, k)) return w;
  }
  return 0.0;
}

bool crosses_registrable_domain(const std::vector<std::string>& chain, const RegistrableDomain& origin,
                                const SuffixRules& rules) {
  if (chain.empty()) return false;
  const auto url = parse_url(chain.back());
  if (!url) return false;
  return registrable_key(url->host, rules) != origin.text;
}

HomepageResolution resolve_homepage(const RegistrableDomain& domain, DiscoveryDeps& deps) {
  const auto& rules = deps.fetcher.rules();
  auto finish = [&](FetchResult r, HomepageSource source) {
    HomepageResolution h;
    h.final_url = r.final_url;
    h.cross_sld_redirect = crosses_registrable_domain(r.redirect_chain, domain, rules);
    h.redirect_chain = std::move(r.redirect_chain);
    h.source = source;
    h.body = std::move(r.body);
    h.content_type = std::move(r.content_type);
    return h;
  };

  std::string last_problem;
  for (const char* scheme : {"https", "http"}) {
    try {
      auto r = deps.fetcher.fetch(std::string(scheme) + "://" + domain.text + "/", deps.budget);
      if (success_status(r.status_code)) return finish(std::move(r), HomepageSource::DirectRequest);
      last_problem = r.final_url + " returned HTTP " + std::to_string(r.status_code);
    } catch (const Error& e) {
      if (e.code() == Errc::BudgetExhausted) throw DiscoveryError(Errc::BudgetExhausted, e.what());
      last_problem = e.what();
    }
  }

  try {
    for (const auto& hit : search(domain.text, deps.search, deps.fetcher.store())) {
      auto url = parse_url(hit);
      if (!url || registrable_key(url->host, rules) != domain.text) continue;
      auto r = deps.fetcher.fetch(url->str(), deps.budget);
      if (success_status(r.status_code)) return finish(std::move(r), HomepageSource::SearchEngine);
      break;
    }
  } catch (const Error& e) {
    if (e.code() == Errc::BudgetExhausted) throw DiscoveryError(Errc::BudgetExhausted, e.what());
    last_problem += std::string("; search: ") + e.what();
  }
  throw DiscoveryError(Errc::Unreachable, "homepage of " + domain.text + " unreachable (" + last_problem + ")");
}

std::vector<PolicyCandidate> find_policy_links(std::string_view html, std::string_view base_url,
                                               const LinkLexicon& lexicon) {
  const auto base = parse_url(base_url);
  if (!base) throw Error(Errc::NoCandidates, "unusable base URL '" + std::string(base_url) + "'");
  std::vector<PolicyCandidate> out;
  std::map<std::string, std::size_t> seen;
  for (const auto& a : scan_html(text::sanitize_utf8(html)).anchors) {
    if (ignorable_href(a.href)) continue;
    auto url = resolve_url(*base, a.href);
    if (!url) continue;
    const double by_text = lexicon.best_weight(a.text);
    const double by_path = lexicon.best_weight(path_words(url->path)) / 2.0;
    const double score = std::max(by_text, by_path);
    if (score <= 0) continue;
    const auto key = url->str();
    if (auto it = seen.find(key); it != seen.end()) {
      auto& existing = out[it->second];
      if (score > existing.score) {
        existing.score = score;
        existing.anchor_text = a.text;
      }
      continue;
    }
    seen.emplace(key, out.size());
    PolicyCandidate c;
    c.url = key;
    c.source = CandidateSource::HomepageLink;
    c.score = score;
    if (!a.text.empty()) c.anchor_text = a.text;
    out.push_back(std::move(c));
  }
  if (out.empty()) throw Error(Errc::NoCandidates, "no policy-like links on " + std::string(base_url));
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.score > b.score; });
  return out;
}

std::vector<PolicyCandidate> search_policy(const RegistrableDomain& domain, DiscoveryDeps& deps) {
  const auto hits = search(domain.text + " privacy policy", deps.search, deps.fetcher.store());
  std::vector<PolicyCandidate> out;
  for (std::size_t rank = 0; rank < hits.size(); ++rank) {
    auto url = parse_url(hits[rank]);
    if (!url || registrable_key(url->host, deps.fetcher.rules()) != domain.text) continue;
    PolicyCandidate c;
    c.url = url->str();
    c.source = CandidateSource::SearchResult;
    c.score = static_cast<double>(hits.size() - rank);
    if (std::none_of(out.begin(), out.end(), [&](const auto& o) { return o.url == c.url; })) out.push_back(std::move(c));
  }
  if (out.empty()) throw Error(Errc::NoCandidates, "no same-domain search results for " + domain.text);
  return out;
}

DiscoveryOutcome discover(const RegistrableDomain& domain, DiscoveryDeps& deps, const LinkLexicon& lexicon) {
  DiscoveryOutcome out;
  std::string homepage_problem;
  try {
    out.homepage = resolve_homepage(domain, deps);
  } catch (const DiscoveryError& e) {
    if (e.code() == Errc::BudgetExhausted) throw;
    homepage_problem = e.what();
  }
  if (homepage_problem.empty()) {
    try {
      out.candidates = find_policy_links(out.homepage.body, out.homepage.final_url, lexicon);
      return out;
    } catch (const Error& e) {
      if (e.code() != Errc::NoCandidates) throw;
    }
  }
  try {
    out.candidates = search_policy(domain, deps);
    return out;
  } catch (const Error& e) {
    if (!homepage_problem.empty()) throw DiscoveryError(Errc::Unreachable, homepage_problem + "; " + e.what());
    throw DiscoveryError(Errc::NoCandidates, std::string("no policy candidates: ") + e.what(), out.homepage);
  }
}

}  // namespace orgtrace
