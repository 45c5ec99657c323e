#include "doctest.h"
#include "orgtrace/discovery.hpp"
#include "orgtrace/html.hpp"
#include "orgtrace/url.hpp"
#include "support.hpp"

using namespace orgtrace;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::InvalidArgument;
}

RegistrableDomain rd(const std::string& host) { return registrable_domain(parse_fqdn(host), SuffixRules::bundled()); }
std::string url(const char* s) { return parse_url(s)->str(); }

class ScriptedSearch final : public SearchProvider {
 public:
  std::map<std::string, std::vector<std::string>> answers;
  mutable std::vector<std::string> queries;
  std::string id() const override { return "scripted"; }
  std::size_t limit() const override { return 10; }
  std::vector<std::string> live_search(const std::string& q) const override {
    queries.push_back(q);
    auto it = answers.find(q);
    if (it == answers.end()) throw Error(Errc::ProviderUnavailable, "unscripted query " + q);
    return it->second;
  }
};

struct Rig {
  std::shared_ptr<testing::FakeNetwork> net = std::make_shared<testing::FakeNetwork>();
  FixtureStore store;
  Fetcher fetcher{store, SuffixRules::bundled(), FetchPolicy{}, net};
  ScriptedSearch search;
  BudgetTracker budget{5};
  DiscoveryDeps deps{fetcher, search, budget};
};

}  // namespace

TEST_CASE("html scanning is tolerant") {
  const auto scan = scan_html(
      "<html><head><title>Home &amp; more</title><script>var a='<a href=x>';</script></head>"
      "<body><nav><a href='/privacy'>Privacy</a></nav><p>Hello <b>world</b></p>"
      "<a href=\"/terms\">Terms &#38; Conditions<a href=/x>unclosed"
      "<!-- <a href='/hidden'>hidden</a> --><footer><a href=\"/a?b=1&amp;c=2\">Legal</a></footer>");
  CHECK(scan.title == "Home & more");
  REQUIRE(scan.anchors.size() >= 3);
  CHECK(scan.anchors[0].href == "/privacy");
  CHECK(scan.anchors[0].text == "Privacy");
  CHECK(scan.anchors[1].text.find("Terms & Conditions") == 0);
  CHECK(scan.anchors.back().href == "/a?b=1&c=2");
  for (const auto& a : scan.anchors) CHECK(a.href != "/hidden");
  for (const auto& a : scan.anchors) CHECK(a.href != "x");
  CHECK(decode_entities("&lt;&#x27;&quot;&nbsp;&unknown;") == "<'\" &unknown;");  // nbsp folds to a space
  CHECK_NOTHROW(scan_html("<<<a href=<>>>\"'</"));
}

TEST_CASE("link lexicon") {
  const auto& lex = LinkLexicon::bundled();
  CHECK(lex.keywords().front().first == "privacy policy");
  CHECK(lex.best_weight("Our  PRIVACY Policy") == 6);
  CHECK(lex.best_weight("Privacy") == 3);
  CHECK(lex.best_weight("Careers") == 0);
  CHECK(lex.best_weight("privacypolicy") == 0);
  CHECK(code_of([] { LinkLexicon::parse("a\t0\n"); }) == Errc::ConfigError);
  CHECK(code_of([] { LinkLexicon::parse("# nothing\n"); }) == Errc::ConfigError);
  CHECK(code_of([] { LinkLexicon::parse("no weight\n"); }) == Errc::ConfigError);
}

TEST_CASE("policy links are ranked by keyword weight") {
  const std::string html =
      "<a href='/about'>About</a><a href='/legal'>Legal</a>"
      "<a href='https://cdn.other.example/privacy-notice'>Notice</a>"
      "<a href='/privacy'>Privacy Policy</a><a href='/privacy#top'>Privacy</a>"
      "<a href='mailto:privacy@x.example'>privacy@x.example</a><a href='javascript:void(0)'>Privacy</a>";
  const auto c = find_policy_links(html, "https://x.example/", LinkLexicon::bundled());
  REQUIRE(c.size() == 3);
  CHECK(c[0].url == "https://x.example/privacy");
  CHECK(c[0].score == 6);
  CHECK(c[0].anchor_text == "Privacy Policy");
  CHECK(c[1].url == "https://cdn.other.example/privacy-notice");
  CHECK(c[1].score == 2.5);  // path words only, half weight
  CHECK(c[2].url == "https://x.example/legal");
  CHECK(c[0].source == CandidateSource::HomepageLink);
  CHECK(code_of([] { find_policy_links("<a href='/shop'>Shop</a>", "https://x.example/", LinkLexicon::bundled()); }) ==
        Errc::NoCandidates);
  CHECK(code_of([] { find_policy_links("", "not a url", LinkLexicon::bundled()); }) == Errc::NoCandidates);
}

TEST_CASE("cross-domain redirect detection") {
  const auto& rules = SuffixRules::bundled();
  CHECK(crosses_registrable_domain({"https://a.com/", "https://www.google.com/"}, rd("a.com"), rules));
  CHECK_FALSE(crosses_registrable_domain({"https://a.com/", "https://www.a.com/"}, rd("a.com"), rules));
  CHECK_FALSE(crosses_registrable_domain({}, rd("a.com"), rules));
}

TEST_CASE("homepage falls back from https to http") {
  Rig rig;
  rig.net->http[url("http://plain.example/")] = testing::html_page("<a href='/privacy'>Privacy</a>");
  const auto h = resolve_homepage(rd("plain.example"), rig.deps);
  CHECK(h.final_url == "http://plain.example/");
  CHECK(h.source == HomepageSource::DirectRequest);
  CHECK_FALSE(h.cross_sld_redirect);
  CHECK(rig.budget.used("plain.example") == 2);
}

TEST_CASE("homepage found through search when both schemes fail") {
  Rig rig;
  rig.search.answers["gone.example"] = {"https://elsewhere.example/gone", "https://www.gone.example/home"};
  rig.net->http[url("https://www.gone.example/home")] = testing::html_page("<p>home</p>");
  const auto h = resolve_homepage(rd("gone.example"), rig.deps);
  CHECK(h.source == HomepageSource::SearchEngine);
  CHECK(h.final_url == "https://www.gone.example/home");
  CHECK(rig.budget.used("elsewhere.example") == 0);
}

TEST_CASE("unreachable homepage") {
  Rig rig;
  rig.search.answers["dead.example"] = {};
  try {
    resolve_homepage(rd("dead.example"), rig.deps);
    FAIL("expected failure");
  } catch (const DiscoveryError& e) {
    CHECK(e.code() == Errc::Unreachable);
  }
  // A provider failure during the fallback is folded into Unreachable.
  CHECK(code_of([&] { resolve_homepage(rd("nosearch.example"), rig.deps); }) == Errc::Unreachable);
}

TEST_CASE("a redirect loop exhausts the budget") {
  Rig rig;
  rig.net->http[url("https://loop.example/")] = testing::redirect_to("/a");
  rig.net->http[url("https://loop.example/a")] = testing::redirect_to("/");
  CHECK(code_of([&] { resolve_homepage(rd("loop.example"), rig.deps); }) == Errc::BudgetExhausted);
  CHECK(rig.budget.used("loop.example") == 5);
  CHECK(rig.search.queries.empty());
}

TEST_CASE("search results keep only the target domain") {
  Rig rig;
  rig.search.answers["t.example privacy policy"] = {"https://other.example/t", "https://www.t.example/privacy",
                                                    "https://t.example/legal", "https://www.t.example/privacy"};
  const auto c = search_policy(rd("t.example"), rig.deps);
  REQUIRE(c.size() == 2);
  CHECK(c[0].url == "https://www.t.example/privacy");
  CHECK(c[0].source == CandidateSource::SearchResult);
  CHECK(c[0].score > c[1].score);
  rig.search.answers["u.example privacy policy"] = {"https://other.example/"};
  CHECK(code_of([&] { search_policy(rd("u.example"), rig.deps); }) == Errc::NoCandidates);
  CHECK(rig.budget.used("t.example") == 0);
}

TEST_CASE("discover prefers homepage links and falls back to search") {
  Rig rig;
  rig.net->http[url("https://shop.example/")] =
      testing::html_page("<footer><a href='/legal/privacy'>Privacy Notice</a></footer>");
  auto out = discover(rd("shop.example"), rig.deps, LinkLexicon::bundled());
  REQUIRE(out.candidates.size() == 1);
  CHECK(out.candidates[0].url == "https://shop.example/legal/privacy");
  CHECK(rig.search.queries.empty());

  rig.net->http[url("https://bare.example/")] = testing::html_page("<p>nothing here</p>");
  rig.search.answers["bare.example privacy policy"] = {"https://bare.example/privacy"};
  out = discover(rd("bare.example"), rig.deps, LinkLexicon::bundled());
  CHECK(out.candidates[0].source == CandidateSource::SearchResult);
  CHECK(out.homepage.final_url == "https://bare.example/");

  rig.search.answers["empty.example privacy policy"] = {};
  rig.net->http[url("https://empty.example/")] = testing::html_page("<p>nothing</p>");
  try {
    discover(rd("empty.example"), rig.deps, LinkLexicon::bundled());
    FAIL("expected failure");
  } catch (const DiscoveryError& e) {
    CHECK(e.code() == Errc::NoCandidates);
    REQUIRE(e.partial());
    CHECK(e.partial()->final_url == "https://empty.example/");
  }
}

TEST_CASE("discover over the archive") {
  FixtureStore store(FixtureMode::Replay, testing::archive_dir());
  Fetcher fetcher(store, SuffixRules::bundled(), FetchPolicy{}, nullptr);
  NullSearchProvider search;
  BudgetTracker budget;
  DiscoveryDeps deps{fetcher, search, budget};
  const auto out = discover(rd("tiktok-fixture.example"), deps, LinkLexicon::bundled());
  CHECK(out.candidates[0].url == "https://tiktok-fixture.example/legal/privacy-policy?lang=en");

  const auto redirected = discover(rd("unseenreport.com"), deps, LinkLexicon::bundled());
  CHECK(redirected.homepage.cross_sld_redirect);
  CHECK(redirected.homepage.redirect_chain.size() == 2);

  BudgetTracker fresh;
  DiscoveryDeps loop{fetcher, search, fresh};
  CHECK(code_of([&] { discover(rd("loop-redirect.example"), loop, LinkLexicon::bundled()); }) ==
        Errc::BudgetExhausted);
}
