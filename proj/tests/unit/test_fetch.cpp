#include <cstdlib>

#include "doctest.h"
#include "orgtrace/error.hpp"
#include "orgtrace/fetch.hpp"
#include "orgtrace/url.hpp"
#include "support.hpp"

using namespace orgtrace;
using testing::FakeNetwork;

namespace {

template <typename F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::InvalidArgument;
}

std::string url(const char* s) { return parse_url(s)->str(); }

}  // namespace

TEST_CASE("transaction files round-trip and detect tampering") {
  StoredResponse r;
  r.status = 301;
  r.headers = {{"Location", "https://b.example/"}, {"Content-Type", "text/html"}};
  r.body = std::string("line one\n\nline two\0binary", 24);
  const auto d = Descriptor::http_get(*parse_url("https://a.example/x?b=2&a=1"));
  CHECK(d.key == "GET https://a.example/x?a=1&b=2");
  const auto bytes = encode_transaction(d, r);
  std::string key, kind;
  const auto back = decode_transaction(bytes, &key, &kind);
  CHECK(key == d.key);
  CHECK(kind == "http");
  CHECK(back.status == 301);
  CHECK(back.body == r.body);
  CHECK(back.header("location") == "https://b.example/");

  std::string tampered = bytes;
  tampered.back() ^= 1;
  CHECK(code_of([&] { decode_transaction(tampered); }) == Errc::ArchiveCorrupt);
  CHECK(code_of([&] { decode_transaction(bytes + "x"); }) == Errc::ArchiveCorrupt);
  CHECK(code_of([&] { decode_transaction("nonsense"); }) == Errc::ArchiveCorrupt);

  StoredResponse failed;
  failed.error = "Timeout";
  const auto fb = decode_transaction(encode_transaction(Descriptor::tls("a.example", 443), failed));
  CHECK(fb.error == "Timeout");
  CHECK(code_of([&] { fb.raise_if_error("x"); }) == Errc::Timeout);
}

TEST_CASE("descriptor keys") {
  CHECK(Descriptor::whois("WHOIS.Verisign-GRS.com", "example.com").key == "WHOIS whois.verisign-grs.com example.com");
  CHECK(Descriptor::tls("Example.com", 443).key == "TLS example.com:443");
  CHECK(Descriptor::search("google-cse", "  a   b ").key == "SEARCH google-cse a b");
  CHECK(Descriptor::search("google-cse", "a\tb").kind == TxnKind::Search);
}

TEST_CASE("record then replay") {
  testing::TempDir dir("record");
  auto net = std::make_shared<FakeNetwork>();
  net->http[url("https://a.example/")] = testing::html_page("<p>hello world page</p>");
  {
    FixtureStore store(FixtureMode::Record, dir.path());
    Fetcher fetcher(store, SuffixRules::bundled(), FetchPolicy{}, net);
    BudgetTracker budget;
    CHECK(fetcher.fetch("https://a.example/", budget).body == "<p>hello world page</p>");
    CHECK(net->calls == 1);
  }
  CHECK(FixtureStore::verify(dir.path()).empty());

  FixtureStore replay(FixtureMode::Replay, dir.path());
  Fetcher fetcher(replay, SuffixRules::bundled(), FetchPolicy{}, nullptr);
  BudgetTracker budget;
  CHECK(fetcher.fetch("https://a.example/", budget).status_code == 200);
  CHECK(code_of([&] { fetcher.fetch("https://a.example/missing", budget); }) == Errc::ReplayMiss);
  const auto log = replay.transaction_log();
  REQUIRE(log.size() == 2);
  CHECK(log[0].key == "GET https://a.example/");
  CHECK(net->calls == 1);
  replay.clear_log();
  CHECK(replay.transaction_log().empty());
}

TEST_CASE("verify reports tampered and missing entries") {
  testing::TempDir dir("verify");
  const auto src = testing::archive_dir();
  std::filesystem::copy(src, dir.path(), std::filesystem::copy_options::recursive);
  REQUIRE(FixtureStore::verify(dir.path()).empty());

  // Flip one byte in the body of the largest transaction.
  std::filesystem::path victim;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir.path() / "http")) {
    if (victim.empty() || e.file_size() > std::filesystem::file_size(victim)) victim = e.path();
  }
  auto bytes = testing::slurp(victim);
  bytes.back() = bytes.back() == 'x' ? 'y' : 'x';
  testing::write_file(victim, bytes);
  auto problems = FixtureStore::verify(dir.path());
  REQUIRE(problems.size() == 1);
  CHECK(problems[0].problem.find("digest") != std::string::npos);

  std::filesystem::remove(victim);
  problems = FixtureStore::verify(dir.path());
  REQUIRE(problems.size() == 1);
  CHECK(problems[0].problem.find("missing") != std::string::npos);

  testing::write_file(dir.path() / "index.tsv", "only one column\n");
  CHECK_FALSE(FixtureStore::verify(dir.path()).empty());
  CHECK(code_of([&] { FixtureStore s(FixtureMode::Replay, dir.path()); }) == Errc::ArchiveCorrupt);
  CHECK(code_of([&] { FixtureStore s(FixtureMode::Replay, dir.path() / "absent"); }) == Errc::ArchiveCorrupt);
}

TEST_CASE("fetch policy validation") {
  FetchPolicy p;
  CHECK_NOTHROW(p.validate());
  CHECK(p.timeouts().connect.count() == 10000);
  p.connect_timeout = 40;
  CHECK(code_of([&] { p.validate(); }) == Errc::InvalidArgument);
  p = FetchPolicy{};
  p.max_redirects = 0;
  CHECK(code_of([&] { p.validate(); }) == Errc::InvalidArgument);
  p = FetchPolicy{};
  p.max_requests_per_domain = 0;
  CHECK(code_of([&] { p.validate(); }) == Errc::InvalidArgument);
  FixtureStore store;
  CHECK(code_of([&] { Fetcher f(store, SuffixRules::bundled(), p, nullptr); }) == Errc::InvalidArgument);
}

TEST_CASE("budget tracker") {
  BudgetTracker b(2);
  b.consume("a.example");
  b.consume("a.example");
  CHECK(b.used("a.example") == 2);
  CHECK(b.remaining("a.example") == 0);
  CHECK(code_of([&] { b.consume("a.example"); }) == Errc::BudgetExhausted);
  CHECK(b.used("a.example") == 2);
  CHECK(b.remaining("b.example") == 2);
}

TEST_CASE("redirects are followed manually and charged per registrable domain") {
  auto net = std::make_shared<FakeNetwork>();
  net->http[url("https://a.example/")] = testing::redirect_to("/home");
  net->http[url("https://a.example/home")] = testing::redirect_to("https://www.b.example/landing", 302);
  net->http[url("https://www.b.example/landing")] = testing::html_page("<p>done</p>");
  FixtureStore store;
  Fetcher fetcher(store, SuffixRules::bundled(), FetchPolicy{}, net);
  BudgetTracker budget;
  const auto r = fetcher.fetch("https://a.example/", budget);
  CHECK(r.final_url == "https://www.b.example/landing");
  CHECK(r.redirect_chain ==
        std::vector<std::string>{"https://a.example/", "https://a.example/home", "https://www.b.example/landing"});
  CHECK(r.content_type == "text/html");
  CHECK(budget.used("a.example") == 2);
  CHECK(budget.used("b.example") == 1);
}

TEST_CASE("redirect loops end at the budget or the chain limit") {
  auto net = std::make_shared<FakeNetwork>();
  net->http[url("https://loop.example/a")] = testing::redirect_to("/b");
  net->http[url("https://loop.example/b")] = testing::redirect_to("/a");
  FixtureStore store;
  {
    Fetcher fetcher(store, SuffixRules::bundled(), FetchPolicy{}, net);
    BudgetTracker budget(5);
    CHECK(code_of([&] { fetcher.fetch("https://loop.example/a", budget); }) == Errc::BudgetExhausted);
    CHECK(budget.used("loop.example") == 5);
  }
  {
    FetchPolicy p;
    p.max_redirects = 3;
    Fetcher fetcher(store, SuffixRules::bundled(), p, net);
    BudgetTracker budget(100);
    CHECK(code_of([&] { fetcher.fetch("https://loop.example/a", budget); }) == Errc::TooManyRedirects);
    CHECK(budget.used("loop.example") == 3);
  }
}

TEST_CASE("transport failures surface as errors") {
  auto net = std::make_shared<FakeNetwork>();
  StoredResponse slow;
  slow.error = "Timeout";
  net->http[url("https://slow.example/")] = slow;
  FixtureStore store;
  Fetcher fetcher(store, SuffixRules::bundled(), FetchPolicy{}, net);
  BudgetTracker budget;
  CHECK(code_of([&] { fetcher.fetch("https://slow.example/", budget); }) == Errc::Timeout);
  CHECK(code_of([&] { fetcher.fetch("https://down.example/", budget); }) == Errc::TransportFailure);
  CHECK(code_of([&] { fetcher.fetch("ftp://x.example/", budget); }) == Errc::InvalidArgument);
  Fetcher offline(store, SuffixRules::bundled(), FetchPolicy{}, nullptr);
  CHECK(code_of([&] { offline.fetch("https://a.example/", budget); }) == Errc::TransportFailure);
}

TEST_CASE("search replays archived results and honors the provider limit") {
  FixtureStore store(FixtureMode::Replay, testing::archive_dir());
  NullSearchProvider provider;
  const auto hits = search("landing-only.example   privacy policy", provider, store);
  CHECK(hits == std::vector<std::string>{"https://landing-only.example/about", "https://reviews.example/landing-only"});
  NullSearchProvider one("google-cse", 1);
  CHECK(search("landing-only.example privacy policy", one, store).size() == 1);
  CHECK(search("backend-only.example privacy policy", provider, store).empty());
  CHECK(code_of([&] { search("   ", provider, store); }) == Errc::EmptyInput);
  CHECK(code_of([&] { search("never archived", provider, store); }) == Errc::ReplayMiss);
  // Searches never touch a domain budget; nothing to assert beyond the log.
  CHECK(store.transaction_log().back().kind == TxnKind::Search);
}

TEST_CASE("search providers") {
  FixtureStore live;
  NullSearchProvider none;
  CHECK(code_of([&] { search("q", none, live); }) == Errc::ProviderUnavailable);

  ::unsetenv("ORGTRACE_SEARCH_KEY");
  ::unsetenv("ORGTRACE_SEARCH_CX");
  auto net = std::make_shared<FakeNetwork>();
  GoogleSearchProvider google(net, 5);
  CHECK(code_of([&] { google.live_search("q"); }) == Errc::ProviderUnavailable);
  CHECK(net->calls == 0);

  ::setenv("ORGTRACE_SEARCH_KEY", "k e y", 1);
  ::setenv("ORGTRACE_SEARCH_CX", "cx1", 1);
  const auto expected = url("https://www.googleapis.com/customsearch/v1?key=k%20e%20y&cx=cx1&q=a%20b&num=5");
  net->json[expected] = testing::text_body(R"({"items":[{"link":"https://x.example/p"},{"title":"no link"},{"link":"https://y.example/"}]})");
  net->json[expected].status = 200;
  CHECK(google.live_search("a b") == std::vector<std::string>{"https://x.example/p", "https://y.example/"});
  ::unsetenv("ORGTRACE_SEARCH_KEY");
  ::unsetenv("ORGTRACE_SEARCH_CX");

  CHECK(GoogleSearchProvider::parse_response(R"({"kind":"customsearch#search"})").empty());
  CHECK(code_of([] { GoogleSearchProvider::parse_response("not json"); }) == Errc::ProviderUnavailable);
}
