// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "orgtrace/analysis.hpp"
#include "orgtrace/audit.hpp"
#include "orgtrace/evalbench.hpp"
#include "orgtrace/resolver.hpp"
#include "orgtrace/toolkit.hpp"
#include "orgtrace/url.hpp"
#include "orgtrace/whois.hpp"
#include "support.hpp"

using namespace orgtrace;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 5) failures.push_back(what);
  }
};

Config replay_config() {
  Config c;
  c.mode = FixtureMode::Replay;
  c.fixture_dir = testing::archive_dir().string();
  return c;
}

const AnalysisComponents& components() {
  static const RuleBasedExtractor extractor;
  static const AnalysisComponents c{LanguageProfiles::bundled(), bundled_classifier(), ControllerLexicon::bundled(),
                                    EntityRules::bundled(),      extractor,            0.02};
  return c;
}

std::vector<std::string> fixture_domains() {
  auto d = text::config_lines(testing::slurp(testing::fixtures_dir() / "domains.txt"));
  d.push_back("loop-redirect.example");
  return d;
}

bool near(const std::optional<double>& ratio, double percent) {
  return ratio && std::abs(*ratio * 100.0 - percent) <= 0.01;
}

void metric_arithmetic(Check& c) {
  const auto a = compute_metrics(67, 3, 30);
  c.expect(near(a.precision, 95.71), "precision (67,3,30)");
  const auto b = compute_metrics(20, 10, 70);
  c.expect(near(b.precision, 66.67), "precision (20,10,70)");
  c.expect(near(b.accuracy, 20.00), "accuracy (20,10,70)");
  const auto d = compute_metrics(37, 2, 61);
  c.expect(near(d.precision, 94.87), "precision (37,2,61)");
  const auto e = compute_metrics(56, 4, 40);
  c.expect(near(e.recall, 58.33), "recall (56,4,40)");
  c.expect(near(e.f1, 71.79), "f1 (56,4,40)");
}

void tiktok_extraction(Check& c) {
  const std::string url = "https://tiktok-fixture.example/legal/privacy-policy?lang=en";
  FixtureStore store(FixtureMode::Replay, testing::archive_dir());
  const auto page = store.replay_lookup(Descriptor::http_get(*parse_url(url))).body;
  c.expect(page.find("provided and controlled by TikTok Inc.") != std::string::npos, "fixture carries the paragraph");
  const auto got = analyze(page, url, components());
  c.expect(got.controller == "TikTok Inc.", "controller is '" + got.controller + "'");
}

void red_flag(Check& c) {
  Toolkit kit(replay_config());
  const auto r = kit.resolver().resolve("unseenreport.com");
  c.expect(r.method == Method::Unidentified, "method " + std::string(method_name(r.method)));
  c.expect(!r.organization, "no organization");
  c.expect(r.flags == std::set<ResultFlag>{{FlagKind::CrossSldRedirect, ""}, {FlagKind::WhoisRedacted, ""}},
           "flags exactly CrossSld + WhoisRedacted");
  c.expect(to_record_line(r).find("Google") == std::string::npos, "no Google in the record");
}

struct LogCounts {
  int http_to_target = 0;
  int whois = 0;
};

LogCounts counts_for(Toolkit& kit, const RoiResult& r) {
  LogCounts n;
  for (const auto& e : kit.store().transaction_log()) {
    if (e.kind == TxnKind::Whois) ++n.whois;
    if (e.kind != TxnKind::Http) continue;
    const auto u = parse_url(e.key.substr(4));
    if (u && registrable_key(u->host, kit.rules()) == r.registrable_domain) ++n.http_to_target;
  }
  return n;
}

void budget(Check& c) {
  Toolkit kit(replay_config());
  const auto resolver = kit.resolver();
  for (const auto& d : fixture_domains()) {
    kit.store().clear_log();
    const auto r = resolver.resolve(d);
    const auto n = counts_for(kit, r);
    c.expect(n.http_to_target <= 5, d + ": " + std::to_string(n.http_to_target) + " requests");
  }
}

void fallback_order(Check& c) {
  Toolkit kit(replay_config());
  const auto resolver = kit.resolver();
  int whois_seen = 0;
  for (const auto& d : fixture_domains()) {
    kit.store().clear_log();
    const auto r = resolver.resolve(d);
    const auto n = counts_for(kit, r);
    whois_seen += n.whois > 0;
    if (n.whois > 0) {
      c.expect(r.has_flag(FlagKind::PolicyStageFailed) || r.has_flag(FlagKind::CrossSldRedirect),
               d + ": WHOIS without a failed or flagged policy stage");
    }
    if (r.method == Method::PolicyAnalysis) c.expect(n.whois == 0, d + ": WHOIS after a policy answer");
  }
  c.expect(whois_seen > 0, "some fixture exercises the fallback");
}

WhoisRecord load_hops(const fs::path& file) {
  WhoisRecord r;
  for (const auto& line : text::split_lines(testing::slurp(file))) {
    if (line.rfind("=== ", 0) == 0) r.hops.push_back({std::string(line.substr(4)), ""});
    else if (!r.hops.empty()) r.hops.back().response += std::string(line) + "\n";
  }
  for (std::size_t i = 0; i < r.hops.size(); ++i) r.raw += (i ? "\n" : "") + r.hops[i].response;
  return r;
}

void whois_parser(Check& c) {
  const auto& lex = RedactionLexicon::bundled();
  std::set<std::string> classes;
  int n = 0;
  for (const auto& line : text::config_lines(testing::slurp(testing::test_data("whois/labels.tsv")))) {
    const auto cols = text::split(line, '\t');
    const std::string file(cols[0]), want(cols[1]);
    const auto got = parse_registrant(load_hops(testing::test_data("whois/" + file)), lex);
    c.expect(registrant_kind_name(got.kind) == want, file + " parsed as " + std::string(registrant_kind_name(got.kind)));
    if (cols.size() > 2 && (want == "Org" || want == "Redacted")) c.expect(got.value == cols[2], file + " value");
    classes.insert(want);
    ++n;
  }
  c.expect(n >= 15, "fixture count " + std::to_string(n));
  c.expect(classes == std::set<std::string>{"Absent", "Empty", "Org", "Redacted"}, "all four classes covered");

  std::mt19937_64 rng(1001);
  const std::string alpha = "abcdefghijklmnopqrstuvwxyz ABCDEFGHIJKLMNOPQRSTUVWXYZ.,&-0123456789";
  std::uniform_int_distribution<std::size_t> pick(0, lex.entries().size() - 1);
  std::bernoulli_distribution plant(0.5);
  for (int i = 0; i < 10000; ++i) {
    std::string value = testing::random_text(rng, 24, alpha);
    if (plant(rng)) value += " " + lex.entries()[pick(rng)] + " " + testing::random_text(rng, 8, alpha);
    value = std::string(text::trim(value));
    if (value.empty()) value = "x";
    WhoisRecord rec;
    rec.hops.push_back({"whois.example", "Registrant Organization: " + value + "\n"});
    const auto r = parse_registrant(rec, lex);
    c.expect(!(r.kind == RegistrantKind::Org && redaction_match(r.value, lex)), "Org matching the lexicon: " + value);
  }
}

void classifier_target(Check& c) {
  const auto train = bundled_corpus("train");
  const auto holdout = bundled_corpus("holdout");
  std::size_t policies = 0;
  for (const auto& d : train) policies += d.is_policy;
  c.expect(policies >= 60 && train.size() - policies >= 60, "training split size");
  c.expect(holdout.size() >= 30, "holdout size");
  const auto a = train_classifier(train, ClassifierConfig{});
  const auto b = train_classifier(train, ClassifierConfig{});
  std::stringstream sa, sb;
  a.save(sa);
  b.save(sb);
  c.expect(a == b && sa.str() == sb.str(), "two trainings differ");
  std::size_t right = 0;
  for (const auto& d : holdout) right += a.classify(d.text).is_policy == d.is_policy;
  const double acc = holdout.empty() ? 0.0 : static_cast<double>(right) / static_cast<double>(holdout.size());
  c.expect(acc >= 0.9, "holdout accuracy " + std::to_string(acc));
}

void controller_suite(Check& c) {
  int total = 0, right = 0, none = 0;
  for (const auto& line : text::config_lines(testing::slurp(testing::test_data("controller/labels.tsv")))) {
    const auto cols = text::split(line, '\t');
    const std::string file(cols[0]), want(cols[1]);
    const auto content = testing::slurp(testing::test_data("controller/" + file));
    std::optional<std::string> got;
    Errc code = Errc::InvalidArgument;
    try {
      const auto t = extract_text(content);
      got = extract_controller(select_paragraphs(t, ControllerLexicon::bundled()), EntityRules::bundled()).controller;
    } catch (const Error& e) {
      code = e.code();
    }
    if (want == "-") {
      ++none;
      c.expect(!got && (code == Errc::NoController || code == Errc::NoQualifyingParagraphs),
               file + " guessed " + got.value_or("?"));
      continue;
    }
    ++total;
    right += got && normalize_org(*got) == normalize_org(want);
  }
  c.expect(total >= 20, "annotated fixtures " + std::to_string(total));
  c.expect(none >= 1, "no NoController fixture");
  c.expect(total > 0 && right * 10 >= total * 9, "exact match " + std::to_string(right) + "/" + std::to_string(total));
}

void disclosure(Check& c) {
  std::mt19937_64 rng(4242);
  for (int i = 0; i < 1000; ++i) {
    const auto inst = testing::random_disclosure_instance(rng);
    const auto got = classify_disclosure(inst.received, inst.disclosed, OrgHierarchy(inst.relations));
    c.expect(got == testing::oracle_disclosure(inst), "instance " + std::to_string(i));
  }

  Toolkit kit(replay_config());
  const auto dir = testing::fixtures_dir() / "walkthrough";
  std::ifstream flows_in(dir / "flows.tsv");
  const auto flows = ingest_flows(flows_in, true).records;
  std::ifstream rel_in(dir / "relations.tsv");
  const auto relations = parse_relations(rel_in);
  std::set<std::string> unique;
  for (const auto& f : flows) unique.insert(f.destination.text());
  const std::vector<std::string> dests(unique.begin(), unique.end());
  const auto results = kit.resolver().resolve_batch(dests, 2);
  std::map<std::string, RoiResult> resolutions;
  for (std::size_t i = 0; i < dests.size(); ++i) resolutions[dests[i]] = results[i];
  std::map<std::string, PolicyText> policies;
  for (const auto& e : fs::directory_iterator(dir / "policies")) {
    policies.emplace(e.path().stem().string(), extract_text(testing::slurp(e.path())));
  }
  const auto report = build_report(flows, resolutions, policies, OrgHierarchy(relations), kit.entity_rules(),
                                    kit.rules());
  c.expect(report.full == 1 && report.partial == 1 && report.none == 1,
           "counts " + std::to_string(report.full) + "/" + std::to_string(report.partial) + "/" +
               std::to_string(report.none));
}

struct CliRun {
  int status = -1;
  std::string out;
  double seconds = 0;
  int sockets = -1;
  bool probed = false;
};

CliRun batch_under_probe(const fs::path& log) {
  fs::remove(log);
  const std::string cmd = "env -u ORGTRACE_SEARCH_KEY -u ORGTRACE_SEARCH_CX LD_PRELOAD=" +
                          std::string(ORGTRACE_SOCKET_PROBE) + " ORGTRACE_SOCKET_LOG=" + log.string() + " " +
                          ORGTRACE_CLI + " --replay " + testing::archive_dir().string() + " --json batch " +
                          (testing::fixtures_dir() / "domains.txt").string() + " 2>/dev/null";
  CliRun r;
  const auto t0 = Clock::now();
  r.status = testing::run_command(cmd, &r.out);
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  r.sockets = 0;
  if (fs::exists(log)) {
    for (const auto& line : text::split_lines(testing::slurp(log))) {
      if (line == "loaded") r.probed = true;
      if (line == "socket") ++r.sockets;
    }
  }
  return r;
}

void offline_determinism(Check& c) {
  testing::TempDir dir("acceptance");
  const auto a = batch_under_probe(dir.path() / "a.log");
  const auto b = batch_under_probe(dir.path() / "b.log");
  for (const auto* r : {&a, &b}) {
    c.expect(r->status == 0, "exit status " + std::to_string(r->status));
    c.expect(r->seconds < 10.0, "run took " + std::to_string(r->seconds) + " s");
    c.expect(r->probed, "socket probe was not loaded");
    c.expect(r->sockets == 0, std::to_string(r->sockets) + " sockets opened");
  }
  c.expect(text::config_lines(a.out).size() == 10, "ten records");
  c.expect(!a.out.empty() && a.out == b.out, "outputs differ");
}

void properties(Check& c) {
  const std::string host_alpha = "abcdefghijklmnopqrstuvwxyz0123456789-";
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> nlabels(1, 5);
  for (int i = 0; i < 1000; ++i) {
    std::vector<std::string> labels;
    for (int k = nlabels(rng); k > 0; --k) {
      auto l = testing::random_text(rng, 20, host_alpha);
      labels.push_back(l.empty() ? "a" : l);
    }
    const auto name = text::join(labels, ".");
    const auto f = parse_fqdn(name);
    c.expect(f.text() == name && parse_fqdn(f.text()) == f, "fqdn round-trip " + name);
  }

  const auto& rules = SuffixRules::bundled();
  const std::vector<std::string> bases = {"example.com", "example.co.uk", "shop.com.au", "news.org", "x.de"};
  std::uniform_int_distribution<std::size_t> base(0, bases.size() - 1);
  std::uniform_int_distribution<int> depth(1, 4);
  for (int i = 0; i < 1000; ++i) {
    const auto& b = bases[base(rng)];
    std::string host = b;
    for (int k = depth(rng); k > 0; --k) {
      const auto l = testing::random_text(rng, 10, "abcdefghijklmnopqrstuvwxyz0123456789");
      host = (l.empty() ? "w" : l) + "." + host;
    }
    c.expect(registrable_domain(parse_fqdn(host), rules).text == registrable_domain(parse_fqdn(b), rules).text,
             "subdomain invariance " + host);
  }

  const std::string org_alpha = "AbcDefGhi  .,'&-()IncLtdGmbHSA.0123";
  const std::vector<std::string> tails = {"", " Inc.", ", LLC", " GmbH", " S.A.", " Ltd"};
  std::uniform_int_distribution<std::size_t> tail(0, tails.size() - 1);
  int normalized = 0;
  for (int i = 0; normalized < 1000 && i < 5000; ++i) {
    const auto raw = testing::random_text(rng, 30, org_alpha) + tails[tail(rng)];
    try {
      const auto once = normalize_org(raw);
      c.expect(normalize_org(once.text).text == once.text, "normalize idempotence '" + raw + "'");
      ++normalized;
    } catch (const Error&) {
    }
  }
  c.expect(normalized == 1000, "normalize cases " + std::to_string(normalized));

  const auto& model = bundled_classifier();
  std::stringstream buf;
  model.save(buf);
  const auto back = PolicyClassifier::load(buf);
  std::uniform_int_distribution<std::size_t> term(0, model.terms().size() - 1);
  std::uniform_int_distribution<int> words(1, 60);
  for (int i = 0; i < 1000; ++i) {
    std::string doc;
    for (int k = words(rng); k > 0; --k) doc += model.terms()[term(rng)] + " ";
    c.expect(model.classify(doc).score == back.classify(doc).score, "classifier round-trip");
  }

  for (int i = 0; i < 1000; ++i) {
    const auto inst = testing::random_disclosure_instance(rng);
    const OrgHierarchy h(inst.relations);
    for (const auto& name : testing::oracle_names()) {
      const auto head = h.head(name);
      c.expect(h.head(head) == head, "rollup idempotence " + name);
    }
  }

  std::uniform_int_distribution<std::size_t> count(0, 200);
  auto no_lower = [](const std::optional<double>& x, const std::optional<double>& y) {
    return !x || (y && *y >= *x - 1e-12);
  };
  for (int i = 0; i < 1000; ++i) {
    const auto tp = count(rng), fp = count(rng), fn = count(rng) + 1;
    const auto m0 = compute_metrics(tp, fp, fn);
    const auto m1 = compute_metrics(tp + 1, fp, fn);
    c.expect(no_lower(m0.accuracy, m1.accuracy) && no_lower(m0.precision, m1.precision) &&
                 no_lower(m0.recall, m1.recall) && no_lower(m0.f1, m1.f1),
             "metrics monotonicity");
  }
}

struct Criterion {
  int number;
  const char* name;
  double limit_seconds;
  void (*run)(Check&);
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "metric arithmetic", 1, metric_arithmetic},
      {2, "TikTok paragraph through the analysis pipeline", 1, tiktok_extraction},
      {3, "cross-domain redirect with redacted WHOIS stays Unidentified", 1, red_flag},
      {4, "at most five requests per target domain", 5, budget},
      {5, "WHOIS only after a failed or flagged policy stage", 5, fallback_order},
      {6, "WHOIS registrant fixtures and redaction property", 5, whois_parser},
      {7, "classifier holdout accuracy and determinism", 30, classifier_target},
      {8, "controller extraction fixtures", 10, controller_suite},
      {9, "disclosure oracle and three-app scenario", 5, disclosure},
      {10, "offline batch is fast, repeatable and socket-free", 20, offline_determinism},
      {11, "round-trip and property suites", 30, properties},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Check c;
    const auto t0 = Clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (secs > cr.limit_seconds) c.failures.push_back("took " + std::to_string(secs) + " s");
    const bool ok = c.failures.empty();
    failed += !ok;
    std::printf("%s %2d %s (%.0f ms)\n", ok ? "PASS" : "FAIL", cr.number, cr.name, secs * 1000.0);
    for (const auto& f : c.failures) std::printf("       %s\n", f.c_str());
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
