// orgtrace command line. Exit codes: 0 attributed / success, 1 Unidentified
// (or a failed check), 2 usage or input error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "orgtrace/audit.hpp"
#include "orgtrace/evalbench.hpp"
#include "orgtrace/text.hpp"
#include "orgtrace/toolkit.hpp"

namespace fs = std::filesystem;
using namespace orgtrace;

namespace {

constexpr int kAttributed = 0;
constexpr int kUnidentified = 1;
constexpr int kUsage = 2;

struct Globals {
  std::string config;
  std::string replay;
  std::string record;
  bool live = false;
  std::size_t parallelism = 0;
  bool json = false;
};

// Input problems the operator can fix; printed and mapped to exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Config load_config(const Globals& g) {
  Config c = g.config.empty() ? Config{} : Config::load(g.config);
  if (!g.replay.empty()) {
    c.mode = FixtureMode::Replay;
    c.fixture_dir = g.replay;
  } else if (!g.record.empty()) {
    c.mode = FixtureMode::Record;
    c.fixture_dir = g.record;
  } else if (g.live) {
    c.mode = FixtureMode::Live;
  }
  if (g.parallelism > 0) c.parallelism = g.parallelism;
  return c;
}

std::string read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::vector<std::string> domain_lines(const std::string& content) {
  std::vector<std::string> out;
  for (const auto& line : text::split_lines(content)) {
    const auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.emplace_back(t);
  }
  return out;
}

std::string flags_text(const RoiResult& r) {
  std::vector<std::string> parts;
  for (const auto& f : r.flags) parts.push_back(f.str());
  return parts.empty() ? "-" : text::join(parts, ",");
}

void print_summary(const RoiResult& r) {
  std::cout << (r.organization ? *r.organization : std::string("Unidentified")) << "\n"
            << "  domain:      " << r.input_fqdn << " (" << r.registrable_domain << ")\n"
            << "  method:      " << method_name(r.method) << "\n";
  const auto ev = r.evidence_locator();
  if (!ev.empty()) std::cout << "  evidence:    " << ev << "\n";
  std::cout << "  flags:       " << flags_text(r) << "\n";
  if (r.certificate_note) {
    const auto& c = *r.certificate_note;
    std::cout << "  certificate: CN=" << c.subject_common_name
              << " O=" << c.subject_organization.value_or("-") << "\n";
  }
}

int cmd_resolve(const Globals& g, const std::string& domain, bool certificate) {
  Toolkit kit(load_config(g));
  RoiResult r;
  try {
    r = kit.resolver(certificate).resolve(domain);
  } catch (const Error& e) {
    if (e.code() != Errc::InvalidDomain) throw;
    throw UsageError(e.what());
  }
  if (g.json) std::cout << to_record_line(r) << "\n";
  else print_summary(r);
  return r.organization ? kAttributed : kUnidentified;
}

int cmd_batch(const Globals& g, const std::string& input, const std::string& output) {
  const auto domains = domain_lines(read_input(input));
  Toolkit kit(load_config(g));
  const auto results = kit.resolver().resolve_batch(domains, kit.config().parallelism);
  std::ostringstream out;
  for (const auto& r : results) out << to_record_line(r) << "\n";
  if (output.empty()) {
    std::cout << out.str();
  } else {
    std::ofstream f(output, std::ios::binary | std::ios::trunc);
    if (!f) throw UsageError("cannot write " + output);
    f << out.str();
  }
  std::size_t attributed = 0;
  for (const auto& r : results) attributed += r.organization ? 1 : 0;
  std::cerr << results.size() << " domains, " << attributed << " attributed\n";
  return kAttributed;
}

struct TechniqueRow {
  std::string technique;
  std::optional<std::string> organization;
  std::string detail;
};

std::vector<TechniqueRow> run_techniques(const Toolkit& kit, const std::string& domain, RoiResult& roi) {
  Fqdn fqdn;
  RegistrableDomain rd;
  try {
    fqdn = parse_fqdn(domain);
    rd = registrable_domain(fqdn, kit.rules());
  } catch (const Error& e) {
    throw UsageError(domain + ": " + e.what());
  }
  std::vector<TechniqueRow> rows;

  TechniqueRow whois{"whois", std::nullopt, ""};
  try {
    const auto record = kit.whois().query(rd);
    const auto reg = parse_registrant(record, kit.redaction());
    whois.detail = std::string(registrant_kind_name(reg.kind));
    if (reg.kind == RegistrantKind::Org) whois.organization = reg.value;
    if (reg.kind == RegistrantKind::Redacted) whois.detail += ": " + reg.value;
  } catch (const Error& e) {
    whois.detail = std::string(errc_name(e.code()));
  }
  rows.push_back(whois);

  TechniqueRow cert{"certificate", std::nullopt, ""};
  try {
    const auto summary = fetch_leaf_certificate(fqdn, kit.store(), kit.network().get(), kit.config().fetch.timeouts());
    cert.organization = org_from_certificate(summary);
    cert.detail = std::string(validation_class_name(classify_validation(summary, kit.ev_oids()))) +
                  " CN=" + summary.subject_common_name;
  } catch (const Error& e) {
    cert.detail = std::string(errc_name(e.code()));
  }
  rows.push_back(cert);

  const auto resolver = kit.resolver();
  TechniqueRow policy{"policy", std::nullopt, ""};
  {
    BudgetTracker budget(kit.config().fetch.max_requests_per_domain);
    const auto attempt = resolver.attempt_policy(rd, budget);
    policy.organization = attempt.organization;
    std::vector<std::string> notes;
    if (attempt.evidence) notes.push_back(attempt.evidence->url + "#paragraph=" + std::to_string(attempt.evidence->paragraph_index));
    if (attempt.cross_sld_redirect) notes.emplace_back("cross_sld_redirect");
    for (const auto& f : attempt.failures) notes.push_back(f.str());
    policy.detail = text::join(notes, " ");
  }
  rows.push_back(policy);

  roi = resolver.resolve(fqdn);
  rows.push_back({"roi", roi.organization, std::string(method_name(roi.method)) + " " + flags_text(roi)});
  return rows;
}

int cmd_techniques(const Globals& g, const std::string& domain) {
  Toolkit kit(load_config(g));
  RoiResult roi;
  const auto rows = run_techniques(kit, domain, roi);
  if (g.json) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      nlohmann::ordered_json o;
      o["technique"] = r.technique;
      o["organization"] = r.organization ? nlohmann::ordered_json(*r.organization) : nlohmann::ordered_json(nullptr);
      o["detail"] = r.detail;
      arr.push_back(o);
    }
    nlohmann::ordered_json top;
    top["fqdn"] = domain;
    top["techniques"] = arr;
    std::cout << top.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << "\n";
  } else {
    std::printf("%-12s %-32s %s\n", "technique", "organization", "detail");
    for (const auto& r : rows) {
      std::printf("%-12s %-32s %s\n", r.technique.c_str(), r.organization.value_or("-").c_str(), r.detail.c_str());
    }
  }
  return roi.organization ? kAttributed : kUnidentified;
}

int cmd_eval(const Globals& g, const std::string& results_path, const std::string& truth_path, std::string label) {
  std::ifstream results(results_path, std::ios::binary);
  if (!results) throw UsageError("cannot read " + results_path);
  std::ifstream truth(truth_path, std::ios::binary);
  if (!truth) throw UsageError("cannot read " + truth_path);
  if (label.empty()) label = fs::path(results_path).stem().string();
  TechniqueEvaluation ev;
  try {
    ev = evaluate_technique(results, truth);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (g.json) std::cout << metrics_json(label, ev) << "\n";
  else std::cout << render_metrics_header() << "\n" << render_metrics_row(label, ev.metrics) << "\n";
  return kAttributed;
}

int cmd_train(const Globals& g, const std::string& corpus, const std::string& holdout, const std::string& out_model,
              const ClassifierConfig& cc) {
  std::vector<LabeledText> train;
  std::vector<LabeledText> test;
  try {
    train = corpus.empty() ? bundled_corpus("train") : load_corpus(corpus);
    if (!holdout.empty()) test = load_corpus(holdout);
    else if (corpus.empty()) test = bundled_corpus("holdout");
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  PolicyClassifier model;
  try {
    model = train_classifier(train, cc);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  model.save(fs::path(out_model));
  std::size_t correct = 0;
  for (const auto& doc : test) correct += model.classify(doc.text).is_policy == doc.is_policy ? 1 : 0;
  if (g.json) {
    nlohmann::ordered_json o;
    o["model"] = out_model;
    o["train_documents"] = train.size();
    o["terms"] = model.terms().size();
    o["holdout_documents"] = test.size();
    o["holdout_accuracy"] = test.empty() ? nlohmann::ordered_json(nullptr)
                                         : nlohmann::ordered_json(static_cast<double>(correct) / test.size());
    std::cout << o.dump() << "\n";
  } else {
    std::cout << "trained on " << train.size() << " documents, " << model.terms().size() << " terms -> " << out_model
              << "\n";
    if (!test.empty()) {
      std::cout << "holdout accuracy: " << format_percent(static_cast<double>(correct) / test.size()) << " (" << correct
                << "/" << test.size() << ")\n";
    }
  }
  return kAttributed;
}

int cmd_audit(const Globals& g, const std::string& flows_path, const std::string& relations_path,
              const std::string& policies_dir, bool strict) {
  std::istringstream flows_in(read_input(flows_path));
  std::istringstream relations_in(read_input(relations_path));
  if (!fs::is_directory(policies_dir)) throw UsageError(policies_dir + " is not a directory");

  IngestResult flows;
  std::vector<OrgRelation> relations;
  try {
    flows = ingest_flows(flows_in, strict);
    relations = parse_relations(relations_in);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  for (const auto& w : flows.warnings) std::cerr << flows_path << ": " << w << "\n";
  OrgHierarchy hierarchy;
  try {
    hierarchy = OrgHierarchy(relations);
  } catch (const Error& e) {
    throw UsageError(relations_path + ": " + e.what());
  }

  std::map<std::string, PolicyText> policies;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(policies_dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& p : files) {
    try {
      policies[p.stem().string()] = extract_text(read_input(p.string()), p.filename().string());
    } catch (const Error& e) {
      std::cerr << p.string() << ": " << e.what() << "\n";
    }
  }

  std::set<std::string> unique;
  for (const auto& f : flows.records) unique.insert(f.destination.text());
  const std::vector<std::string> destinations(unique.begin(), unique.end());
  Toolkit kit(load_config(g));
  const auto results = kit.resolver().resolve_batch(destinations, kit.config().parallelism);
  std::map<std::string, RoiResult> resolutions;
  for (std::size_t i = 0; i < destinations.size(); ++i) resolutions[destinations[i]] = results[i];

  const auto report = build_report(flows.records, resolutions, policies, hierarchy, kit.entity_rules(), kit.rules());
  if (g.json) std::cout << report_json(report) << "\n";
  else std::cout << render_report(report);
  return kAttributed;
}

int cmd_fixtures_record(Globals g, const std::string& domains_file, const std::string& archive) {
  const auto domains = domain_lines(read_input(domains_file));
  g.replay.clear();
  g.live = false;
  g.record = archive;
  Toolkit kit(load_config(g));
  // The technique comparison touches every transport, so a recorded archive
  // can answer resolve, batch and techniques alike.
  for (const auto& d : domains) {
    RoiResult roi;
    try {
      run_techniques(kit, d, roi);
      std::cout << to_record_line(roi) << "\n";
    } catch (const UsageError& e) {
      std::cerr << e.what() << "\n";
    }
  }
  std::cerr << "recorded " << kit.store().transaction_log().size() << " transactions into " << archive << "\n";
  return kAttributed;
}

int cmd_fixtures_verify(const std::string& archive) {
  if (!fs::is_directory(archive)) throw UsageError(archive + " is not a directory");
  const auto problems = FixtureStore::verify(archive);
  for (const auto& p : problems) std::cout << p.key << "\t" << p.problem << "\n";
  if (problems.empty()) {
    std::cerr << archive << ": intact\n";
    return 0;
  }
  std::cerr << archive << ": " << problems.size() << " problem(s)\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orgtrace: attribute domains to the organizations that hold them"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "key = value configuration file")->check(CLI::ExistingFile);
  auto* replay = app.add_option("--replay", g.replay, "answer every request from this fixture archive");
  auto* record = app.add_option("--record", g.record, "run live and record into this fixture archive");
  auto* live = app.add_flag("--live", g.live, "run against the network");
  replay->excludes(record)->excludes(live);
  record->excludes(live);
  app.add_option("--parallelism", g.parallelism, "worker threads for batch resolution")->check(CLI::PositiveNumber);
  app.add_flag("--json", g.json, "machine-readable output");

  std::string domain;
  bool certificate = false;
  auto* resolve = app.add_subcommand("resolve", "attribute one domain");
  resolve->fallthrough();
  resolve->add_option("domain", domain, "fully qualified domain name")->required();
  resolve->add_flag("--certificate", certificate, "attach the TLS certificate summary");

  std::string batch_input;
  std::string batch_output;
  auto* batch = app.add_subcommand("batch", "attribute a file of domains, one JSON record per line");
  batch->fallthrough();
  batch->add_option("domains", batch_input, "file with one domain per line")->required();
  batch->add_option("-o,--output", batch_output, "write records here instead of stdout");

  std::string tech_domain;
  auto* techniques = app.add_subcommand("techniques", "compare WHOIS, certificate, policy and combined answers");
  techniques->fallthrough();
  techniques->add_option("domain", tech_domain, "fully qualified domain name")->required();

  std::string eval_results;
  std::string eval_truth;
  std::string eval_label;
  auto* eval = app.add_subcommand("eval", "score result records against a ground truth");
  eval->fallthrough();
  eval->add_option("results", eval_results, "result records (JSON lines)")->required();
  eval->add_option("truth", eval_truth, "domain<TAB>organization file")->required();
  eval->add_option("--label", eval_label, "row label");

  std::string train_corpus;
  std::string train_holdout;
  std::string train_out;
  ClassifierConfig cc;
  auto* train = app.add_subcommand("train", "fit the policy classifier");
  train->fallthrough();
  train->add_option("corpus", train_corpus, "directory with labels.tsv (default: bundled corpus)");
  train->add_option("--holdout", train_holdout, "held-out directory with labels.tsv");
  train->add_option("-o,--output", train_out, "model file to write")->required();
  train->add_option("--alpha", cc.alpha);
  train->add_option("--epochs", cc.epochs);
  train->add_option("--seed", cc.seed);
  train->add_option("--max-vocabulary", cc.max_vocabulary);

  std::string audit_flows;
  std::string audit_relations;
  std::string audit_policies;
  bool audit_strict = false;
  auto* audit = app.add_subcommand("audit", "third-party disclosure audit over app traffic");
  audit->fallthrough();
  audit->add_option("flows", audit_flows, "app<TAB>fqdn<TAB>transport<TAB>data types")->required();
  audit->add_option("relations", audit_relations, "child<TAB>parent organization file")->required();
  audit->add_option("policies", audit_policies, "directory of <app_id>.txt|.html policies")->required();
  audit->add_flag("--strict", audit_strict, "reject the first malformed flow line");

  auto* fixtures = app.add_subcommand("fixtures", "record or verify fixture archives");
  fixtures->require_subcommand(1);
  std::string rec_domains;
  std::string rec_archive;
  auto* frecord = fixtures->add_subcommand("record", "resolve domains live and archive every transaction");
  frecord->fallthrough();
  frecord->add_option("domains", rec_domains, "file with one domain per line")->required();
  frecord->add_option("archive", rec_archive, "archive directory")->required();
  std::string ver_archive;
  auto* fverify = fixtures->add_subcommand("verify", "check an archive for missing or tampered entries");
  fverify->fallthrough();
  fverify->add_option("archive", ver_archive, "archive directory")->required();
  fixtures->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*resolve) return cmd_resolve(g, domain, certificate);
    if (*batch) return cmd_batch(g, batch_input, batch_output);
    if (*techniques) return cmd_techniques(g, tech_domain);
    if (*eval) return cmd_eval(g, eval_results, eval_truth, eval_label);
    if (*train) return cmd_train(g, train_corpus, train_holdout, train_out, cc);
    if (*audit) return cmd_audit(g, audit_flows, audit_relations, audit_policies, audit_strict);
    if (*frecord) return cmd_fixtures_record(g, rec_domains, rec_archive);
    if (*fverify) return cmd_fixtures_verify(ver_archive);
  } catch (const UsageError& e) {
    std::cerr << "orgtrace: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "orgtrace: " << errc_name(e.code()) << ": " << e.what() << "\n";
    return e.code() == Errc::ConfigError || e.code() == Errc::ArchiveCorrupt ? kUsage : kUnidentified;
  }
  return kUsage;
}
