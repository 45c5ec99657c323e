#include "orgtrace/resolver.hpp"

#include <atomic>
#include <future>
#include <map>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "orgtrace/text.hpp"

namespace orgtrace {

namespace {

bool ok_status(int status) { return status >= 200 && status < 300; }

ResultFlag stage_failure(std::string_view stage, Errc code) {
  return {FlagKind::PolicyStageFailed, std::string(stage) + ":" + std::string(errc_name(code))};
}

bool before_gate(AnalysisStage stage) {
  return stage == AnalysisStage::ExtractText || stage == AnalysisStage::Language ||
         stage == AnalysisStage::Classify;
}

}  // namespace

std::string_view method_name(Method method) {
  switch (method) {
    case Method::PolicyAnalysis: return "policy_analysis";
    case Method::Whois: return "whois";
    case Method::Unidentified: return "unidentified";
  }
  return "unidentified";
}

std::optional<Method> method_from_name(std::string_view name) {
  for (auto m : {Method::PolicyAnalysis, Method::Whois, Method::Unidentified}) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

std::string ResultFlag::str() const {
  switch (kind) {
    case FlagKind::CrossSldRedirect: return "cross_sld_redirect";
    case FlagKind::PolicyStageFailed: return "policy_failed:" + detail;
    case FlagKind::WhoisRedacted: return "whois_redacted";
    case FlagKind::WhoisFailed: return "whois_failed:" + detail;
    case FlagKind::InvalidDomain: return "invalid_domain";
  }
  return {};
}

std::optional<ResultFlag> ResultFlag::parse(std::string_view s) {
  if (s == "cross_sld_redirect") return ResultFlag{FlagKind::CrossSldRedirect, ""};
  if (s == "whois_redacted") return ResultFlag{FlagKind::WhoisRedacted, ""};
  if (s == "invalid_domain") return ResultFlag{FlagKind::InvalidDomain, ""};
  if (s.starts_with("policy_failed:")) return ResultFlag{FlagKind::PolicyStageFailed, std::string(s.substr(14))};
  if (s.starts_with("whois_failed:")) return ResultFlag{FlagKind::WhoisFailed, std::string(s.substr(13))};
  return std::nullopt;
}

bool RoiResult::has_flag(FlagKind kind) const {
  for (const auto& f : flags) {
    if (f.kind == kind) return true;
  }
  return false;
}

std::string RoiResult::evidence_locator() const {
  if (method == Method::PolicyAnalysis && policy_evidence) {
    return "policy:" + policy_evidence->url + "#paragraph=" + std::to_string(policy_evidence->paragraph_index);
  }
  if (method == Method::Whois && whois_evidence) return "whois:" + whois_evidence->server;
  return {};
}

PolicyAttempt Resolver::attempt_policy(const RegistrableDomain& domain, BudgetTracker& budget) const {
  const auto& s = services_;
  PolicyAttempt attempt;
  DiscoveryDeps deps{s.fetcher, s.search, budget};

  DiscoveryOutcome found;
  try {
    found = discover(domain, deps, s.links);
  } catch (const DiscoveryError& e) {
    if (e.partial()) attempt.cross_sld_redirect = e.partial()->cross_sld_redirect;
    attempt.failures.push_back(stage_failure("discovery", e.code()));
    return attempt;
  } catch (const Error& e) {
    attempt.failures.push_back(stage_failure("discovery", e.code()));
    return attempt;
  }
  attempt.cross_sld_redirect = found.homepage.cross_sld_redirect;

  std::vector<std::string> tried;
  // Returns true once a page passed the classifier gate (success or not).
  auto try_candidates = [&](const std::vector<PolicyCandidate>& candidates) {
    std::size_t used = 0;
    for (const auto& c : candidates) {
      if (used >= s.max_candidates) break;
      if (std::find(tried.begin(), tried.end(), c.url) != tried.end()) continue;
      tried.push_back(c.url);
      ++used;
      FetchResult page;
      try {
        page = s.fetcher.fetch(c.url, budget);
      } catch (const Error& e) {
        attempt.failures.push_back(stage_failure("fetch", e.code()));
        if (e.code() == Errc::BudgetExhausted) return true;
        continue;
      }
      if (!ok_status(page.status_code)) {
        attempt.failures.push_back(stage_failure("fetch", Errc::Unreachable));
        continue;
      }
      try {
        auto analysis = analyze_page(page.body, page.final_url, s.analysis);
        if (s.on_policy_text) s.on_policy_text(domain, analysis.text);
        attempt.organization = analysis.extraction.controller;
        attempt.evidence = PolicyEvidence{page.final_url, analysis.extraction.paragraph_index};
        attempt.failures.clear();
        return true;
      } catch (const AnalysisError& e) {
        attempt.failures.push_back(stage_failure(analysis_stage_name(e.stage()), e.code()));
        if (!before_gate(e.stage())) {
          if (s.on_policy_text) {
            try {
              s.on_policy_text(domain, extract_text(page.body, page.final_url));
            } catch (const Error&) {
            }
          }
          return true;
        }
      }
    }
    return false;
  };

  if (try_candidates(found.candidates)) return attempt;
  if (!found.candidates.empty() && found.candidates.front().source == CandidateSource::HomepageLink) {
    try {
      try_candidates(search_policy(domain, deps));
    } catch (const Error& e) {
      attempt.failures.push_back(stage_failure("search", e.code()));
    }
  }
  return attempt;
}

WhoisAttempt Resolver::attempt_whois(const RegistrableDomain& domain) const {
  WhoisAttempt attempt;
  try {
    const auto record = services_.whois.query(domain);
    auto registrant = parse_registrant(record, services_.redaction);
    attempt.evidence = WhoisEvidence{record.hops.at(registrant.hop_index).server, record.hops.size()};
    attempt.registrant = std::move(registrant);
  } catch (const Error& e) {
    attempt.failure = std::string(errc_name(e.code()));
  }
  return attempt;
}

RoiResult combine_attempts(const Fqdn& fqdn, const RegistrableDomain& domain, const PolicyAttempt& policy,
                           const std::optional<WhoisAttempt>& whois) {
  RoiResult r;
  r.input_fqdn = fqdn.text();
  r.registrable_domain = domain.text;
  for (const auto& f : policy.failures) r.flags.insert(f);
  if (policy.cross_sld_redirect) r.flags.insert({FlagKind::CrossSldRedirect, ""});

  if (policy.organization && !policy.cross_sld_redirect) {
    r.method = Method::PolicyAnalysis;
    r.organization = policy.organization;
    r.policy_evidence = policy.evidence;
    return r;
  }
  if (!whois) {
    r.flags.insert({FlagKind::WhoisFailed, "NotQueried"});
    return r;
  }
  if (whois->failure) {
    r.flags.insert({FlagKind::WhoisFailed, *whois->failure});
    return r;
  }
  const auto& reg = *whois->registrant;
  switch (reg.kind) {
    case RegistrantKind::Org:
      r.method = Method::Whois;
      r.organization = reg.value;
      r.whois_evidence = whois->evidence;
      break;
    case RegistrantKind::Redacted:
      r.flags.insert({FlagKind::WhoisRedacted, ""});
      break;
    case RegistrantKind::Absent:
    case RegistrantKind::Empty:
      r.flags.insert({FlagKind::WhoisFailed, std::string(registrant_kind_name(reg.kind))});
      break;
  }
  return r;
}

RoiResult Resolver::resolve_registrable(const Fqdn& fqdn, const RegistrableDomain& domain) const {
  BudgetTracker budget(services_.fetcher.policy().max_requests_per_domain);
  const auto policy = attempt_policy(domain, budget);
  std::optional<WhoisAttempt> whois;
  if (!policy.organization || policy.cross_sld_redirect) whois = attempt_whois(domain);
  auto result = combine_attempts(fqdn, domain, policy, whois);
  if (services_.inspect_certificate) {
    try {
      result.certificate_note = fetch_leaf_certificate(fqdn, services_.fetcher.store(),
                                                       services_.fetcher.network().get(),
                                                       services_.fetcher.policy().timeouts());
    } catch (const Error&) {
    }
  }
  return result;
}

RoiResult Resolver::resolve(const Fqdn& fqdn) const {
  RegistrableDomain domain;
  try {
    domain = registrable_domain(fqdn, services_.rules);
  } catch (const Error& e) {
    throw Error(Errc::InvalidDomain, e.what());
  }
  return resolve_registrable(fqdn, domain);
}

RoiResult Resolver::resolve(std::string_view fqdn) const {
  Fqdn parsed;
  try {
    parsed = parse_fqdn(fqdn);
  } catch (const Error& e) {
    throw Error(Errc::InvalidDomain, e.what());
  }
  return resolve(parsed);
}

std::vector<RoiResult> Resolver::resolve_batch(std::span<const std::string> fqdns, std::size_t parallelism) const {
  if (parallelism == 0) throw Error(Errc::InvalidArgument, "parallelism must be at least 1");
  std::vector<RoiResult> results(fqdns.size());
  std::mutex memo_mutex;
  std::map<std::string, std::shared_future<RoiResult>> memo;
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= fqdns.size()) return;
      Fqdn fqdn;
      RegistrableDomain domain;
      try {
        fqdn = parse_fqdn(fqdns[i]);
        domain = registrable_domain(fqdn, services_.rules);
      } catch (const Error&) {
        RoiResult bad;
        bad.input_fqdn = std::string(text::trim(fqdns[i]));
        bad.flags.insert({FlagKind::InvalidDomain, ""});
        results[i] = std::move(bad);
        continue;
      }
      std::shared_future<RoiResult> future;
      std::optional<std::promise<RoiResult>> owner;
      {
        std::lock_guard lock(memo_mutex);
        if (auto it = memo.find(domain.text); it != memo.end()) {
          future = it->second;
        } else {
          owner.emplace();
          future = owner->get_future().share();
          memo.emplace(domain.text, future);
        }
      }
      if (owner) {
        try {
          owner->set_value(resolve_registrable(fqdn, domain));
        } catch (...) {
          owner->set_exception(std::current_exception());
        }
      }
      RoiResult r = future.get();
      r.input_fqdn = fqdn.text();
      results[i] = std::move(r);
    }
  };

  const std::size_t workers = std::min(parallelism, std::max<std::size_t>(1, fqdns.size()));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return results;
}

std::string to_record_line(const RoiResult& r) {
  nlohmann::ordered_json j;
  j["fqdn"] = r.input_fqdn;
  j["registrable_domain"] = r.registrable_domain;
  j["organization"] = r.organization ? nlohmann::ordered_json(*r.organization) : nlohmann::ordered_json(nullptr);
  j["method"] = method_name(r.method);
  auto flags = nlohmann::ordered_json::array();
  for (const auto& f : r.flags) flags.push_back(f.str());
  j["flags"] = std::move(flags);
  const auto locator = r.evidence_locator();
  j["evidence"] = locator.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(locator);
  if (r.certificate_note) {
    const auto& c = *r.certificate_note;
    j["certificate"] = {{"subject_cn", c.subject_common_name},
                        {"subject_o", c.subject_organization ? nlohmann::ordered_json(*c.subject_organization)
                                                             : nlohmann::ordered_json(nullptr)},
                        {"issuer", c.issuer_name}};
  }
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

RoiResult parse_record_line(std::string_view line) {
  auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(Errc::FormatError, "result line is not a JSON object");
  RoiResult r;
  const char* key = j.contains("fqdn") ? "fqdn" : "domain";
  if (!j.contains(key) || !j[key].is_string()) throw Error(Errc::FormatError, "result line lacks fqdn");
  r.input_fqdn = text::lower(text::trim(j[key].get<std::string>()));
  if (auto it = j.find("registrable_domain"); it != j.end() && it->is_string()) r.registrable_domain = *it;
  if (auto it = j.find("organization"); it != j.end() && it->is_string()) {
    const auto org = it->get<std::string>();
    if (!text::trim(org).empty()) r.organization = org;
  }
  if (auto it = j.find("method"); it != j.end() && it->is_string()) {
    auto m = method_from_name(it->get<std::string>());
    if (!m) throw Error(Errc::FormatError, "unknown method '" + it->get<std::string>() + "'");
    r.method = *m;
  } else {
    r.method = r.organization ? Method::PolicyAnalysis : Method::Unidentified;
  }
  if (auto it = j.find("flags"); it != j.end() && it->is_array()) {
    for (const auto& f : *it) {
      if (!f.is_string()) continue;
      if (auto flag = ResultFlag::parse(f.get<std::string>())) r.flags.insert(*flag);
    }
  }
  if (auto it = j.find("evidence"); it != j.end() && it->is_string()) {
    const auto ev = it->get<std::string>();
    if (ev.starts_with("policy:")) {
      const auto hash = ev.rfind("#paragraph=");
      PolicyEvidence pe;
      pe.url = ev.substr(7, hash == std::string::npos ? std::string::npos : hash - 7);
      if (hash != std::string::npos) pe.paragraph_index = std::stoul(ev.substr(hash + 11));
      r.policy_evidence = pe;
    } else if (ev.starts_with("whois:")) {
      r.whois_evidence = WhoisEvidence{ev.substr(6), 0};
    }
  }
  return r;
}

}  // namespace orgtrace
