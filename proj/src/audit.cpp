#include "orgtrace/audit.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "orgtrace/error.hpp"
#include "orgtrace/resolver.hpp"
#include "orgtrace/text.hpp"

namespace orgtrace {

namespace {

std::string org_key(std::string_view org) {
  try {
    return normalize_org(org).text;
  } catch (const Error&) {
    return text::collapse_whitespace(text::lower(org));
  }
}

std::vector<std::string> tokens_of(std::string_view key) {
  std::vector<std::string> out;
  for (auto t : text::split(key, ' ')) {
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

bool starts_with_tokens(const std::vector<std::string>& hay, const std::vector<std::string>& prefix) {
  return !prefix.empty() && prefix.size() <= hay.size() && std::equal(prefix.begin(), prefix.end(), hay.begin());
}

bool contains_tokens(const std::vector<std::string>& hay, const std::vector<std::string>& needle) {
  if (needle.empty() || needle.size() > hay.size()) return false;
  for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i) {
    if (std::equal(needle.begin(), needle.end(), hay.begin() + static_cast<long>(i))) return true;
  }
  return false;
}

// A received head company counts as disclosed when a disclosed head names it,
// equal or as a contiguous token run in either direction.
bool covered(const std::string& received, const std::set<std::string>& disclosed) {
  if (disclosed.contains(received)) return true;
  const auto r = tokens_of(received);
  for (const auto& d : disclosed) {
    const auto t = tokens_of(d);
    if (contains_tokens(r, t) || contains_tokens(t, r)) return true;
  }
  return false;
}

}  // namespace

IngestResult ingest_flows(std::istream& in, bool strict) {
  IngestResult out;
  std::string line;
  std::size_t lineno = 0;
  auto reject = [&](const std::string& why) {
    const auto msg = "line " + std::to_string(lineno) + ": " + why;
    if (strict) throw Error(Errc::FormatError, msg);
    out.warnings.push_back(msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto cols = text::split(line, '\t');
    if (cols.size() != 4) {
      reject("expected 4 tab-separated fields");
      continue;
    }
    FlowRecord r;
    r.app_id = std::string(text::trim(cols[0]));
    if (r.app_id.empty()) {
      reject("empty app id");
      continue;
    }
    try {
      r.destination = parse_fqdn(cols[1]);
    } catch (const Error& e) {
      reject(std::string("bad destination: ") + e.what());
      continue;
    }
    const auto transport = text::lower(text::trim(cols[2]));
    if (transport == "https") {
      r.transport = FlowTransport::Https;
    } else if (transport == "http") {
      r.transport = FlowTransport::Http;
    } else {
      reject("transport must be https or http");
      continue;
    }
    for (auto tag : text::split(cols[3], ',')) {
      auto tt = text::trim(tag);
      if (!tt.empty()) r.data_types.emplace_back(tt);
    }
    if (r.data_types.empty()) {
      reject("no data types");
      continue;
    }
    out.records.push_back(std::move(r));
  }
  return out;
}

std::vector<OrgRelation> parse_relations(std::istream& in) {
  std::vector<OrgRelation> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto cols = text::split(line, '\t');
    if (cols.size() != 2 || text::trim(cols[0]).empty() || text::trim(cols[1]).empty()) {
      throw Error(Errc::FormatError, "relations line " + std::to_string(lineno) + ": expected child<TAB>parent");
    }
    out.push_back({std::string(text::trim(cols[0])), std::string(text::trim(cols[1]))});
  }
  return out;
}

std::string OrgHierarchy::key_of(std::string_view org) const { return org_key(org); }

OrgHierarchy::OrgHierarchy(std::span<const OrgRelation> relations) {
  for (const auto& rel : relations) {
    const auto child = key_of(rel.child);
    const auto parent = key_of(rel.parent);
    if (child == parent) throw Error(Errc::FormatError, "organization '" + rel.child + "' is its own parent");
    auto [it, inserted] = parents_.emplace(child, Edge{parent, std::string(text::trim(rel.parent))});
    if (!inserted && it->second.parent_key != parent) {
      throw Error(Errc::AmbiguousParent, "'" + rel.child + "' has parents '" + it->second.parent_display + "' and '" +
                                             rel.parent + "'");
    }
  }
}

std::string OrgHierarchy::head(std::string_view org) const {
  std::string display(text::trim(org));
  std::string key = key_of(org);
  std::unordered_set<std::string> seen{key};
  while (true) {
    auto it = parents_.find(key);
    if (it == parents_.end()) return display;
    key = it->second.parent_key;
    display = it->second.parent_display;
    if (!seen.insert(key).second) throw Error(Errc::CycleDetected, "relation cycle through '" + display + "'");
  }
}

std::string OrgHierarchy::head_key(std::string_view org) const { return key_of(head(org)); }

std::string rollup_head(std::string_view org, std::span<const OrgRelation> relations) {
  return OrgHierarchy(relations).head(org);
}

RecipientMap recipients_per_app(std::span<const FlowRecord> flows,
                                const std::map<std::string, RoiResult>& resolutions) {
  RecipientMap out;
  for (const auto& f : flows) {
    ++out.flows_total;
    auto it = resolutions.find(f.destination.text());
    if (it == resolutions.end()) throw Error(Errc::MissingResolution, "no resolution for " + f.destination.text());
    auto& orgs = out.per_app[f.app_id];
    if (it->second.organization) {
      orgs.insert(*it->second.organization);
      ++out.flows_resolved;
    } else {
      ++out.flows_unidentified;
    }
  }
  return out;
}

std::set<std::string> disclosed_entities(const PolicyText& policy, const EntityRules& rules) {
  std::vector<std::vector<std::string>> known;
  for (const auto& k : rules.known_orgs) {
    auto t = tokens_of(k);
    if (t.size() > 1 && t.front() == "the") t.erase(t.begin());
    known.push_back(std::move(t));
  }
  std::set<std::string> out;
  for (const auto& paragraph : policy.paragraphs) {
    for (const auto& c : generate_candidates(paragraph, rules)) {
      if (is_excluded_candidate(c.text, rules)) continue;
      const auto key = org_key(c.text);
      const auto toks = tokens_of(key);
      bool named = false;
      for (const auto& k : known) {
        if (starts_with_tokens(toks, k)) {
          out.insert(text::join(k, " "));
          named = true;
        }
      }
      if (!named && c.legal_designator) out.insert(key);
    }
  }
  return out;
}

std::string_view disclosure_status_name(DisclosureStatus status) {
  switch (status) {
    case DisclosureStatus::Full: return "full";
    case DisclosureStatus::Partial: return "partial";
    case DisclosureStatus::None: return "none";
  }
  return "none";
}

DisclosureStatus classify_disclosure(const std::set<std::string>& received, const std::set<std::string>& disclosed,
                                     const OrgHierarchy& hierarchy) {
  std::set<std::string> r;
  std::set<std::string> d;
  for (const auto& x : received) r.insert(hierarchy.head_key(x));
  for (const auto& x : disclosed) d.insert(hierarchy.head_key(x));
  std::size_t hits = 0;
  for (const auto& x : r) hits += covered(x, d) ? 1 : 0;
  if (hits == r.size()) return DisclosureStatus::Full;
  if (hits == 0) return DisclosureStatus::None;
  return DisclosureStatus::Partial;
}

AuditReport build_report(std::span<const FlowRecord> flows, const std::map<std::string, RoiResult>& resolutions,
                         const std::map<std::string, PolicyText>& policies, const OrgHierarchy& hierarchy,
                         const EntityRules& rules, const SuffixRules& suffixes) {
  AuditReport report;
  const auto recipients = recipients_per_app(flows, resolutions);
  report.flows_total = recipients.flows_total;
  report.flows_resolved = recipients.flows_resolved;

  std::map<std::string, std::set<std::string>> types_by_app;
  std::map<std::string, std::set<std::string>> dests_by_app;
  for (const auto& f : flows) {
    for (const auto& t : f.data_types) types_by_app[t].insert(f.app_id);
    dests_by_app[registrable_key(f.destination.text(), suffixes)].insert(f.app_id);
  }
  for (const auto& [t, apps] : types_by_app) report.apps_per_data_type[t] = apps.size();
  for (const auto& [d, apps] : dests_by_app) report.apps_per_destination[d] = apps.size();

  for (const auto& [app, orgs] : recipients.per_app) {
    std::set<std::string> heads;
    for (const auto& org : orgs) {
      const auto display = hierarchy.head(org);
      const auto key = org_key(display);
      report.head_display.emplace(key, display);
      heads.insert(key);
    }
    for (const auto& h : heads) ++report.apps_per_head[h];

    auto policy = policies.find(app);
    if (policy == policies.end()) {
      report.no_policy_apps.push_back(app);
      continue;
    }
    AppAudit audit;
    audit.app_id = app;
    audit.received = heads;
    for (const auto& d : disclosed_entities(policy->second, rules)) audit.disclosed.insert(hierarchy.head_key(d));
    audit.status = classify_disclosure(audit.received, audit.disclosed, OrgHierarchy{});
    switch (audit.status) {
      case DisclosureStatus::Full: ++report.full; break;
      case DisclosureStatus::Partial: ++report.partial; break;
      case DisclosureStatus::None: ++report.none; break;
    }
    for (const auto& h : audit.received) {
      auto& count = report.per_org[h];
      if (covered(h, audit.disclosed)) {
        ++count.disclosed;
      } else {
        ++count.undisclosed;
      }
    }
    report.apps.push_back(std::move(audit));
  }
  return report;
}

std::string report_json(const AuditReport& r) {
  nlohmann::ordered_json j;
  j["flows_total"] = r.flows_total;
  j["flows_resolved"] = r.flows_resolved;
  j["status_counts"] = {{"full", r.full}, {"partial", r.partial}, {"none", r.none}};
  j["no_policy_apps"] = r.no_policy_apps;
  auto apps = nlohmann::ordered_json::array();
  for (const auto& a : r.apps) {
    apps.push_back({{"app_id", a.app_id},
                    {"status", disclosure_status_name(a.status)},
                    {"received", a.received},
                    {"disclosed", a.disclosed}});
  }
  j["apps"] = std::move(apps);
  j["apps_per_data_type"] = r.apps_per_data_type;
  j["apps_per_destination"] = r.apps_per_destination;
  auto heads = nlohmann::ordered_json::object();
  for (const auto& [k, n] : r.apps_per_head) {
    auto disp = r.head_display.find(k);
    heads[disp == r.head_display.end() ? k : disp->second] = n;
  }
  j["apps_per_head"] = std::move(heads);
  auto orgs = nlohmann::ordered_json::object();
  for (const auto& [k, c] : r.per_org) {
    auto disp = r.head_display.find(k);
    orgs[disp == r.head_display.end() ? k : disp->second] = {{"disclosed", c.disclosed}, {"undisclosed", c.undisclosed}};
  }
  j["per_org"] = std::move(orgs);
  return j.dump(2);
}

std::string render_report(const AuditReport& r) {
  std::ostringstream out;
  char buf[256];
  const double coverage = r.flows_total ? 100.0 * static_cast<double>(r.flows_resolved) / static_cast<double>(r.flows_total) : 0.0;
  std::snprintf(buf, sizeof buf, "flows: %zu, attributed: %zu (%.2f%%)\n", r.flows_total, r.flows_resolved, coverage);
  out << buf;
  std::snprintf(buf, sizeof buf, "disclosure: full %zu, partial %zu, none %zu, no policy %zu\n", r.full, r.partial,
                r.none, r.no_policy_apps.size());
  out << buf;

  auto table = [&](const char* title, const std::map<std::string, std::size_t>& m, bool display) {
    std::vector<std::pair<std::string, std::size_t>> rows(m.begin(), m.end());
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    out << "\n" << title << "\n";
    for (const auto& [k, n] : rows) {
      std::string name = k;
      if (display) {
        if (auto it = r.head_display.find(k); it != r.head_display.end()) name = it->second;
      }
      std::snprintf(buf, sizeof buf, "  %-40s %6zu\n", name.c_str(), n);
      out << buf;
    }
  };
  out << "\napps\n";
  for (const auto& a : r.apps) {
    std::snprintf(buf, sizeof buf, "  %-40s %-8s received %zu, disclosed %zu\n", a.app_id.c_str(),
                  std::string(disclosure_status_name(a.status)).c_str(), a.received.size(), a.disclosed.size());
    out << buf;
  }
  for (const auto& app : r.no_policy_apps) {
    std::snprintf(buf, sizeof buf, "  %-40s no policy\n", app.c_str());
    out << buf;
  }
  table("apps per data type", r.apps_per_data_type, false);
  table("apps per destination domain", r.apps_per_destination, false);
  table("apps per head company", r.apps_per_head, true);

  out << "\nthird-party disclosure per organization\n";
  std::snprintf(buf, sizeof buf, "  %-40s %9s %11s\n", "organization", "disclosed", "undisclosed");
  out << buf;
  for (const auto& [k, c] : r.per_org) {
    auto it = r.head_display.find(k);
    std::snprintf(buf, sizeof buf, "  %-40s %9zu %11zu\n", (it == r.head_display.end() ? k : it->second).c_str(),
                  c.disclosed, c.undisclosed);
    out << buf;
  }
  return out.str();
}

}  // namespace orgtrace
