#pragma once

// Third-party disclosure audit over intercepted personal-data flows.

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "orgtrace/controller.hpp"
#include "orgtrace/domain.hpp"
#include "orgtrace/policy_text.hpp"

namespace orgtrace {

struct RoiResult;

enum class FlowTransport { Https, Http };

struct FlowRecord {
  std::string app_id;
  Fqdn destination;
  std::vector<std::string> data_types;
  FlowTransport transport = FlowTransport::Https;
};

struct IngestResult {
  std::vector<FlowRecord> records;
  std::vector<std::string> warnings;  // "line N: ..."
};

// app_id<TAB>destination_fqdn<TAB>transport<TAB>comma-separated data types.
// Strict mode throws Error{FormatError} on the first bad line.
IngestResult ingest_flows(std::istream& in, bool strict = false);

struct OrgRelation {
  std::string child;
  std::string parent;
};

// child<TAB>parent per line. Throws Error{FormatError}.
std::vector<OrgRelation> parse_relations(std::istream& in);

// Parent/subsidiary forest keyed by normalized organization names.
class OrgHierarchy {
 public:
  OrgHierarchy() = default;
  // Throws Error{AmbiguousParent} or Error{FormatError} (child == parent).
  explicit OrgHierarchy(std::span<const OrgRelation> relations);

  // Head company display name. Throws Error{CycleDetected}.
  std::string head(std::string_view org) const;
  // Normalized head name (the key used for matching).
  std::string head_key(std::string_view org) const;

 private:
  struct Edge {
    std::string parent_key;
    std::string parent_display;
  };
  std::string key_of(std::string_view org) const;
  std::unordered_map<std::string, Edge> parents_;
};

std::string rollup_head(std::string_view org, std::span<const OrgRelation> relations);

struct RecipientMap {
  std::map<std::string, std::set<std::string>> per_app;  // app -> organizations
  std::size_t flows_total = 0;
  std::size_t flows_resolved = 0;
  std::size_t flows_unidentified = 0;
};

// Resolutions keyed by destination fqdn text. Throws Error{MissingResolution}.
RecipientMap recipients_per_app(std::span<const FlowRecord> flows,
                                const std::map<std::string, RoiResult>& resolutions);

// Organizations named anywhere in a policy: candidates ending with a legal
// designator or naming a known organization, normalized and deduplicated.
std::set<std::string> disclosed_entities(const PolicyText& policy, const EntityRules& rules);

enum class DisclosureStatus { Full, Partial, None };
std::string_view disclosure_status_name(DisclosureStatus status);

// Compared at head-company level. An app receiving nothing is Full.
DisclosureStatus classify_disclosure(const std::set<std::string>& received, const std::set<std::string>& disclosed,
                                     const OrgHierarchy& hierarchy);

struct AppAudit {
  std::string app_id;
  std::set<std::string> received;   // head keys
  std::set<std::string> disclosed;  // head keys
  DisclosureStatus status = DisclosureStatus::Full;
};

struct OrgDisclosureCount {
  std::size_t disclosed = 0;
  std::size_t undisclosed = 0;
};

struct AuditReport {
  std::vector<AppAudit> apps;              // apps with flows and a policy
  std::vector<std::string> no_policy_apps;  // apps with flows but no policy
  std::size_t full = 0;
  std::size_t partial = 0;
  std::size_t none = 0;
  std::map<std::string, std::size_t> apps_per_data_type;
  std::map<std::string, std::size_t> apps_per_destination;  // registrable domain
  std::map<std::string, std::size_t> apps_per_head;
  std::map<std::string, OrgDisclosureCount> per_org;  // head key
  std::map<std::string, std::string> head_display;    // head key -> display name
  std::size_t flows_total = 0;
  std::size_t flows_resolved = 0;
};

// `policies` maps app_id to its policy text.
AuditReport build_report(std::span<const FlowRecord> flows, const std::map<std::string, RoiResult>& resolutions,
                         const std::map<std::string, PolicyText>& policies, const OrgHierarchy& hierarchy,
                         const EntityRules& rules, const SuffixRules& suffixes);

std::string report_json(const AuditReport& report);
std::string render_report(const AuditReport& report);

}  // namespace orgtrace
