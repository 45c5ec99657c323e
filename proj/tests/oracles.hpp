#pragma once

// Brute-force references shared by the unit and acceptance suites.

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "orgtrace/audit.hpp"

namespace testing {

struct DisclosureInstance {
  std::set<std::string> received;
  std::set<std::string> disclosed;
  std::vector<orgtrace::OrgRelation> relations;
};

inline const std::vector<std::string>& oracle_names() {
  static const std::vector<std::string> names = {"Alpha", "Bravo", "Charlie", "Delta",  "Echo",
                                                 "Foxtrot", "Golf", "Hotel",  "India", "Juliett"};
  return names;
}

// Parents always come earlier in the name list, so the relations form a forest.
// Names are single distinct tokens; a designator suffix is added at random so
// that both sides go through normalization.
inline DisclosureInstance random_disclosure_instance(std::mt19937_64& rng) {
  const auto& names = oracle_names();
  static const std::vector<std::string> tails = {"", " Inc.", " Ltd", " GmbH", ", LLC"};
  std::uniform_int_distribution<std::size_t> pick(0, names.size() - 1);
  std::uniform_int_distribution<std::size_t> tail(0, tails.size() - 1);
  std::uniform_int_distribution<int> count(0, 6);
  std::bernoulli_distribution has_parent(0.4);
  DisclosureInstance inst;
  for (std::size_t i = 1; i < names.size(); ++i) {
    if (!has_parent(rng)) continue;
    std::uniform_int_distribution<std::size_t> parent(0, i - 1);
    inst.relations.push_back({names[i] + tails[tail(rng)], names[parent(rng)] + tails[tail(rng)]});
  }
  for (int k = count(rng); k > 0; --k) inst.received.insert(names[pick(rng)] + tails[tail(rng)]);
  for (int k = count(rng); k > 0; --k) inst.disclosed.insert(names[pick(rng)] + tails[tail(rng)]);
  return inst;
}

// Bare first token, lowercased: "Charlie GmbH" -> "charlie".
inline std::string oracle_base(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == ' ' || c == ',') break;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

inline std::string oracle_head(const std::string& org, const std::vector<orgtrace::OrgRelation>& relations) {
  std::map<std::string, std::string> parent;
  for (const auto& r : relations) parent[oracle_base(r.child)] = oracle_base(r.parent);
  std::string cur = oracle_base(org);
  for (std::size_t steps = 0; parent.count(cur) && steps <= relations.size(); ++steps) cur = parent[cur];
  return cur;
}

inline orgtrace::DisclosureStatus oracle_disclosure(const DisclosureInstance& inst) {
  std::set<std::string> r, d;
  for (const auto& x : inst.received) r.insert(oracle_head(x, inst.relations));
  for (const auto& x : inst.disclosed) d.insert(oracle_head(x, inst.relations));
  std::size_t common = 0;
  for (const auto& x : r) common += d.count(x);
  if (common == r.size()) return orgtrace::DisclosureStatus::Full;
  if (common == 0) return orgtrace::DisclosureStatus::None;
  return orgtrace::DisclosureStatus::Partial;
}

}  // namespace testing
