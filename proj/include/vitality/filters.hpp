#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "vitality/error.hpp"
#include "vitality/model.hpp"

namespace vitality {

/// Declarative exclusion of citing records. Active clauses combine by
/// conjunction: a record survives only if it passes every one of them.
struct FilterSet {
  bool exclude_self_citations = false;
  // Drop records whose cited set is exactly {this publication}.
  std::optional<PublicationId> exclude_citing_only;
  std::optional<std::set<std::string>> citing_doc_types;
  // A record passes if at least one of the publications it cites has an allowed type.
  std::optional<std::set<std::string>> cited_doc_types;
  std::set<RecordId> exclude_ids;

  bool empty() const {
    return !exclude_self_citations && !exclude_citing_only && !citing_doc_types &&
           !cited_doc_types && exclude_ids.empty();
  }

  friend bool operator==(const FilterSet&, const FilterSet&) = default;
};

inline bool is_self_citing(const CitingRecord& rec, const TargetAuthor& target) {
  return std::any_of(rec.authors.begin(), rec.authors.end(),
                     [&](const AuthorKey& a) { return target.name_variants.contains(a); });
}

inline bool cites_only(const CitingRecord& rec, const PublicationId& pub_id) {
  return rec.cited_target_pub_ids.size() == 1 && *rec.cited_target_pub_ids.begin() == pub_id;
}

/// Record ids surviving every active clause of `fs`, in dataset order.
inline std::vector<RecordId> apply_filters(const CitationDataset& ds, const FilterSet& fs) {
  if (fs.exclude_citing_only && !ds.find_publication(*fs.exclude_citing_only))
    throw DataError("filter cites-only references unknown publication id '" +
                    *fs.exclude_citing_only + "'");

  std::unordered_map<std::string_view, const Publication*> pubs;
  if (fs.cited_doc_types)
    for (const auto& p : ds.publications) pubs.emplace(p.id, &p);

  auto passes = [&](const CitingRecord& r) {
    if (fs.exclude_ids.contains(r.id)) return false;
    if (fs.exclude_self_citations && is_self_citing(r, ds.target)) return false;
    if (fs.exclude_citing_only && cites_only(r, *fs.exclude_citing_only)) return false;
    if (fs.citing_doc_types && !fs.citing_doc_types->contains(r.doc_type)) return false;
    if (fs.cited_doc_types) {
      const bool any_allowed = std::any_of(
          r.cited_target_pub_ids.begin(), r.cited_target_pub_ids.end(), [&](const PublicationId& id) {
            auto it = pubs.find(id);
            return it != pubs.end() && fs.cited_doc_types->contains(it->second->doc_type);
          });
      if (!any_allowed) return false;
    }
    return true;
  };

  std::vector<RecordId> out;
  for (const auto& r : ds.citing_records)
    if (passes(r)) out.push_back(r.id);
  return out;
}

/// Invokes `fn` on every record that survives `fs`, once per distinct record id.
template <typename Fn>
void for_each_surviving(const CitationDataset& ds, const FilterSet& fs, Fn&& fn) {
  const auto ids = apply_filters(ds, fs);
  const std::set<std::string_view> keep(ids.begin(), ids.end());
  std::set<std::string_view> seen;
  for (const auto& r : ds.citing_records)
    if (keep.contains(r.id) && seen.insert(r.id).second) fn(r);
}

/// Number of distinct surviving records citing each publication. Every dataset
/// publication appears in the result, uncited ones with 0.
inline std::map<PublicationId, std::int64_t> citation_counts_per_publication(
    const CitationDataset& ds, const FilterSet& fs = {}) {
  std::map<PublicationId, std::int64_t> counts;
  for (const auto& p : ds.publications) counts.emplace(p.id, 0);
  for_each_surviving(ds, fs, [&](const CitingRecord& r) {
    for (const auto& pid : r.cited_target_pub_ids) ++counts[pid];
  });
  return counts;
}

/// Distinct surviving citing records per year. A record citing several target
/// publications contributes 1 to its own publication year.
inline YearlyCitingCounts yearly_citing_counts(const CitationDataset& ds, const FilterSet& fs = {}) {
  YearlyCitingCounts counts;
  for_each_surviving(ds, fs, [&](const CitingRecord& r) { counts.add(r.year); });
  return counts;
}

/// The most cited publication over all citing records. Ties go to the older
/// publication, then to the lexicographically smaller id.
inline PublicationId most_cited_publication(const CitationDataset& ds) {
  if (ds.citing_records.empty())
    throw std::invalid_argument("most_cited_publication: dataset has no citing records");
  const auto counts = citation_counts_per_publication(ds);
  const Publication* best = nullptr;
  std::int64_t best_count = -1;
  for (const auto& p : ds.publications) {
    const auto c = counts.at(p.id);
    if (!best || std::tuple(-c, p.year, std::string_view(p.id)) <
                     std::tuple(-best_count, best->year, std::string_view(best->id))) {
      best = &p;
      best_count = c;
    }
  }
  if (!best) throw std::invalid_argument("most_cited_publication: dataset has no publications");
  return best->id;
}

}  // namespace vitality
