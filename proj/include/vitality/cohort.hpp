#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vitality/indicators.hpp"
#include "vitality/model.hpp"

namespace vitality {

inline double profile_min(const IVProfile& p) {
  if (p.empty()) throw std::invalid_argument("profile_min: empty profile");
  return std::min_element(p.points.begin(), p.points.end(),
                          [](const IVPoint& a, const IVPoint& b) { return a.value < b.value; })
      ->value;
}

/// True iff every point value is strictly above `threshold`.
inline bool all_above(const IVProfile& p, double threshold) {
  if (p.empty()) throw std::invalid_argument("all_above: empty profile");
  return std::all_of(p.points.begin(), p.points.end(),
                     [&](const IVPoint& pt) { return pt.value > threshold; });
}

/// Max minus min over the points observed in [call_year - k + 1, call_year].
/// Undefined (nullopt) unless all k years of that span carry a point.
inline std::optional<double> profile_fluctuation(const IVProfile& p, Year call_year, int k = 5) {
  if (k < 2) throw std::invalid_argument("profile_fluctuation: k must be at least 2");
  std::vector<double> values;
  for (const auto& pt : p.points)
    if (pt.observation_year > call_year - k && pt.observation_year <= call_year) values.push_back(pt.value);
  if (static_cast<int>(values.size()) != k) return std::nullopt;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

struct CandidateProfile {
  std::string candidate_id;
  bool selected = false;
  Year call_year = 0;
  std::optional<Year> career_start_year;
  IVProfile profile;
  YearlyCitingCounts yearly_counts;
};

struct RangeStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  std::size_t count = 0;

  static std::optional<RangeStats> of(std::vector<double> xs) {
    if (xs.empty()) return std::nullopt;
    // Sorted so the floating-point sum does not depend on input order.
    std::sort(xs.begin(), xs.end());
    RangeStats r{xs.front(), xs.front(), 0.0, xs.size()};
    double sum = 0.0;
    for (double x : xs) {
      r.min = std::min(r.min, x);
      r.max = std::max(r.max, x);
      sum += x;
    }
    // Clamped so rounding in the sum cannot push the mean outside [min, max].
    r.mean = std::clamp(sum / static_cast<double>(xs.size()), r.min, r.max);
    return r;
  }
};

/// Per-group summary. Aggregates with no contributing candidate are nullopt.
struct CohortStats {
  std::size_t group_size = 0;
  std::optional<RangeStats> min_iv_range;
  std::optional<double> share_all_above_one;
  std::optional<RangeStats> fluctuation_range;
  std::optional<RangeStats> citing_per_year_last5;
  std::optional<RangeStats> citing_per_year_since_start;
};

struct CohortSummary {
  CohortStats selected;
  CohortStats not_selected;
};

/// Mean yearly citing count over [from, to] inclusive.
inline double mean_citing_per_year(const YearlyCitingCounts& counts, Year from, Year to) {
  if (from > to) throw std::invalid_argument("mean_citing_per_year: empty year span");
  std::int64_t sum = 0;
  for (Year y = from; y <= to; ++y) sum += counts.at(y);
  return static_cast<double>(sum) / (to - from + 1);
}

inline constexpr int kFluctuationYears = 5;

namespace detail {

inline CohortStats summarize_group(const std::vector<const CandidateProfile*>& group) {
  CohortStats stats;
  stats.group_size = group.size();
  std::vector<double> minima, fluctuations, last5, since_start;
  std::size_t above = 0;
  for (const auto* c : group) {
    minima.push_back(profile_min(c->profile));
    if (all_above(c->profile, 1.0)) ++above;
    if (auto f = profile_fluctuation(c->profile, c->call_year, kFluctuationYears)) fluctuations.push_back(*f);
    last5.push_back(mean_citing_per_year(c->yearly_counts, c->call_year - kFluctuationYears + 1, c->call_year));
    if (c->career_start_year && *c->career_start_year <= c->call_year)
      since_start.push_back(mean_citing_per_year(c->yearly_counts, *c->career_start_year, c->call_year));
  }
  stats.min_iv_range = RangeStats::of(minima);
  if (!group.empty()) stats.share_all_above_one = static_cast<double>(above) / static_cast<double>(group.size());
  stats.fluctuation_range = RangeStats::of(fluctuations);
  stats.citing_per_year_last5 = RangeStats::of(last5);
  stats.citing_per_year_since_start = RangeStats::of(since_start);
  return stats;
}

}  // namespace detail

/// Summary statistics for selected vs non-selected candidates.
///
/// Fluctuation uses the 5 observation years up to the call and is left out
/// for candidates without all 5 values. The since-start citing average only
/// counts candidates with a known career start year. Group aggregates are
/// independent of candidate order.
inline CohortSummary cohort_summary(const std::vector<CandidateProfile>& candidates) {
  if (candidates.empty()) throw std::invalid_argument("cohort_summary: no candidates");
  std::vector<const CandidateProfile*> selected, not_selected;
  for (const auto& c : candidates) {
    if (c.profile.empty())
      throw std::invalid_argument("cohort_summary: candidate '" + c.candidate_id + "' has an empty profile");
    for (const auto& pt : c.profile.points)
      if (pt.observation_year > c.call_year)
        throw std::invalid_argument("cohort_summary: candidate '" + c.candidate_id +
                                    "' has profile points after the call year");
    (c.selected ? selected : not_selected).push_back(&c);
  }
  return {detail::summarize_group(selected), detail::summarize_group(not_selected)};
}

}  // namespace vitality
