#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <optional>
#include <ranges>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "vitality/model.hpp"

namespace vitality {

namespace detail {

// H_n - 1 = sum_{i=2..n} 1/i. Summed directly so the normalizer does not
// lose the leading term to cancellation.
inline double harmonic_tail(int n) {
  double sum = 0.0;
  for (int i = 2; i <= n; ++i) sum += 1.0 / i;
  return sum;
}

}  // namespace detail

/// Largest value Impact Vitality can take on an n-year window: all citing
/// mass in the observation year gives (n - 1) / (H_n - 1).
inline double iv_upper_bound(int n) {
  if (n < 2) throw std::invalid_argument("iv_upper_bound: window length must be at least 2");
  return (n - 1) / detail::harmonic_tail(n);
}

/// Impact Vitality of a window of yearly citing-publication counts.
///
/// `counts` is ordered newest first: counts[0] is the observation year (age 1,
/// weight 1) and counts[n-1] the oldest year (age n, weight 1/n). The weighted
/// share of citing documents is rescaled so that a constant series yields 1,
/// a series concentrated in the oldest year yields 0 and one concentrated in
/// the observation year yields iv_upper_bound(n). Scaling every count by the
/// same positive factor leaves the value unchanged.
///
/// Throws std::invalid_argument for n < 2, negative counts, or an all-zero window.
template <std::ranges::input_range R>
  requires std::is_arithmetic_v<std::ranges::range_value_t<R>>
double impact_vitality(const R& counts) {
  int n = 0;
  double total = 0.0;
  double scaled = 0.0;  // sum of count * n / age, computed after n is known
  std::vector<double> values;
  for (const auto& c : counts) {
    if (c < 0) throw std::invalid_argument("impact_vitality: counts must be non-negative");
    values.push_back(static_cast<double>(c));
    ++n;
  }
  if (n < 2) throw std::invalid_argument("impact_vitality: window length must be at least 2");
  for (int i = 0; i < n; ++i) {
    total += values[i];
    // n / age is exactly 1 for the oldest year, so all-oldest mass lands on 0 exactly.
    scaled += values[i] * (static_cast<double>(n) / (i + 1));
  }
  if (!(total > 0.0))
    throw std::invalid_argument("impact_vitality: window contains no citing publications");
  const double value = ((scaled - total) / total) / detail::harmonic_tail(n);
  return std::clamp(value, 0.0, iv_upper_bound(n));
}

inline double impact_vitality(std::initializer_list<std::int64_t> counts) {
  return impact_vitality(std::vector<std::int64_t>(counts));
}

// --- windowed profiles ------------------------------------------------------

/// Window of fixed length n ending at the observation year.
struct MovingWindow {
  int n = 5;
  friend bool operator==(const MovingWindow&, const MovingWindow&) = default;
};

/// Window growing from a fixed origin (career start or first citation year)
/// to the observation year, reported once it spans at least min_length years.
struct FixedStart {
  Year start_year = 0;
  int min_length = 4;
  friend bool operator==(const FixedStart&, const FixedStart&) = default;
};

using WindowSpec = std::variant<MovingWindow, FixedStart>;

inline void check_window_spec(const WindowSpec& spec) {
  if (const auto* m = std::get_if<MovingWindow>(&spec); m && m->n < 2)
    throw std::invalid_argument("moving window length must be at least 2");
  if (const auto* f = std::get_if<FixedStart>(&spec); f && f->min_length < 2)
    throw std::invalid_argument("fixed-start minimum window length must be at least 2");
}

struct IVPoint {
  Year observation_year = 0;
  int window_length = 0;
  double value = 0.0;
  std::int64_t total_citing = 0;
  bool zero_year_flag = false;  // some year inside the window has no citing publications

  friend bool operator==(const IVPoint&, const IVPoint&) = default;
};

struct IVProfile {
  std::vector<IVPoint> points;  // observation_year strictly ascending
  WindowSpec window_spec;

  bool empty() const { return points.empty(); }
};

/// Window counts for observation year `y_t`, newest first. Empty when the
/// window is not admissible for that year.
inline std::vector<std::int64_t> window_counts(const YearlyCitingCounts& counts,
                                               const WindowSpec& spec, Year y_t) {
  int n = 0;
  if (const auto* m = std::get_if<MovingWindow>(&spec)) {
    n = m->n;
  } else {
    const auto& f = std::get<FixedStart>(spec);
    n = y_t - f.start_year + 1;
    if (n < f.min_length) return {};
  }
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int age = 1; age <= n; ++age) out.push_back(counts.at(y_t - age + 1));
  return out;
}

/// Impact Vitality profile over observation years [first_year, last_year].
///
/// Years missing from `counts` count as 0. Observation years whose window
/// holds no citing publications are skipped; years whose window merely
/// contains some zero year are reported with zero_year_flag set.
/// Throws std::invalid_argument when no observation year in the range has an
/// admissible window.
inline IVProfile iv_profile(const YearlyCitingCounts& counts, const WindowSpec& spec, Year first_year,
                            Year last_year) {
  check_window_spec(spec);
  if (first_year > last_year)
    throw std::invalid_argument("iv_profile: first year " + std::to_string(first_year) +
                                " is after last year " + std::to_string(last_year));
  Year admissible_from = first_year;
  if (const auto* f = std::get_if<FixedStart>(&spec)) {
    if (f->start_year > last_year)
      throw std::invalid_argument("iv_profile: fixed start year " + std::to_string(f->start_year) +
                                  " is after last year " + std::to_string(last_year));
    admissible_from = std::max(first_year, f->start_year + f->min_length - 1);
  }
  if (admissible_from > last_year)
    throw std::invalid_argument("iv_profile: no observation year in [" + std::to_string(first_year) +
                                ", " + std::to_string(last_year) + "] has an admissible window");

  IVProfile profile{{}, spec};
  for (Year y = admissible_from; y <= last_year; ++y) {
    const auto window = window_counts(counts, spec, y);
    std::int64_t total = 0;
    bool zero_year = false;
    for (auto c : window) {
      total += c;
      zero_year = zero_year || c == 0;
    }
    if (total == 0) continue;
    profile.points.push_back({y, static_cast<int>(window.size()), impact_vitality(window), total, zero_year});
  }
  return profile;
}

// --- comparison indicators --------------------------------------------------

/// Largest h such that at least h of the values are >= h.
template <std::ranges::input_range R>
  requires std::integral<std::ranges::range_value_t<R>>
std::int64_t h_index(const R& citation_counts) {
  std::vector<std::int64_t> sorted;
  for (auto c : citation_counts) {
    if (c < 0) throw std::invalid_argument("h_index: citation counts must be non-negative");
    sorted.push_back(static_cast<std::int64_t>(c));
  }
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::int64_t h = 0;
  while (h < static_cast<std::int64_t>(sorted.size()) && sorted[static_cast<std::size_t>(h)] >= h + 1) ++h;
  return h;
}

inline std::int64_t h_index(std::initializer_list<std::int64_t> counts) {
  return h_index(std::vector<std::int64_t>(counts));
}

struct HCoreEntry {
  std::int64_t citations = 0;
  int age = 1;  // observation year - publication year + 1

  friend bool operator==(const HCoreEntry&, const HCoreEntry&) = default;
};

/// AR-index: square root of the summed citations-per-year-of-age over the h-core.
inline double ar_index(const std::vector<HCoreEntry>& h_core) {
  double sum = 0.0;
  for (const auto& e : h_core) {
    if (e.age < 1) throw std::invalid_argument("ar_index: publication age must be at least 1");
    if (e.citations < 0) throw std::invalid_argument("ar_index: citations must be non-negative");
    sum += static_cast<double>(e.citations) / e.age;
  }
  return std::sqrt(sum);
}

struct PublicationCitations {
  PublicationId id;
  Year year = 0;
  std::int64_t citations = 0;
};

/// Selects the h-core for an observation year: publications ranked by
/// citations descending, ties at equal citations resolved toward the more
/// recent publication, then by id. Publications newer than the observation
/// year are ignored.
inline std::vector<PublicationCitations> h_core(std::vector<PublicationCitations> pubs, Year observation_year) {
  std::erase_if(pubs, [&](const PublicationCitations& p) { return p.year > observation_year; });
  std::sort(pubs.begin(), pubs.end(), [](const auto& a, const auto& b) {
    if (a.citations != b.citations) return a.citations > b.citations;
    if (a.year != b.year) return a.year > b.year;
    return a.id < b.id;
  });
  std::vector<std::int64_t> counts;
  for (const auto& p : pubs) counts.push_back(p.citations);
  pubs.resize(static_cast<std::size_t>(h_index(counts)));
  return pubs;
}

inline std::vector<HCoreEntry> h_core_entries(const std::vector<PublicationCitations>& core, Year observation_year) {
  std::vector<HCoreEntry> out;
  for (const auto& p : core) out.push_back({p.citations, observation_year - p.year + 1});
  return out;
}

}  // namespace vitality
