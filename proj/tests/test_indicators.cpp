#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "test_support.hpp"
#include "vitality/indicators.hpp"

using namespace vitality;
using vitality::testing::oracle_iv;

namespace {

double round_to(double v, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(v * scale) / scale;
}

}  // namespace

TEST(ImpactVitality, SimulatedCases) {
  EXPECT_NEAR(impact_vitality({5, 5, 5, 5, 5}), 1.0, 1e-12);
  EXPECT_NEAR(impact_vitality({5, 4, 3, 2, 1}), 1.48052, 5e-6);
  EXPECT_NEAR(impact_vitality({1, 2, 3, 4, 5}), 0.51948, 5e-6);
  EXPECT_NEAR(impact_vitality({10, 8, 6, 4, 2}), impact_vitality({5, 4, 3, 2, 1}), 1e-12);
  EXPECT_NEAR(impact_vitality({1, 2, 3, 2, 1}), 0.82251, 5e-6);
  EXPECT_NEAR(impact_vitality({3, 2, 1, 2, 3}), 1.14521, 1e-5);  // 1.145218...

  EXPECT_DOUBLE_EQ(round_to(impact_vitality({5, 4, 3, 2, 1}), 1), 1.5);
  EXPECT_DOUBLE_EQ(round_to(impact_vitality({1, 2, 3, 4, 5}), 1), 0.5);
  EXPECT_DOUBLE_EQ(round_to(impact_vitality({1, 2, 3, 2, 1}), 1), 0.8);
  EXPECT_DOUBLE_EQ(round_to(impact_vitality({3, 2, 1, 2, 3}), 1), 1.1);
}

TEST(ImpactVitality, WorkedExamples) {
  EXPECT_DOUBLE_EQ(round_to(impact_vitality({87, 77, 76, 82}), 2), 1.04);
  EXPECT_DOUBLE_EQ(round_to(impact_vitality({120, 87, 77, 76, 82}), 2), 1.20);
}

TEST(ImpactVitality, Extremes) {
  // (2 - 1) / (1.5 - 1)
  EXPECT_DOUBLE_EQ(impact_vitality({10, 0}), 2.0);
  EXPECT_DOUBLE_EQ(impact_vitality({0, 0, 0, 0, 7}), 0.0);
  EXPECT_DOUBLE_EQ(impact_vitality({0, 1}), 0.0);
  for (int n = 2; n <= 30; ++n) {
    std::vector<std::int64_t> newest(static_cast<std::size_t>(n), 0), oldest(static_cast<std::size_t>(n), 0);
    newest.front() = 3;
    oldest.back() = 3;
    EXPECT_NEAR(impact_vitality(newest), iv_upper_bound(n), 1e-12) << n;
    EXPECT_EQ(impact_vitality(oldest), 0.0) << n;
  }
}

TEST(ImpactVitality, MatchesOracle) {
  const std::vector<std::vector<std::int64_t>> cases{
      {87, 77, 76, 82}, {0, 3}, {1, 0, 0, 9, 2}, {1000000, 1, 1000000}, {4, 4, 0, 0, 0, 0, 0, 1}};
  for (const auto& c : cases) EXPECT_NEAR(impact_vitality(c), static_cast<double>(oracle_iv(c)), 1e-12);
}

TEST(ImpactVitality, RejectsInvalidWindows) {
  EXPECT_THROW(impact_vitality({5}), std::invalid_argument);
  EXPECT_THROW(impact_vitality(std::vector<int>{}), std::invalid_argument);
  EXPECT_THROW(impact_vitality({0, 0, 0}), std::invalid_argument);
  EXPECT_THROW(impact_vitality({3, -1, 2}), std::invalid_argument);
}

TEST(ImpactVitality, AcceptsAnyArithmeticRange) {
  const std::vector<double> d{5, 4, 3, 2, 1};
  const std::array<unsigned, 5> u{5, 4, 3, 2, 1};
  EXPECT_DOUBLE_EQ(impact_vitality(d), impact_vitality(u));
}

TEST(ImpactVitality, ReversalOfIncreasingCaseGivesDecreasingCase) {
  std::vector<std::int64_t> increasing{5, 4, 3, 2, 1};
  const double before = impact_vitality(increasing);
  std::reverse(increasing.begin(), increasing.end());
  EXPECT_NE(impact_vitality(increasing), before);
  EXPECT_NEAR(impact_vitality(increasing), impact_vitality({1, 2, 3, 4, 5}), 1e-15);
  EXPECT_NEAR(impact_vitality(increasing), 0.51948, 5e-6);
}

TEST(IvUpperBound, Values) {
  EXPECT_DOUBLE_EQ(iv_upper_bound(2), 2.0);
  EXPECT_NEAR(iv_upper_bound(5), 4.0 / (1.0 / 2 + 1.0 / 3 + 1.0 / 4 + 1.0 / 5), 1e-15);
  EXPECT_NEAR(iv_upper_bound(5), 3.1169, 5e-5);
  EXPECT_THROW(iv_upper_bound(1), std::invalid_argument);
}

TEST(IvProfile, SparseCountsMovingWindow) {
  const YearlyCitingCounts counts({{2005, 3}});
  const auto p = iv_profile(counts, MovingWindow{5}, 2000, 2010);
  ASSERT_EQ(p.points.size(), 5u);
  for (std::size_t i = 0; i < p.points.size(); ++i) {
    EXPECT_EQ(p.points[i].observation_year, 2005 + static_cast<Year>(i));
    EXPECT_TRUE(p.points[i].zero_year_flag);
    EXPECT_EQ(p.points[i].total_citing, 3);
    EXPECT_EQ(p.points[i].window_length, 5);
  }
  // (3,0,0,0,0): all mass at age 1
  EXPECT_NEAR(p.points[0].value, 4.0 / 1.2833333333333333, 1e-12);
  EXPECT_NEAR(p.points[0].value, 3.117, 5e-4);
  // (0,0,0,0,3): all mass at the oldest year
  EXPECT_DOUBLE_EQ(p.points[4].value, 0.0);
}

TEST(IvProfile, FixedStartReproducesReferenceColumns) {
  for (const auto& col : vitality::testing::reference_columns()) {
    const auto p = iv_profile(vitality::testing::reference_counts(col), FixedStart{1988, 4}, 1988, 2007);
    ASSERT_EQ(p.points.size(), 17u) << col.name;
    EXPECT_EQ(p.points.front().observation_year, 1991);
    EXPECT_EQ(p.points.front().window_length, 4);
    EXPECT_EQ(p.points.back().window_length, 20);
    for (std::size_t i = 0; i < 17; ++i) {
      const auto& pt = p.points[16 - i];
      EXPECT_NEAR(pt.value, col.iv[i], 0.005) << col.name << " " << pt.observation_year;
      EXPECT_DOUBLE_EQ(round_to(pt.value, 2), col.iv[i]) << col.name << " " << pt.observation_year;
      EXPECT_FALSE(pt.zero_year_flag);
    }
  }
}

TEST(IvProfile, ConstantCountsGiveOne) {
  YearlyCitingCounts::Map m;
  for (Year y = 1990; y <= 2010; ++y) m[y] = 12;
  const YearlyCitingCounts counts(m);
  for (const WindowSpec& spec : {WindowSpec{MovingWindow{2}}, WindowSpec{MovingWindow{7}}, WindowSpec{FixedStart{1990, 4}}}) {
    const auto p = iv_profile(counts, spec, 1996, 2010);
    ASSERT_FALSE(p.empty());
    for (const auto& pt : p.points) EXPECT_NEAR(pt.value, 1.0, 1e-12);
  }
}

TEST(IvProfile, AgreesWithDirectWindowEvaluation) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> count(0, 40);
  YearlyCitingCounts::Map m;
  for (Year y = 1980; y <= 2000; ++y)
    if (count(rng) > 8) m[y] = count(rng);
  const YearlyCitingCounts counts(m);
  const auto p = iv_profile(counts, MovingWindow{6}, 1975, 2005);
  ASSERT_FALSE(p.empty());
  Year prev = 0;
  for (const auto& pt : p.points) {
    EXPECT_GT(pt.observation_year, prev);
    prev = pt.observation_year;
    std::vector<std::int64_t> window;
    bool zero = false;
    for (Year y = pt.observation_year; y > pt.observation_year - 6; --y) {
      window.push_back(counts.at(y));
      zero = zero || counts.at(y) == 0;
    }
    EXPECT_DOUBLE_EQ(pt.value, impact_vitality(window));
    EXPECT_EQ(pt.zero_year_flag, zero);
    EXPECT_LE(pt.value, iv_upper_bound(6));
  }
}

TEST(IvProfile, SkipsEmptyWindowsAndRejectsEmptyRanges) {
  const YearlyCitingCounts counts({{2000, 5}, {2001, 5}});
  const auto p = iv_profile(counts, MovingWindow{2}, 1990, 2010);
  ASSERT_EQ(p.points.size(), 3u);  // 2000, 2001, 2002
  EXPECT_EQ(p.points.front().observation_year, 2000);
  EXPECT_EQ(p.points.back().observation_year, 2002);

  EXPECT_THROW(iv_profile(counts, MovingWindow{2}, 2005, 2004), std::invalid_argument);
  EXPECT_THROW(iv_profile(counts, MovingWindow{1}, 2000, 2004), std::invalid_argument);
  EXPECT_THROW(iv_profile(counts, FixedStart{2000, 1}, 2000, 2004), std::invalid_argument);
  EXPECT_THROW(iv_profile(counts, FixedStart{2006, 4}, 2000, 2005), std::invalid_argument);
  // Start 2000, min length 4: first admissible observation is 2003.
  EXPECT_THROW(iv_profile(counts, FixedStart{2000, 4}, 2000, 2002), std::invalid_argument);
  EXPECT_EQ(iv_profile(counts, FixedStart{2000, 4}, 2000, 2003).points.size(), 1u);
}

TEST(HIndex, Examples) {
  EXPECT_EQ(h_index(std::vector<int>{}), 0);
  EXPECT_EQ(h_index({10, 8, 5, 4, 3}), 4);
  EXPECT_EQ(h_index({1, 1, 1, 1}), 1);
  EXPECT_EQ(h_index({0, 0}), 0);
  EXPECT_EQ(h_index({100}), 1);
  EXPECT_THROW(h_index({3, -1}), std::invalid_argument);
}

TEST(HIndex, PermutationInvariantAndBounded) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::int64_t> xs(static_cast<std::size_t>(rng() % 12));
    for (auto& x : xs) x = static_cast<std::int64_t>(rng() % 15);
    const auto h = h_index(xs);
    EXPECT_LE(h, static_cast<std::int64_t>(xs.size()));
    EXPECT_EQ(h, vitality::testing::oracle_h_index(xs));
    std::shuffle(xs.begin(), xs.end(), rng);
    EXPECT_EQ(h_index(xs), h);
  }
}

TEST(ArIndex, Examples) {
  EXPECT_DOUBLE_EQ(ar_index({}), 0.0);
  EXPECT_NEAR(ar_index({{9, 1}, {4, 2}}), std::sqrt(11.0), 1e-15);
  EXPECT_NEAR(ar_index({{9, 1}, {4, 2}}), 3.3166, 5e-5);
  for (int h = 1; h <= 10; ++h) {
    std::vector<HCoreEntry> core(static_cast<std::size_t>(h), HCoreEntry{h, 1});
    EXPECT_NEAR(ar_index(core), h, 1e-12);
  }
  EXPECT_THROW(ar_index({{3, 0}}), std::invalid_argument);
  EXPECT_THROW(ar_index({{-1, 1}}), std::invalid_argument);
}

TEST(ArIndex, MonotoneInCitationsAndAge) {
  const std::vector<HCoreEntry> base{{7, 3}, {5, 2}, {4, 6}};
  const double v = ar_index(base);
  for (std::size_t i = 0; i < base.size(); ++i) {
    auto more = base;
    more[i].citations += 1;
    EXPECT_GT(ar_index(more), v);
    auto older = base;
    older[i].age += 1;
    EXPECT_LT(ar_index(older), v);
  }
}

TEST(HCore, TiesPreferRecentPublications) {
  // h = 2; three publications tie at 2 citations for the second slot.
  const std::vector<PublicationCitations> pubs{
      {"old", 1990, 2}, {"new", 2000, 2}, {"mid", 1995, 2}, {"top", 1985, 9}, {"future", 2010, 50}};
  const auto core = h_core(pubs, 2005);
  ASSERT_EQ(core.size(), 2u);
  EXPECT_EQ(core[0].id, "top");
  EXPECT_EQ(core[1].id, "new");
  const auto entries = h_core_entries(core, 2005);
  EXPECT_EQ(entries[0].age, 21);
  EXPECT_EQ(entries[1].age, 6);
}
