#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "vitality/cohort.hpp"
#include "vitality/error.hpp"
#include "vitality/indicators.hpp"
#include "vitality/model.hpp"

namespace vitality::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kCountsHeader = "year,count";
inline constexpr std::string_view kReportHeader =
    "observation_year,window_length,iv_value,total_citing,zero_year_flag";
inline constexpr std::string_view kManifestHeader = "candidate_id,selected,call_year,career_start_year,path";

// --- small text helpers -----------------------------------------------------

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::vector<std::string_view> lines(std::string_view doc) {
  auto out = split(doc, '\n');
  for (auto& l : out)
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  return out;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  Int value{};
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (s.empty() || ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

}  // namespace detail

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Fixed-point presentation, e.g. format_fixed(1.398, 2) == "1.40".
inline std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

/// The numeric value shown by format_fixed, so every output format agrees.
inline double rounded(double value, int decimals) { return std::stod(format_fixed(value, decimals)); }

// --- dataset documents ------------------------------------------------------

namespace detail {

class Reader {
public:
  explicit Reader(std::string path) : path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& msg) const { throw DataError(path_ + ": " + msg); }

  Reader at(std::string_view key) const { return Reader(path_.empty() ? std::string(key) : path_ + "." + std::string(key)); }
  Reader at(std::size_t index) const { return Reader(path_ + "[" + std::to_string(index) + "]"); }

  void expect_object(const json& j, std::initializer_list<std::string_view> allowed) const {
    if (!j.is_object()) fail("expected an object");
    for (const auto& [key, _] : j.items()) {
      bool known = false;
      for (auto a : allowed) known = known || key == a;
      if (!known) at(key).fail("unknown field");
    }
  }

  const json& field(const json& obj, std::string_view key) const {
    auto it = obj.find(key);
    if (it == obj.end()) at(key).fail("missing required field");
    return *it;
  }

  std::string string(const json& j) const {
    if (!j.is_string()) fail("expected a string");
    return j.get<std::string>();
  }

  std::string non_empty_string(const json& j) const {
    auto s = string(j);
    if (s.empty()) fail("must not be empty");
    return s;
  }

  int integer(const json& j) const {
    if (!j.is_number_integer()) fail("expected an integer");
    const auto v = j.get<std::int64_t>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) fail("integer out of range");
    return static_cast<int>(v);
  }

  const json& array(const json& j) const {
    if (!j.is_array()) fail("expected an array");
    return j;
  }

private:
  std::string path_;
};

inline AuthorKey read_author(const json& j, const Reader& r) {
  r.expect_object(j, {"surname", "initials"});
  const auto surname = r.at("surname").string(r.field(j, "surname"));
  std::string initials;
  if (auto it = j.find("initials"); it != j.end()) initials = r.at("initials").string(*it);
  try {
    return AuthorKey(surname, initials);
  } catch (const std::invalid_argument&) {
    r.at("surname").fail("must not be empty after normalization");
  }
}

inline json write_author(const AuthorKey& a) { return {{"surname", a.surname()}, {"initials", a.initials()}}; }

}  // namespace detail

/// Reads a dataset document without checking cross-record invariants.
/// Syntax and schema violations throw DataError naming the offending field.
inline CitationDataset read_dataset(std::string_view document) {
  json root;
  try {
    root = json::parse(document);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed dataset document: ") + e.what());
  }
  const detail::Reader r("");
  r.expect_object(root, {"schema_version", "target", "publications", "citing_records"});
  const int version = r.at("schema_version").integer(r.field(root, "schema_version"));
  if (version != kSchemaVersion)
    r.at("schema_version").fail("unsupported version " + std::to_string(version) + " (expected " +
                                std::to_string(kSchemaVersion) + ")");

  const auto rt = r.at("target");
  const json& jt = r.field(root, "target");
  rt.expect_object(jt, {"key", "name_variants", "career_start_year"});
  AuthorKey key = detail::read_author(rt.field(jt, "key"), rt.at("key"));
  std::set<AuthorKey> variants;
  if (auto it = jt.find("name_variants"); it != jt.end()) {
    const auto rv = rt.at("name_variants");
    std::size_t i = 0;
    for (const auto& v : rv.array(*it)) variants.insert(detail::read_author(v, rv.at(i++)));
  }
  std::optional<Year> career_start;
  if (auto it = jt.find("career_start_year"); it != jt.end() && !it->is_null())
    career_start = rt.at("career_start_year").integer(*it);

  std::vector<Publication> pubs;
  {
    const auto rp = r.at("publications");
    std::size_t i = 0;
    for (const auto& jp : rp.array(r.field(root, "publications"))) {
      const auto ri = rp.at(i++);
      ri.expect_object(jp, {"id", "year", "doc_type", "label"});
      Publication p;
      p.id = ri.at("id").non_empty_string(ri.field(jp, "id"));
      p.year = ri.at("year").integer(ri.field(jp, "year"));
      p.doc_type = ri.at("doc_type").string(ri.field(jp, "doc_type"));
      if (auto it = jp.find("label"); it != jp.end() && !it->is_null()) p.label = ri.at("label").string(*it);
      pubs.push_back(std::move(p));
    }
  }

  std::vector<CitingRecord> records;
  {
    const auto rc = r.at("citing_records");
    std::size_t i = 0;
    for (const auto& jr : rc.array(r.field(root, "citing_records"))) {
      const auto ri = rc.at(i++);
      ri.expect_object(jr, {"id", "year", "authors", "cited_target_pub_ids", "doc_type"});
      CitingRecord rec;
      rec.id = ri.at("id").non_empty_string(ri.field(jr, "id"));
      rec.year = ri.at("year").integer(ri.field(jr, "year"));
      rec.doc_type = ri.at("doc_type").string(ri.field(jr, "doc_type"));
      const auto ra = ri.at("authors");
      std::size_t k = 0;
      for (const auto& a : ra.array(ri.field(jr, "authors"))) rec.authors.insert(detail::read_author(a, ra.at(k++)));
      const auto rid = ri.at("cited_target_pub_ids");
      k = 0;
      for (const auto& id : rid.array(ri.field(jr, "cited_target_pub_ids")))
        rec.cited_target_pub_ids.insert(rid.at(k++).non_empty_string(id));
      records.push_back(std::move(rec));
    }
  }

  return make_dataset(TargetAuthor(std::move(key), std::move(variants), career_start), std::move(pubs),
                      std::move(records));
}

/// Reads a dataset document and rejects it on the first ERROR finding.
inline CitationDataset parse_dataset(std::string_view document) {
  auto ds = read_dataset(document);
  for (const auto& f : validate_dataset(ds))
    if (f.severity == Severity::Error) throw DataError("invalid dataset: " + f.message);
  return ds;
}

inline std::string emit_dataset(const CitationDataset& ds) {
  json variants = json::array();
  for (const auto& v : ds.target.name_variants) variants.push_back(detail::write_author(v));
  json target = {{"key", detail::write_author(ds.target.key)}, {"name_variants", std::move(variants)}};
  target["career_start_year"] = ds.target.career_start_year ? json(*ds.target.career_start_year) : json(nullptr);

  json pubs = json::array();
  for (const auto& p : ds.publications) {
    json jp = {{"id", p.id}, {"year", p.year}, {"doc_type", p.doc_type}};
    if (p.label) jp["label"] = *p.label;
    pubs.push_back(std::move(jp));
  }

  json records = json::array();
  for (const auto& r : ds.citing_records) {
    json authors = json::array();
    for (const auto& a : r.authors) authors.push_back(detail::write_author(a));
    records.push_back({{"id", r.id},
                       {"year", r.year},
                       {"authors", std::move(authors)},
                       {"cited_target_pub_ids", r.cited_target_pub_ids},
                       {"doc_type", r.doc_type}});
  }

  json root = {{"schema_version", kSchemaVersion},
               {"target", std::move(target)},
               {"publications", std::move(pubs)},
               {"citing_records", std::move(records)}};
  return root.dump(2) + "\n";
}

// --- counts files -----------------------------------------------------------

/// Parses "year,count" rows. Blank lines are ignored.
inline YearlyCitingCounts parse_counts(std::string_view document) {
  const auto rows = detail::lines(document);
  std::size_t i = 0;
  while (i < rows.size() && detail::trim(rows[i]).empty()) ++i;
  if (i == rows.size() || detail::trim(rows[i]) != kCountsHeader)
    throw DataError("counts file: missing header '" + std::string(kCountsHeader) + "'");
  YearlyCitingCounts::Map counts;
  for (++i; i < rows.size(); ++i) {
    const auto line = detail::trim(rows[i]);
    if (line.empty()) continue;
    const auto where = "counts file line " + std::to_string(i + 1) + ": ";
    const auto cells = detail::split(line, ',');
    if (cells.size() != 2) throw DataError(where + "expected 2 columns");
    const auto year = detail::parse_int<Year>(cells[0]);
    if (!year) throw DataError(where + "year is not an integer");
    const auto count = detail::parse_int<std::int64_t>(cells[1]);
    if (!count) throw DataError(where + "count is not an integer");
    if (*count < 0) throw DataError(where + "count is negative");
    if (!counts.emplace(*year, *count).second) throw DataError(where + "duplicate year " + std::to_string(*year));
  }
  return YearlyCitingCounts(std::move(counts));
}

inline std::string emit_counts(const YearlyCitingCounts& counts) {
  std::string out(kCountsHeader);
  out += '\n';
  for (auto it = counts.map().rbegin(); it != counts.map().rend(); ++it)
    out += std::to_string(it->first) + "," + std::to_string(it->second) + "\n";
  return out;
}

// --- profile reports --------------------------------------------------------

enum class Format { Table, Csv, Json };

inline constexpr int kProfileDecimals = 2;

inline std::string describe(const WindowSpec& spec) {
  if (const auto* m = std::get_if<MovingWindow>(&spec)) return "moving:" + std::to_string(m->n);
  const auto& f = std::get<FixedStart>(spec);
  return "fixed:" + std::to_string(f.start_year) + ":" + std::to_string(f.min_length);
}

/// One row per point, newest observation year first.
inline std::string format_profile(const IVProfile& profile, Format format) {
  std::vector<const IVPoint*> rows;
  for (auto it = profile.points.rbegin(); it != profile.points.rend(); ++it) rows.push_back(&*it);
  auto flag = [](bool b) { return b ? std::string("true") : std::string("false"); };

  switch (format) {
    case Format::Csv: {
      std::string out(kReportHeader);
      out += '\n';
      for (const auto* p : rows)
        out += std::to_string(p->observation_year) + "," + std::to_string(p->window_length) + "," +
               format_fixed(p->value, kProfileDecimals) + "," + std::to_string(p->total_citing) + "," +
               flag(p->zero_year_flag) + "\n";
      return out;
    }
    case Format::Json: {
      json points = json::array();
      for (const auto* p : rows)
        points.push_back({{"observation_year", p->observation_year},
                          {"window_length", p->window_length},
                          {"iv_value", rounded(p->value, kProfileDecimals)},
                          {"iv_raw", p->value},
                          {"total_citing", p->total_citing},
                          {"zero_year_flag", p->zero_year_flag}});
      json root = {{"window", describe(profile.window_spec)}, {"points", std::move(points)}};
      return root.dump(2) + "\n";
    }
    case Format::Table: {
      char buf[128];
      std::string out;
      std::snprintf(buf, sizeof buf, "%-6s %6s %8s %12s %s\n", "year", "window", "IV", "citing", "zero-year");
      out += buf;
      for (const auto* p : rows) {
        std::snprintf(buf, sizeof buf, "%-6d %6d %8s %12lld %s\n", p->observation_year, p->window_length,
                      format_fixed(p->value, kProfileDecimals).c_str(), static_cast<long long>(p->total_citing),
                      p->zero_year_flag ? "yes" : "-");
        out += buf;
      }
      return out;
    }
  }
  return {};
}

// --- cohort manifests and reports -------------------------------------------

struct ManifestEntry {
  std::string candidate_id;
  bool selected = false;
  Year call_year = 0;
  std::optional<Year> career_start_year;
  std::filesystem::path path;  // resolved against the manifest's directory
};

inline std::vector<ManifestEntry> parse_manifest(std::string_view document,
                                                 const std::filesystem::path& base_dir = {}) {
  const auto rows = detail::lines(document);
  std::size_t i = 0;
  while (i < rows.size() && detail::trim(rows[i]).empty()) ++i;
  if (i == rows.size() || detail::trim(rows[i]) != kManifestHeader)
    throw DataError("manifest: missing header '" + std::string(kManifestHeader) + "'");
  std::vector<ManifestEntry> out;
  std::set<std::string> ids;
  for (++i; i < rows.size(); ++i) {
    const auto line = detail::trim(rows[i]);
    if (line.empty()) continue;
    const auto where = "manifest line " + std::to_string(i + 1) + ": ";
    const auto cells = detail::split(line, ',');
    if (cells.size() != 5) throw DataError(where + "expected 5 columns");
    ManifestEntry e;
    e.candidate_id = std::string(detail::trim(cells[0]));
    if (e.candidate_id.empty()) throw DataError(where + "empty candidate_id");
    if (!ids.insert(e.candidate_id).second) throw DataError(where + "duplicate candidate_id '" + e.candidate_id + "'");
    const auto sel = detail::trim(cells[1]);
    if (sel == "true" || sel == "1" || sel == "yes") e.selected = true;
    else if (sel == "false" || sel == "0" || sel == "no") e.selected = false;
    else throw DataError(where + "selected must be true/false");
    const auto call = detail::parse_int<Year>(cells[2]);
    if (!call) throw DataError(where + "call_year is not an integer");
    e.call_year = *call;
    if (!detail::trim(cells[3]).empty()) {
      const auto start = detail::parse_int<Year>(cells[3]);
      if (!start) throw DataError(where + "career_start_year is not an integer");
      e.career_start_year = *start;
    }
    const auto p = detail::trim(cells[4]);
    if (p.empty()) throw DataError(where + "empty path");
    e.path = std::filesystem::path(std::string(p));
    if (e.path.is_relative() && !base_dir.empty()) e.path = base_dir / e.path;
    out.push_back(std::move(e));
  }
  return out;
}

namespace detail {

inline json range_json(const std::optional<RangeStats>& r) {
  if (!r) return nullptr;
  return {{"min", r->min}, {"max", r->max}, {"mean", r->mean}, {"count", r->count}};
}

inline std::string range_text(const std::optional<RangeStats>& r, int decimals) {
  if (!r) return "n/a";
  return format_fixed(r->min, decimals) + " to " + format_fixed(r->max, decimals) + ", average " +
         format_fixed(r->mean, decimals);
}

inline std::string range_csv(const std::optional<RangeStats>& r, int decimals) {
  if (!r) return ",,,0";
  return format_fixed(r->min, decimals) + "," + format_fixed(r->max, decimals) + "," +
         format_fixed(r->mean, decimals) + "," + std::to_string(r->count);
}

}  // namespace detail

inline std::string format_cohort(const CohortSummary& s, Format format) {
  const std::pair<std::string_view, const CohortStats*> groups[] = {{"selected", &s.selected},
                                                                    {"not_selected", &s.not_selected}};
  switch (format) {
    case Format::Json: {
      json root = json::object();
      for (const auto& [name, g] : groups) {
        root[std::string(name)] = {
            {"group_size", g->group_size},
            {"min_iv", detail::range_json(g->min_iv_range)},
            {"share_all_above_one", g->share_all_above_one ? json(*g->share_all_above_one) : json(nullptr)},
            {"fluctuation", detail::range_json(g->fluctuation_range)},
            {"citing_per_year_last5", detail::range_json(g->citing_per_year_last5)},
            {"citing_per_year_since_start", detail::range_json(g->citing_per_year_since_start)}};
      }
      return root.dump(2) + "\n";
    }
    case Format::Csv: {
      std::string out =
          "group,group_size,min_iv_min,min_iv_max,min_iv_mean,min_iv_count,share_all_above_one,"
          "fluctuation_min,fluctuation_max,fluctuation_mean,fluctuation_count,"
          "last5_min,last5_max,last5_mean,last5_count,since_start_min,since_start_max,since_start_mean,"
          "since_start_count\n";
      for (const auto& [name, g] : groups) {
        out += std::string(name) + "," + std::to_string(g->group_size) + "," + detail::range_csv(g->min_iv_range, 2) +
               "," + (g->share_all_above_one ? format_fixed(*g->share_all_above_one, 2) : std::string()) + "," +
               detail::range_csv(g->fluctuation_range, 2) + "," + detail::range_csv(g->citing_per_year_last5, 0) +
               "," + detail::range_csv(g->citing_per_year_since_start, 0) + "\n";
      }
      return out;
    }
    case Format::Table: {
      std::string out;
      auto row = [&](std::string_view label, const std::string& a, const std::string& b) {
        char buf[512];
        std::snprintf(buf, sizeof buf, "%-40.*s | %-32s | %s\n", static_cast<int>(label.size()), label.data(),
                      a.c_str(), b.c_str());
        out += buf;
      };
      auto share = [](const CohortStats& g) {
        return g.share_all_above_one ? format_fixed(100.0 * *g.share_all_above_one, 0) + "% with all IV > 1"
                                     : std::string("n/a");
      };
      row("", "Selected candidates", "Not selected candidates");
      row("Number of candidates", std::to_string(s.selected.group_size), std::to_string(s.not_selected.group_size));
      row("Citing publications/year, 5y to call", detail::range_text(s.selected.citing_per_year_last5, 0),
          detail::range_text(s.not_selected.citing_per_year_last5, 0));
      row("Citing publications/year, start to call", detail::range_text(s.selected.citing_per_year_since_start, 0),
          detail::range_text(s.not_selected.citing_per_year_since_start, 0));
      row("Minimum IV", detail::range_text(s.selected.min_iv_range, 2),
          detail::range_text(s.not_selected.min_iv_range, 2));
      row("", share(s.selected), share(s.not_selected));
      row("IV fluctuation, 5y to call", detail::range_text(s.selected.fluctuation_range, 2),
          detail::range_text(s.not_selected.fluctuation_range, 2));
      return out;
    }
  }
  return {};
}

}  // namespace vitality::io
