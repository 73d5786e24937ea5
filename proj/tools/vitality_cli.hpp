#pragma once

#include <algorithm>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "vitality/vitality.hpp"

namespace vitality::cli {

enum ExitStatus : int { kSuccess = 0, kDataError = 1, kUsageError = 2 };

class UsageError : public std::runtime_error {
public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline int parse_int_arg(std::string_view text, std::string_view what) {
  auto v = io::detail::parse_int<int>(text);
  if (!v) throw UsageError(std::string(what) + " must be an integer, got '" + std::string(text) + "'");
  return *v;
}

inline std::set<std::string> parse_list(std::string_view text) {
  std::set<std::string> out;
  for (auto item : io::detail::split(text, ',')) {
    item = io::detail::trim(item);
    if (!item.empty()) out.emplace(item);
  }
  return out;
}

// "moving:<n>" or "fixed:<start>[:<minlen>]". A fixed window with an empty
// start ("fixed::4") takes its origin from the data.
struct WindowArg {
  WindowSpec spec;
  bool start_from_data = false;
};

inline WindowArg parse_window(std::string_view text) {
  const auto parts = io::detail::split(text, ':');
  if (parts[0] == "moving" && parts.size() == 2) {
    const int n = parse_int_arg(parts[1], "moving window length");
    if (n < 2) throw UsageError("moving window length must be at least 2 (got " + std::to_string(n) + ")");
    return {MovingWindow{n}, false};
  }
  if (parts[0] == "fixed" && (parts.size() == 2 || parts.size() == 3)) {
    FixedStart f;
    const bool from_data = io::detail::trim(parts[1]).empty();
    if (!from_data) f.start_year = parse_int_arg(parts[1], "fixed window start year");
    if (parts.size() == 3) f.min_length = parse_int_arg(parts[2], "fixed window minimum length");
    if (f.min_length < 2)
      throw UsageError("fixed window minimum length must be at least 2 (got " + std::to_string(f.min_length) + ")");
    return {f, from_data};
  }
  throw UsageError("invalid --window '" + std::string(text) + "' (expected moving:<n> or fixed:<start>[:<minlen>])");
}

inline io::Format parse_format(std::string_view text) {
  if (text == "table") return io::Format::Table;
  if (text == "csv") return io::Format::Csv;
  if (text == "json") return io::Format::Json;
  throw UsageError("invalid --format '" + std::string(text) + "' (expected table, csv or json)");
}

// Filter flags that still need a dataset to resolve (cites-only:most-cited).
struct FilterArgs {
  FilterSet set;
  bool cites_only_most_cited = false;
};

inline FilterArgs parse_filters(const std::vector<std::string>& flags) {
  FilterArgs out;
  auto merge = [](std::optional<std::set<std::string>>& slot, std::set<std::string> values) {
    if (!slot) slot.emplace();
    slot->insert(values.begin(), values.end());
  };
  for (const auto& flag : flags) {
    const auto colon = flag.find(':');
    const std::string_view name = std::string_view(flag).substr(0, colon);
    const std::string_view value = colon == std::string::npos ? std::string_view{} : std::string_view(flag).substr(colon + 1);
    if (name == "self-citations" && colon == std::string::npos) {
      out.set.exclude_self_citations = true;
    } else if (name == "cites-only" && !value.empty()) {
      const bool most = value == "most-cited";
      if ((out.cites_only_most_cited || out.set.exclude_citing_only) &&
          (most != out.cites_only_most_cited || (!most && *out.set.exclude_citing_only != value)))
        throw UsageError("at most one cites-only filter may be given");
      if (most) out.cites_only_most_cited = true;
      else out.set.exclude_citing_only = std::string(value);
    } else if (name == "citing-types" && !value.empty()) {
      merge(out.set.citing_doc_types, parse_list(value));
    } else if (name == "cited-types" && !value.empty()) {
      merge(out.set.cited_doc_types, parse_list(value));
    } else if (name == "exclude-ids" && !value.empty()) {
      auto ids = parse_list(value);
      out.set.exclude_ids.insert(ids.begin(), ids.end());
    } else {
      throw UsageError("invalid --filter '" + flag +
                       "' (expected self-citations, cites-only:<pubid|most-cited>, citing-types:<t,...>, "
                       "cited-types:<t,...> or exclude-ids:<id,...>)");
    }
  }
  return out;
}

inline FilterSet resolve_filters(const FilterArgs& args, const CitationDataset& ds) {
  FilterSet fs = args.set;
  if (args.cites_only_most_cited) fs.exclude_citing_only = most_cited_publication(ds);
  return fs;
}

inline CitationDataset load_dataset(const std::filesystem::path& path, std::ostream& err) {
  auto ds = io::read_dataset(io::read_file(path));
  const auto findings = validate_dataset(ds);
  for (const auto& f : findings)
    if (f.severity == Severity::Error) throw DataError(path.string() + ": invalid dataset: " + f.message);
  for (const auto& f : findings) err << path.string() << ": warning: " << f.message << "\n";
  return ds;
}

// Window origin when the user does not give one.
inline std::optional<Year> default_start(const CitationDataset* ds, const YearlyCitingCounts& counts) {
  if (ds && ds->target.career_start_year) return ds->target.career_start_year;
  if (ds && ds->target.first_citation_year) return ds->target.first_citation_year;
  return counts.first_nonzero_year();
}

inline bool looks_like_json(std::string_view doc) {
  doc = io::detail::trim(doc);
  return !doc.empty() && doc.front() == '{';
}

struct Options {
  // profile / indicators
  std::string dataset;
  std::string counts;
  std::string window;
  std::vector<std::string> filters;
  std::optional<int> from, to, year;
  std::string format = "table";
  // cohort
  std::string manifest;
};

inline int cmd_validate(const Options& o, std::ostream& out) {
  const auto ds = io::read_dataset(io::read_file(o.dataset));
  const auto findings = validate_dataset(ds);
  for (const auto& f : findings) out << to_string(f.severity) << ": " << f.message << "\n";
  if (findings.empty()) out << "OK: " << ds.publications.size() << " publications, " << ds.citing_records.size()
                            << " citing records\n";
  return has_errors(findings) ? kDataError : kSuccess;
}

inline int cmd_profile(const Options& o, std::ostream& out, std::ostream& err) {
  const auto format = parse_format(o.format);
  std::optional<WindowArg> window;
  if (!o.window.empty()) window = parse_window(o.window);
  const auto filter_args = parse_filters(o.filters);
  if (o.dataset.empty() == o.counts.empty()) throw UsageError("profile needs exactly one of <dataset> or --counts");
  if (!o.counts.empty() && !o.filters.empty())
    throw UsageError("--filter needs a citing-record dataset; it cannot be applied to --counts input");

  std::optional<CitationDataset> ds;
  YearlyCitingCounts counts;
  if (!o.counts.empty()) {
    counts = io::parse_counts(io::read_file(o.counts));
  } else {
    ds = load_dataset(o.dataset, err);
    counts = yearly_citing_counts(*ds, resolve_filters(filter_args, *ds));
  }

  WindowSpec spec = FixedStart{};
  if (window) spec = window->spec;
  if (!window || window->start_from_data) {
    const auto start = default_start(ds ? &*ds : nullptr, counts);
    if (!start) throw DataError("no citing publications to anchor the window start");
    std::get<FixedStart>(spec).start_year = *start;
  }

  std::optional<Year> from = o.from, to = o.to;
  if (!to) to = counts.last_nonzero_year();
  if (!from) {
    if (const auto* f = std::get_if<FixedStart>(&spec)) from = f->start_year;
    else from = counts.first_nonzero_year();
  }
  if (!from || !to) throw DataError("no citing publications in the input");
  if (*from > *to) throw UsageError("--from " + std::to_string(*from) + " is after --to " + std::to_string(*to));

  const auto profile = iv_profile(counts, spec, *from, *to);
  out << io::format_profile(profile, format);
  return kSuccess;
}

inline int cmd_indicators(const Options& o, std::ostream& out, std::ostream& err) {
  const auto format = parse_format(o.format);
  if (format == io::Format::Csv) throw UsageError("indicators supports --format table or json");
  std::optional<WindowArg> window;
  if (!o.window.empty()) window = parse_window(o.window);
  const auto filter_args = parse_filters(o.filters);

  const auto full = load_dataset(o.dataset, err);
  const auto fs = resolve_filters(filter_args, full);
  const auto all_counts = yearly_citing_counts(full, fs);
  const Year year = o.year ? *o.year : all_counts.last_nonzero_year().value_or(current_calendar_year());

  // Only what was observable by the observation year.
  auto ds = full;
  std::erase_if(ds.citing_records, [&](const CitingRecord& r) { return r.year > year; });
  const auto per_pub = citation_counts_per_publication(ds, fs);
  std::vector<PublicationCitations> pubs;
  for (const auto& p : ds.publications) pubs.push_back({p.id, p.year, per_pub.at(p.id)});
  const auto core = h_core(pubs, year);
  const double ar = ar_index(h_core_entries(core, year));
  const auto counts = yearly_citing_counts(ds, fs);

  WindowSpec spec = FixedStart{};
  if (window) spec = window->spec;
  if (!window || window->start_from_data) {
    if (auto start = default_start(&full, all_counts)) std::get<FixedStart>(spec).start_year = *start;
  }
  std::optional<IVPoint> latest;
  try {
    Year from = year;
    if (const auto* f = std::get_if<FixedStart>(&spec)) from = std::min(year, f->start_year);
    const auto profile = iv_profile(counts, spec, from, year);
    if (!profile.empty() && profile.points.back().observation_year == year) latest = profile.points.back();
  } catch (const std::invalid_argument&) {
    // no admissible window at this year
  }

  if (format == io::Format::Json) {
    io::json core_json = io::json::array();
    for (const auto& p : core)
      core_json.push_back({{"id", p.id}, {"year", p.year}, {"citations", p.citations}, {"age", year - p.year + 1}});
    io::json root = {{"observation_year", year},
                     {"window", io::describe(spec)},
                     {"h_index", core.size()},
                     {"ar_index", ar},
                     {"h_core", std::move(core_json)}};
    if (latest) {
      root["impact_vitality"] = {{"observation_year", latest->observation_year},
                                 {"window_length", latest->window_length},
                                 {"iv_value", io::rounded(latest->value, io::kProfileDecimals)},
                                 {"iv_raw", latest->value},
                                 {"total_citing", latest->total_citing},
                                 {"zero_year_flag", latest->zero_year_flag}};
    } else {
      root["impact_vitality"] = nullptr;
    }
    out << root.dump(2) << "\n";
    return kSuccess;
  }

  out << "observation_year: " << year << "\n";
  out << "h_index: " << core.size() << "\n";
  out << "ar_index: " << io::format_fixed(ar, 2) << "\n";
  out << "window: " << io::describe(spec) << "\n";
  if (latest) {
    out << "impact_vitality: " << io::format_fixed(latest->value, io::kProfileDecimals) << " (window "
        << latest->window_length << " years, " << latest->total_citing << " citing"
        << (latest->zero_year_flag ? ", contains zero years" : "") << ")\n";
  } else {
    out << "impact_vitality: n/a\n";
  }
  return kSuccess;
}

inline int cmd_cohort(const Options& o, std::ostream& out, std::ostream& err) {
  const auto format = parse_format(o.format);
  const std::filesystem::path manifest_path(o.manifest);
  const auto entries = io::parse_manifest(io::read_file(manifest_path), manifest_path.parent_path());
  std::vector<CandidateProfile> candidates;
  for (const auto& e : entries) {
    const auto doc = io::read_file(e.path);
    std::optional<CitationDataset> ds;
    YearlyCitingCounts counts;
    if (looks_like_json(doc)) {
      ds = load_dataset(e.path, err);
      counts = yearly_citing_counts(*ds);
    } else {
      counts = io::parse_counts(doc);
    }
    auto start = e.career_start_year;
    if (!start) start = default_start(ds ? &*ds : nullptr, counts);
    if (!start) throw DataError("candidate '" + e.candidate_id + "': no citing publications");
    const FixedStart spec{*start, 4};
    IVProfile profile;
    try {
      profile = iv_profile(counts, spec, *start, e.call_year);
    } catch (const std::invalid_argument& ex) {
      throw DataError("candidate '" + e.candidate_id + "': " + ex.what());
    }
    if (profile.empty()) throw DataError("candidate '" + e.candidate_id + "': empty Impact Vitality profile");
    std::optional<Year> career_start = e.career_start_year;
    if (!career_start && ds) career_start = ds->target.career_start_year;
    candidates.push_back({e.candidate_id, e.selected, e.call_year, career_start, std::move(profile), std::move(counts)});
  }
  if (candidates.empty()) throw DataError("manifest lists no candidates");
  out << io::format_cohort(cohort_summary(candidates), format);
  return kSuccess;
}

}  // namespace detail

/// Runs the command line `args` (without the program name). Data goes to
/// `out`, diagnostics to `err`. Returns 0 on success, 1 on data errors and
/// 2 on usage errors.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Impact Vitality citation analytics"};
  app.require_subcommand(1);
  detail::Options o;

  auto* validate = app.add_subcommand("validate", "Check a dataset and print its findings");
  validate->add_option("dataset", o.dataset, "Dataset file (JSON)")->required();

  auto* profile = app.add_subcommand("profile", "Emit an Impact Vitality profile");
  profile->add_option("dataset", o.dataset, "Dataset file (JSON)");
  profile->add_option("--counts", o.counts, "Counts file (year,count)");
  profile->add_option("--window", o.window, "moving:<n> or fixed:<start>[:<minlen>]");
  profile->add_option("--filter", o.filters,
                      "self-citations | cites-only:<pubid|most-cited> | citing-types:<t,..> | cited-types:<t,..> | "
                      "exclude-ids:<id,..>");
  profile->add_option("--from", o.from, "First observation year");
  profile->add_option("--to", o.to, "Last observation year");
  profile->add_option("--format", o.format, "table, csv or json");

  auto* indicators = app.add_subcommand("indicators", "Emit h-index, AR-index and the latest IV point");
  indicators->add_option("dataset", o.dataset, "Dataset file (JSON)")->required();
  indicators->add_option("--year", o.year, "Observation year");
  indicators->add_option("--window", o.window, "moving:<n> or fixed:<start>[:<minlen>]");
  indicators->add_option("--filter", o.filters, "Same filters as profile");
  indicators->add_option("--format", o.format, "table or json");

  auto* cohort = app.add_subcommand("cohort", "Summarize selected vs non-selected candidates");
  cohort->add_option("manifest", o.manifest, "Manifest CSV")->required();
  cohort->add_option("--format", o.format, "table, csv or json");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kSuccess;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (validate->parsed()) return detail::cmd_validate(o, out);
    if (profile->parsed()) return detail::cmd_profile(o, out, err);
    if (indicators->parsed()) return detail::cmd_indicators(o, out, err);
    if (cohort->parsed()) return detail::cmd_cohort(o, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsageError;
}

}  // namespace vitality::cli
