#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace vitality {

using Year = int;
using PublicationId = std::string;
using RecordId = std::string;

namespace detail {

// ASCII folding for U+00C0..U+00FF. '&' -> "ae", 'T' -> "th", 'S' -> "ss",
// '*' keeps the original character (multiplication/division signs).
inline constexpr std::string_view kLatin1Fold =
    "aaaaaa&ceeeeiiii"
    "dnooooo*ouuuuyTS"
    "aaaaaa&ceeeeiiii"
    "dnooooo*ouuuuyTy";

// ASCII folding for U+0100..U+017F. '#' -> "ij", '%' -> "oe".
inline constexpr std::string_view kLatinExtAFold =
    "aaaaaa" "cccccccc" "dddd" "eeeeeeeeee" "gggggggg" "hhhh" "iiiiiiiiii"
    "##" "jj" "kkk" "llllllllll" "nnnnnnnnn" "oooooo" "%%" "rrrrrr"
    "ssssssss" "tttttt" "uuuuuuuuuuuu" "ww" "yyy" "zzzzzz" "s";

static_assert(kLatin1Fold.size() == 64);
static_assert(kLatinExtAFold.size() == 128);

inline void append_folded(std::string& out, char folded, std::string_view original) {
  switch (folded) {
    case '&': out += "ae"; break;
    case 'T': out += "th"; break;
    case 'S': out += "ss"; break;
    case '#': out += "ij"; break;
    case '%': out += "oe"; break;
    case '*': out += original; break;
    default: out += folded; break;
  }
}

// Lowercases ASCII and folds Latin-1 / Latin Extended-A letters to ASCII.
// Any other byte sequence is passed through unchanged.
inline std::string fold_to_ascii_lower(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  for (std::size_t i = 0; i < in.size();) {
    const auto b0 = static_cast<unsigned char>(in[i]);
    if (b0 < 0x80) {
      out += (b0 >= 'A' && b0 <= 'Z') ? static_cast<char>(b0 - 'A' + 'a') : static_cast<char>(b0);
      ++i;
      continue;
    }
    if ((b0 & 0xE0) == 0xC0 && i + 1 < in.size()) {
      const auto b1 = static_cast<unsigned char>(in[i + 1]);
      if ((b1 & 0xC0) == 0x80) {
        const unsigned cp = ((b0 & 0x1Fu) << 6) | (b1 & 0x3Fu);
        const std::string_view original = in.substr(i, 2);
        if (cp >= 0xC0 && cp <= 0xFF) {
          append_folded(out, kLatin1Fold[cp - 0xC0], original);
        } else if (cp >= 0x100 && cp <= 0x17F) {
          append_folded(out, kLatinExtAFold[cp - 0x100], original);
        } else {
          out += original;
        }
        i += 2;
        continue;
      }
    }
    out += static_cast<char>(b0);
    ++i;
  }
  return out;
}

inline std::string collapse_spaces(std::string_view in) {
  std::string out;
  bool pending_space = false;
  for (char c : in) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

}  // namespace detail

/// Normalized author identity used for self-citation matching.
///
/// The surname is lowercased, diacritics are folded to ASCII where a mapping
/// exists, and whitespace is collapsed. Initials are normalized the same way
/// with periods, spaces and hyphens removed, so "J.-P." and "jp" compare equal.
class AuthorKey {
public:
  AuthorKey(std::string_view surname, std::string_view initials)
      : surname_(normalize_surname(surname)), initials_(normalize_initials(initials)) {
    if (surname_.empty()) throw std::invalid_argument("author surname must not be empty");
  }

  static std::string normalize_surname(std::string_view s) {
    return detail::collapse_spaces(detail::fold_to_ascii_lower(s));
  }

  static std::string normalize_initials(std::string_view s) {
    std::string folded = detail::fold_to_ascii_lower(s);
    std::erase_if(folded, [](char c) {
      return c == '.' || c == ' ' || c == '-' || c == '\t' || c == '\n' || c == '\r';
    });
    return folded;
  }

  const std::string& surname() const { return surname_; }
  const std::string& initials() const { return initials_; }

  std::string display() const { return initials_.empty() ? surname_ : surname_ + "-" + initials_; }

  friend auto operator<=>(const AuthorKey&, const AuthorKey&) = default;
  friend bool operator==(const AuthorKey&, const AuthorKey&) = default;

private:
  std::string surname_;
  std::string initials_;
};

struct TargetAuthor {
  AuthorKey key;
  std::set<AuthorKey> name_variants;
  std::optional<Year> career_start_year;
  // Derived from the citing records; see make_dataset.
  std::optional<Year> first_citation_year;

  TargetAuthor(AuthorKey k, std::set<AuthorKey> variants = {},
               std::optional<Year> career_start = std::nullopt)
      : key(std::move(k)), name_variants(std::move(variants)), career_start_year(career_start) {
    name_variants.insert(key);
  }

  friend bool operator==(const TargetAuthor&, const TargetAuthor&) = default;
};

struct Publication {
  PublicationId id;
  Year year = 0;
  std::string doc_type;
  std::optional<std::string> label;

  friend bool operator==(const Publication&, const Publication&) = default;
};

struct CitingRecord {
  RecordId id;
  Year year = 0;
  std::set<AuthorKey> authors;
  std::set<PublicationId> cited_target_pub_ids;
  std::string doc_type;

  friend bool operator==(const CitingRecord&, const CitingRecord&) = default;
};

struct CitationDataset {
  TargetAuthor target;
  std::vector<Publication> publications;
  std::vector<CitingRecord> citing_records;

  const Publication* find_publication(std::string_view id) const {
    auto it = std::find_if(publications.begin(), publications.end(),
                           [&](const Publication& p) { return p.id == id; });
    return it == publications.end() ? nullptr : &*it;
  }

  friend bool operator==(const CitationDataset&, const CitationDataset&) = default;
};

inline std::optional<Year> earliest_citing_year(const std::vector<CitingRecord>& records) {
  std::optional<Year> first;
  for (const auto& r : records)
    if (!first || r.year < *first) first = r.year;
  return first;
}

/// Assembles a dataset and fills in the target's derived first_citation_year.
inline CitationDataset make_dataset(TargetAuthor target, std::vector<Publication> publications,
                                    std::vector<CitingRecord> records) {
  target.first_citation_year = earliest_citing_year(records);
  return CitationDataset{std::move(target), std::move(publications), std::move(records)};
}

/// Citing-publication counts per calendar year. Years not present count as 0.
class YearlyCitingCounts {
public:
  using Map = std::map<Year, std::int64_t>;

  YearlyCitingCounts() = default;
  explicit YearlyCitingCounts(Map counts) : counts_(std::move(counts)) { check(); }
  YearlyCitingCounts(std::initializer_list<Map::value_type> counts) : counts_(counts) { check(); }

  std::int64_t at(Year y) const {
    auto it = counts_.find(y);
    return it == counts_.end() ? 0 : it->second;
  }

  void add(Year y, std::int64_t n = 1) {
    if (n < 0) throw std::invalid_argument("negative citing count increment");
    counts_[y] += n;
  }

  std::int64_t total() const {
    std::int64_t sum = 0;
    for (const auto& [_, n] : counts_) sum += n;
    return sum;
  }

  // Earliest / latest year carrying a non-zero count.
  std::optional<Year> first_nonzero_year() const {
    for (const auto& [y, n] : counts_)
      if (n > 0) return y;
    return std::nullopt;
  }
  std::optional<Year> last_nonzero_year() const {
    for (auto it = counts_.rbegin(); it != counts_.rend(); ++it)
      if (it->second > 0) return it->first;
    return std::nullopt;
  }

  const Map& map() const { return counts_; }
  bool empty() const { return counts_.empty(); }

  friend bool operator==(const YearlyCitingCounts& a, const YearlyCitingCounts& b) {
    // Explicit zeros and absent years are equivalent.
    auto nonzero = [](const Map& m) {
      Map out;
      for (const auto& [y, n] : m)
        if (n != 0) out.emplace(y, n);
      return out;
    };
    return nonzero(a.counts_) == nonzero(b.counts_);
  }

private:
  void check() const {
    for (const auto& [year, n] : counts_)
      if (n < 0) throw std::invalid_argument("negative citing count for year " + std::to_string(year));
  }

  Map counts_;
};

// --- validation -------------------------------------------------------------

enum class Severity { Warning, Error };

struct Finding {
  Severity severity;
  std::string message;

  friend bool operator==(const Finding&, const Finding&) = default;
};

inline Year current_calendar_year() {
  const auto today = std::chrono::floor<std::chrono::days>(std::chrono::system_clock::now());
  return static_cast<int>(std::chrono::year_month_day{today}.year());
}

inline constexpr Year kEarliestPublicationYear = 1800;

/// Checks the dataset invariants. Returns an empty list iff they all hold.
///
/// Errors: duplicate publication or record ids, a record with no cited
/// publications, a cited id that does not resolve, the target key missing
/// from its name variants, years outside [1800, current_year + 1].
/// Warnings: a record older than one of the publications it cites, and a
/// career start year later than first citation year + 1.
inline std::vector<Finding> validate_dataset(const CitationDataset& ds,
                                             Year current_year = current_calendar_year()) {
  std::vector<Finding> findings;
  auto error = [&](std::string m) { findings.push_back({Severity::Error, std::move(m)}); };
  auto warning = [&](std::string m) { findings.push_back({Severity::Warning, std::move(m)}); };
  auto year_ok = [&](Year y) { return y >= kEarliestPublicationYear && y <= current_year + 1; };

  if (!ds.target.name_variants.contains(ds.target.key))
    error("target key '" + ds.target.key.display() + "' is not among its name variants");

  std::unordered_map<std::string_view, Year> pub_years;
  for (const auto& p : ds.publications) {
    if (!pub_years.emplace(p.id, p.year).second) error("duplicate publication id '" + p.id + "'");
    if (!year_ok(p.year))
      error("publication '" + p.id + "' has year " + std::to_string(p.year) + " outside [" +
            std::to_string(kEarliestPublicationYear) + ", " + std::to_string(current_year + 1) + "]");
  }

  std::unordered_set<std::string_view> record_ids;
  for (const auto& r : ds.citing_records) {
    if (!record_ids.insert(r.id).second) error("duplicate citing record id '" + r.id + "'");
    if (!year_ok(r.year))
      error("citing record '" + r.id + "' has year " + std::to_string(r.year) + " outside [" +
            std::to_string(kEarliestPublicationYear) + ", " + std::to_string(current_year + 1) + "]");
    if (r.cited_target_pub_ids.empty()) {
      error("citing record '" + r.id + "' cites no target publication");
      continue;
    }
    std::vector<std::string> newer;
    for (const auto& pid : r.cited_target_pub_ids) {
      auto it = pub_years.find(pid);
      if (it == pub_years.end()) {
        error("citing record '" + r.id + "' references unknown publication id '" + pid + "'");
      } else if (it->second > r.year) {
        newer.push_back(pid);
      }
    }
    if (!newer.empty()) {
      std::string list;
      for (const auto& pid : newer) list += (list.empty() ? "'" : ", '") + pid + "'";
      warning("citing record '" + r.id + "' (" + std::to_string(r.year) +
              ") predates cited publication(s) " + list);
    }
  }

  const auto first = earliest_citing_year(ds.citing_records);
  if (ds.target.career_start_year && first && *ds.target.career_start_year > *first + 1)
    warning("career start year " + std::to_string(*ds.target.career_start_year) +
            " is later than the first citation year " + std::to_string(*first));

  return findings;
}

inline bool has_errors(const std::vector<Finding>& findings) {
  return std::any_of(findings.begin(), findings.end(),
                     [](const Finding& f) { return f.severity == Severity::Error; });
}

inline std::string_view to_string(Severity s) { return s == Severity::Error ? "ERROR" : "WARNING"; }

}  // namespace vitality
