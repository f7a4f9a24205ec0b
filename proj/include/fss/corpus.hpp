#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace fss {

// Co-authorship convention declared per field in the taxonomy.
enum class Convention { alphabetical, position_weighted };

std::string to_string(Convention c);
Convention parse_convention(const std::string& text);

struct Researcher {
  std::string id;
  std::string name;
  std::string sds;
  std::string uda;  // derived from the taxonomy at load time
  std::string rank;
  std::optional<double> explicit_salary;  // overrides the schedule when present
  double salary_per_year = 0.0;           // resolved salary (explicit or schedule)
  std::string institution;
  std::string department;  // empty when not declared
  double years_in_window = 0.0;
};

struct Authorship {
  int position = 0;  // 1-based byline position
  std::optional<std::string> researcher_id;  // absent for authors outside the census
  std::string institution;
};

struct Publication {
  std::string id;
  int year = 0;
  std::vector<std::string> subject_categories;
  std::int64_t citations = 0;
  std::vector<Authorship> byline;  // ordered by position
};

struct FieldEntry {
  std::string uda;
  Convention convention = Convention::alphabetical;
};

struct FieldTaxonomy {
  std::map<std::string, FieldEntry> sds;
};

// National salary averages keyed by (rank, seniority band). An empty band is
// the rank-wide value.
class SalarySchedule {
 public:
  void set(const std::string& rank, const std::string& band, double salary_per_year);

  // Rank-wide entry when present, otherwise the mean over the rank's bands.
  std::optional<double> lookup(const std::string& rank) const;
  std::optional<double> lookup(const std::string& rank, const std::string& band) const;

  const std::map<std::pair<std::string, std::string>, double>& entries() const { return entries_; }

 private:
  std::map<std::pair<std::string, std::string>, double> entries_;
};

struct ObservationWindow {
  int start_year = 2006;
  int end_year = 2010;
  bool contains(int year) const { return year >= start_year && year <= end_year; }
};

struct Corpus {
  std::vector<Researcher> researchers;
  std::vector<Publication> publications;
  FieldTaxonomy taxonomy;
  SalarySchedule salaries;
  ObservationWindow window;
  std::string citation_cutoff = "2011-12-31";

  // Groups left out of rankings by apply_exclusions.
  std::set<std::pair<std::string, std::string>> excluded_uda_groups;  // (institution, uda)
  std::set<std::string> excluded_institutions;

  // Position of a researcher id in `researchers`, or nullopt.
  std::optional<std::size_t> find_researcher(const std::string& id) const;
  void rebuild_index();

 private:
  std::unordered_map<std::string, std::size_t> index_;
};

bool operator==(const Researcher&, const Researcher&);
bool operator==(const Authorship&, const Authorship&);
bool operator==(const Publication&, const Publication&);

struct CorpusPaths {
  std::filesystem::path researchers;
  std::filesystem::path publications;
  std::filesystem::path bylines;
  std::filesystem::path taxonomy;
  std::filesystem::path salaries;

  // Conventional file names inside one directory.
  static CorpusPaths in_directory(const std::filesystem::path& dir);
};

struct LoadOptions {
  ObservationWindow window;
  std::string citation_cutoff = "2011-12-31";
};

struct LoadReport {
  std::size_t researchers = 0;
  std::size_t publications = 0;
  std::size_t authorships = 0;
  std::size_t external_authorships = 0;
  std::vector<std::string> warnings;
};

struct LoadResult {
  Corpus corpus;
  LoadReport report;
};

LoadResult load_corpus(const CorpusPaths& paths, const LoadOptions& options);

// Writes the five canonical CSV files; load_corpus on the result reproduces
// the same corpus.
void export_corpus(const Corpus& corpus, const CorpusPaths& paths);

double resolve_salary(const Researcher& researcher, const SalarySchedule& schedule);

struct ExclusionThresholds {
  double min_years = 3.0;
  int min_staff_uda = 10;
  int min_staff_total = 30;
};

struct ExclusionReport {
  std::vector<std::string> excluded_researchers;
  std::vector<std::pair<std::string, std::string>> excluded_uda_groups;
  std::vector<std::string> excluded_institutions;
};

struct ExclusionResult {
  Corpus corpus;
  ExclusionReport report;
};

// Drops researchers with too few years in the window (their byline entries
// become external authors) and marks small (institution, UDA) groups and
// small institutions as excluded from the corresponding rankings.
ExclusionResult apply_exclusions(const Corpus& corpus, const ExclusionThresholds& thresholds);

struct SyntheticParams {
  int researchers = 100;
  int sds_count = 4;
  int uda_count = 2;
  int institutions = 8;
  int departments_per_institution = 2;
  int categories_per_sds = 2;
  ObservationWindow window;
  // Researchers that publish draw their count of led papers k from
  // P(k) proportional to k^-lotka_exponent on 1..max_papers.
  double lotka_exponent = 2.0;
  int max_papers = 60;
  double inactive_share = 0.1;
  // Mean citations of a category is base * (1 + index mod 4); each category
  // gets a different intensity.
  double citation_intensity = 8.0;
  double uncited_share = 0.2;
  double census_coauthor_prob = 0.3;  // chance of adding a same-unit coauthor
  double external_coauthors_mean = 2.0;
  double position_weighted_share = 0.5;  // share of SDSs using byline order
  double short_tenure_share = 0.1;       // researchers with fewer years than the window
};

Corpus generate_synthetic_corpus(std::uint64_t seed, const SyntheticParams& params);

}  // namespace fss
