#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fss/corpus.hpp"
#include "fss/credit.hpp"
#include "fss/normalize.hpp"

namespace fss {

enum class Level { researcher, sds, department, university_uda, university_total, region, country };

std::string to_string(Level level);
Level parse_level(const std::string& text);

struct ScoreEntry {
  std::string unit_id;
  std::string group;  // ranking partition: sds, uda, or "all"
  double value = 0.0;
};

struct ScoreSet {
  Level level = Level::researcher;
  std::string indicator;  // FSS_R, FSS_S, FSS_D, FSS_U, P_U, FP_U
  std::vector<ScoreEntry> entries;
};

// One researcher's share of one publication.
struct Contribution {
  std::size_t publication = 0;
  double credit = 0.0;  // f_i
  double impact = 0.0;  // c_i / c_bar
};

// Per-researcher contribution lists and per-publication impacts, built once
// from an immutable corpus.
class ScoringContext {
 public:
  ScoringContext(const Corpus& corpus, const BaselineTable& baselines, const SchemeBook& schemes, int threads = 1);

  const Corpus& corpus() const { return *corpus_; }
  std::span<const Contribution> contributions(std::size_t researcher) const { return contributions_[researcher]; }
  double impact(std::size_t publication) const { return impacts_[publication]; }

 private:
  const Corpus* corpus_;
  std::vector<double> impacts_;
  std::vector<std::vector<Contribution>> contributions_;
};

// salary_per_year * years_in_window
double labor_cost(const Researcher& researcher);

// (1 / w_R) (1 / t) sum_i (c_i / c_bar) f_i over the researcher's publications.
double fss_r(const ScoringContext& ctx, std::size_t researcher);

// Publications per year of work (Q) and fractional publications per year (FQ).
double annual_output(const ScoringContext& ctx, std::size_t researcher);
double annual_fractional_output(const ScoringContext& ctx, std::size_t researcher);

// Field productivity of a group of researchers (one SDS of one unit): summed
// impact-weighted credit over total labor cost of the group. Co-authors in the
// group share a single term per publication.
double fss_s(const ScoringContext& ctx, std::span<const std::size_t> staff);

// Mean over strictly positive values; nullopt when there are none.
std::optional<double> positive_mean(std::span<const double> values);
// Weighted mean over entries with strictly positive value.
std::optional<double> positive_weighted_mean(std::span<const double> values, std::span<const double> weights);

struct ResearcherOutput {
  double fss_r = 0.0;
  double q = 0.0;
  double fq = 0.0;
};

struct SdsUnit {
  std::string institution;
  std::string sds;
  std::string uda;
  std::vector<std::size_t> staff;
  double labor_cost = 0.0;
  double fss_s = 0.0;
};

struct FieldMeans {
  std::map<std::string, double> fss_r;  // mean FSS_R of productive researchers
  std::map<std::string, double> fss_s;  // labor-cost weighted mean FSS_S of productive units
  std::map<std::string, double> q;
  std::map<std::string, double> fq;
};

FieldMeans field_means(const Corpus& corpus, std::span<const ResearcherOutput> researchers,
                       std::span<const SdsUnit> units);

// (1 / RS) sum_j value_j / mean(sds_j). Serves FSS_D (value = FSS_R), P_U
// (value = Q) and FP_U (value = FQ).
double standardized_average(const Corpus& corpus, std::span<const std::size_t> members,
                            std::span<const double> values, const std::map<std::string, double>& means,
                            const char* indicator);

double fss_d(const Corpus& corpus, std::span<const std::size_t> members, std::span<const ResearcherOutput> outputs,
             const FieldMeans& means);
double p_u(const Corpus& corpus, std::span<const std::size_t> members, std::span<const ResearcherOutput> outputs,
           const FieldMeans& means);
double fp_u(const Corpus& corpus, std::span<const std::size_t> members, std::span<const ResearcherOutput> outputs,
            const FieldMeans& means);

struct FieldShare {
  std::string sds;
  double fss_s = 0.0;
  double labor_cost = 0.0;
};

// w_Sk / w_U for each share.
std::vector<double> size_weights(std::span<const FieldShare> shares);

// sum_k (FSS_Sk / mean FSS_S(k)) (w_Sk / w_U) over the unit's fields.
double fss_u(std::span<const FieldShare> shares, const std::map<std::string, double>& fss_s_means);

// Cumulative aggregation depth: each scope also emits the narrower ones.
enum class Scope { sds, department, university, region, country };

std::string to_string(Scope scope);
Scope parse_scope(const std::string& text);

struct IndicatorOptions {
  Scope scope = Scope::university;
  int threads = 1;
  std::map<std::string, std::string> regions;  // institution -> region, required for Scope::region
};

struct IndicatorResults {
  std::vector<ResearcherOutput> researchers;
  std::vector<SdsUnit> sds_units;
  FieldMeans means;
  std::vector<ScoreSet> sets;
};

IndicatorResults compute_indicators(const ScoringContext& ctx, const IndicatorOptions& options);

}  // namespace fss
