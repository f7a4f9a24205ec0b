#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fss/indicators.hpp"

namespace fss {

struct RankedEntry {
  std::string unit_id;
  double score = 0.0;
  int rank = 0;             // 1 = best; tied scores share the smallest rank
  double percentile = 0.0;  // 100 * share of units with a strictly lower score
};

// Entries ordered by descending score, ties by unit id.
struct RankedList {
  std::vector<RankedEntry> entries;
  std::string tie_policy = "competition";
};

RankedList percentile_rank(std::span<const ScoreEntry> scores);

// Each score divided by the productive-unit mean of its group, then ranked.
// Supported for FSS_R (researcher) and FSS_S (sds) score sets.
RankedList standardized_list(const ScoreSet& scores, const FieldMeans& means);

struct ComparisonStats {
  std::size_t n_units = 0;
  double pct_shifting = 0.0;
  double avg_shift = 0.0;
  double median_shift = 0.0;
  int max_shift = 0;
  double spearman = 0.0;
  double top_quartile_exit = 0.0;
};

std::size_t top_quartile_size(std::size_t n);

// 1-based ranks with ties replaced by their average rank.
std::vector<double> average_ranks(std::span<const double> values);

// Pearson correlation of average ranks. Two constant inputs correlate 1,
// one constant input against a varying one correlates 0.
double spearman(std::span<const double> x, std::span<const double> y);

ComparisonStats compare_rankings(const RankedList& a, const RankedList& b);

// Count of units per absolute rank shift between two rankings.
std::map<int, int> shift_histogram(const RankedList& a, const RankedList& b);

struct PercentileAggregate {
  std::vector<ScoreEntry> entries;  // unit id -> mean member percentile
  std::string warning;
};

// Averages each member's within-group percentile per unit. Percentiles are
// ordinal, so the result carries a warning; prefer standardized averages.
PercentileAggregate average_percentiles(const ScoreSet& researcher_scores,
                                        const std::map<std::string, std::vector<std::string>>& unit_members);

RankedList read_ranking(const std::filesystem::path& path);
void write_ranking(const RankedList& list, const std::filesystem::path& path);

}  // namespace fss
