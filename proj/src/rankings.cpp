#include "fss/rankings.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <unordered_map>

#include "fss/csv.hpp"
#include "fss/error.hpp"

namespace fss {

RankedList percentile_rank(std::span<const ScoreEntry> scores) {
  if (scores.empty()) throw InputError("cannot rank an empty score set");
  RankedList list;
  list.entries.reserve(scores.size());
  for (const auto& s : scores) list.entries.push_back(RankedEntry{s.unit_id, s.value, 0, 0.0});
  std::sort(list.entries.begin(), list.entries.end(), [](const RankedEntry& x, const RankedEntry& y) {
    if (x.score != y.score) return x.score > y.score;
    return x.unit_id < y.unit_id;
  });
  const std::size_t n = list.entries.size();
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && list.entries[j].score == list.entries[i].score) ++j;
    // Everything after the tie block scores strictly lower.
    const double pct = 100.0 * static_cast<double>(n - j) / static_cast<double>(n);
    for (std::size_t k = i; k < j; ++k) {
      list.entries[k].rank = static_cast<int>(i + 1);
      list.entries[k].percentile = pct;
    }
    i = j;
  }
  return list;
}

RankedList standardized_list(const ScoreSet& scores, const FieldMeans& means) {
  const std::map<std::string, double>* table = nullptr;
  if (scores.indicator == "FSS_R") table = &means.fss_r;
  if (scores.indicator == "FSS_S") table = &means.fss_s;
  if (!table) throw InputError("no field mean defined for indicator " + scores.indicator);
  std::vector<ScoreEntry> standardized;
  standardized.reserve(scores.entries.size());
  for (const auto& e : scores.entries) {
    auto it = table->find(e.group);
    if (it == table->end() || !(it->second > 0.0)) {
      throw ComputationError("no positive field mean for '" + e.group + "' (unit " + e.unit_id + ")");
    }
    standardized.push_back(ScoreEntry{e.unit_id, e.group, e.value / it->second});
  }
  return percentile_rank(standardized);
}

std::size_t top_quartile_size(std::size_t n) { return (n + 3) / 4; }

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
    i = j;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ComputationError("spearman: inputs differ in length");
  const std::size_t n = x.size();
  if (n == 0) throw ComputationError("spearman: empty input");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double mean = (static_cast<double>(n) + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 && syy == 0.0) return 1.0;
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

struct Aligned {
  std::vector<int> rank_a, rank_b;
  std::vector<double> score_a, score_b;
};

Aligned align(const RankedList& a, const RankedList& b) {
  std::unordered_map<std::string, const RankedEntry*> in_b;
  for (const auto& e : b.entries) {
    if (!in_b.emplace(e.unit_id, &e).second) throw InputError("duplicate unit '" + e.unit_id + "' in ranking");
  }
  std::set<std::string> only_a, only_b, seen_a;
  Aligned out;
  for (const auto& e : a.entries) {
    if (!seen_a.insert(e.unit_id).second) throw InputError("duplicate unit '" + e.unit_id + "' in ranking");
    auto it = in_b.find(e.unit_id);
    if (it == in_b.end()) {
      only_a.insert(e.unit_id);
      continue;
    }
    out.rank_a.push_back(e.rank);
    out.rank_b.push_back(it->second->rank);
    out.score_a.push_back(e.score);
    out.score_b.push_back(it->second->score);
  }
  for (const auto& e : b.entries) {
    if (!seen_a.count(e.unit_id)) only_b.insert(e.unit_id);
  }
  if (!only_a.empty() || !only_b.empty()) {
    std::string msg = "rankings cover different units;";
    for (const auto& id : only_a) msg += " -" + id;
    for (const auto& id : only_b) msg += " +" + id;
    throw InputError(msg);
  }
  return out;
}

}  // namespace

ComparisonStats compare_rankings(const RankedList& a, const RankedList& b) {
  Aligned al = align(a, b);
  const std::size_t n = al.rank_a.size();
  if (n == 0) throw InputError("cannot compare empty rankings");
  ComparisonStats stats;
  stats.n_units = n;
  std::vector<int> shifts(n);
  std::size_t moved = 0;
  long long total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    shifts[i] = std::abs(al.rank_a[i] - al.rank_b[i]);
    moved += shifts[i] > 0 ? 1 : 0;
    total += shifts[i];
    stats.max_shift = std::max(stats.max_shift, shifts[i]);
  }
  stats.pct_shifting = 100.0 * static_cast<double>(moved) / static_cast<double>(n);
  stats.avg_shift = static_cast<double>(total) / static_cast<double>(n);
  std::sort(shifts.begin(), shifts.end());
  stats.median_shift = n % 2 ? shifts[n / 2] : (shifts[n / 2 - 1] + shifts[n / 2]) / 2.0;
  stats.spearman = spearman(al.score_a, al.score_b);

  const std::size_t q = top_quartile_size(n);
  std::set<std::string> top_b;
  for (std::size_t i = 0; i < q; ++i) top_b.insert(b.entries[i].unit_id);
  std::size_t exits = 0;
  for (std::size_t i = 0; i < q; ++i) exits += top_b.count(a.entries[i].unit_id) ? 0 : 1;
  stats.top_quartile_exit = 100.0 * static_cast<double>(exits) / static_cast<double>(q);
  return stats;
}

std::map<int, int> shift_histogram(const RankedList& a, const RankedList& b) {
  Aligned al = align(a, b);
  std::map<int, int> hist;
  for (std::size_t i = 0; i < al.rank_a.size(); ++i) ++hist[std::abs(al.rank_a[i] - al.rank_b[i])];
  return hist;
}

PercentileAggregate average_percentiles(const ScoreSet& researcher_scores,
                                        const std::map<std::string, std::vector<std::string>>& unit_members) {
  std::map<std::string, std::vector<ScoreEntry>> groups;
  for (const auto& e : researcher_scores.entries) groups[e.group].push_back(e);
  std::unordered_map<std::string, double> percentile;
  for (const auto& [group, entries] : groups) {
    for (const auto& r : percentile_rank(entries).entries) percentile[r.unit_id] = r.percentile;
  }
  PercentileAggregate out;
  out.warning =
      "percentile ranks are ordinal and do not measure equal intervals; averaging them across fields "
      "compresses differences and depends on field sizes. Prefer the standardized (ratio-to-mean) aggregate.";
  for (const auto& [unit, members] : unit_members) {
    if (members.empty()) continue;
    double sum = 0.0;
    for (const auto& id : members) {
      auto it = percentile.find(id);
      if (it == percentile.end()) throw InputError("unit '" + unit + "' lists unscored researcher '" + id + "'");
      sum += it->second;
    }
    out.entries.push_back(ScoreEntry{unit, "all", sum / static_cast<double>(members.size())});
  }
  return out;
}

RankedList read_ranking(const std::filesystem::path& path) {
  auto table = csv::read_file(path);
  const auto c_id = table.column("unit_id");
  const auto c_score = table.column("score");
  const auto c_rank = table.column("rank");
  const auto c_pct = table.column("percentile");
  RankedList list;
  for (const auto& row : table.rows()) {
    RankedEntry e;
    e.unit_id = table.text(row, c_id);
    if (e.unit_id.empty()) table.fail(row, c_id, "empty unit id");
    e.score = table.real(row, c_score);
    e.rank = static_cast<int>(table.integer(row, c_rank));
    if (e.rank < 1) table.fail(row, c_rank, "rank must be >= 1");
    e.percentile = table.real(row, c_pct);
    if (e.percentile < 0.0 || e.percentile > 100.0) table.fail(row, c_pct, "percentile outside [0, 100]");
    if (!list.entries.empty()) {
      const auto& prev = list.entries.back();
      if (e.score > prev.score || e.rank < prev.rank) table.fail(row, c_rank, "entries not sorted best to worst");
    }
    list.entries.push_back(std::move(e));
  }
  if (list.entries.empty()) throw InputError(path.string() + ": ranking has no entries");
  return list;
}

void write_ranking(const RankedList& list, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path.string() + ": cannot open for writing");
  out << "unit_id,score,rank,percentile\n";
  for (const auto& e : list.entries) {
    std::vector<std::string> row{e.unit_id, csv::format_number(e.score), std::to_string(e.rank),
                                 csv::format_number(e.percentile)};
    csv::write_row(out, row);
  }
}

}  // namespace fss
