#include "fss/normalize.hpp"

#include <fstream>

#include "fss/csv.hpp"
#include "fss/error.hpp"

namespace fss {

void BaselineTable::set(const BaselineKey& key, BaselineEntry entry) {
  if (!(entry.c_bar > 0.0)) {
    throw InputError("baseline for (" + std::to_string(key.year) + ", " + key.category + ") must be positive");
  }
  entries_[key] = entry;
}

std::optional<BaselineEntry> BaselineTable::find(const BaselineKey& key) const {
  if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  return std::nullopt;
}

BaselineTable compute_baselines(const Corpus& corpus) {
  // Integer sums keep the mean exact and independent of visiting order.
  std::map<BaselineKey, std::pair<std::int64_t, std::int64_t>> sums;
  for (const auto& p : corpus.publications) {
    if (p.citations < 1) continue;
    for (const auto& cat : p.subject_categories) {
      auto& [total, count] = sums[BaselineKey{p.year, cat}];
      total += p.citations;
      ++count;
    }
  }
  BaselineTable table;
  for (const auto& [key, s] : sums) {
    table.set(key, BaselineEntry{static_cast<double>(s.first) / static_cast<double>(s.second), s.second});
  }
  return table;
}

double normalized_impact(const Publication& pub, const BaselineTable& baselines) {
  if (pub.citations == 0) return 0.0;
  double sum = 0.0;
  for (const auto& cat : pub.subject_categories) {
    auto entry = baselines.find(BaselineKey{pub.year, cat});
    if (!entry) {
      throw ComputationError("no citation baseline for (" + std::to_string(pub.year) + ", " + cat +
                             ") needed by publication '" + pub.id + "'");
    }
    sum += static_cast<double>(pub.citations) / entry->c_bar;
  }
  return sum / static_cast<double>(pub.subject_categories.size());
}

BaselineTable read_baselines(const std::filesystem::path& path) {
  auto table = csv::read_file(path);
  const auto c_year = table.column("year");
  const auto c_cat = table.column("category");
  const auto c_bar = table.column("c_bar");
  const auto c_n = table.find_column("n_cited");
  BaselineTable out;
  for (const auto& row : table.rows()) {
    BaselineKey key{static_cast<int>(table.integer(row, c_year)), table.text(row, c_cat)};
    if (key.category.empty()) table.fail(row, c_cat, "empty category");
    BaselineEntry entry{table.real(row, c_bar), c_n ? table.integer(row, *c_n) : 0};
    if (!(entry.c_bar > 0.0)) table.fail(row, c_bar, "c_bar must be positive");
    if (out.find(key)) table.fail(row, c_cat, "duplicate baseline key");
    out.set(key, entry);
  }
  return out;
}

void write_baselines(const BaselineTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path.string() + ": cannot open for writing");
  out << "year,category,c_bar,n_cited\n";
  for (const auto& [key, entry] : table.entries()) {
    std::vector<std::string> row{std::to_string(key.year), key.category, csv::format_number(entry.c_bar),
                                 std::to_string(entry.n_cited)};
    csv::write_row(out, row);
  }
}

}  // namespace fss
