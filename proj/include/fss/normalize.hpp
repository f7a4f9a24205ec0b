#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "fss/corpus.hpp"

namespace fss {

struct BaselineKey {
  int year = 0;
  std::string category;
  auto operator<=>(const BaselineKey&) const = default;
};

struct BaselineEntry {
  double c_bar = 0.0;        // mean citations over cited publications
  std::int64_t n_cited = 0;  // publications with at least one citation
};

// Citation scaling factors by (year, subject category). Keys whose cohort
// has no cited publication are absent.
class BaselineTable {
 public:
  void set(const BaselineKey& key, BaselineEntry entry);
  std::optional<BaselineEntry> find(const BaselineKey& key) const;
  const std::map<BaselineKey, BaselineEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<BaselineKey, BaselineEntry> entries_;
};

BaselineTable compute_baselines(const Corpus& corpus);

// c_i / c_bar, averaged without weights over the publication's categories.
double normalized_impact(const Publication& pub, const BaselineTable& baselines);

BaselineTable read_baselines(const std::filesystem::path& path);
void write_baselines(const BaselineTable& table, const std::filesystem::path& path);

}  // namespace fss
