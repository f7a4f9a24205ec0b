#include "fss/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "fss/csv.hpp"
#include "fss/error.hpp"

namespace fss {

std::string to_string(Convention c) {
  return c == Convention::alphabetical ? "alphabetical" : "position_weighted";
}

Convention parse_convention(const std::string& text) {
  if (text == "alphabetical") return Convention::alphabetical;
  if (text == "position_weighted") return Convention::position_weighted;
  throw InputError("unknown co-authorship convention '" + text + "'");
}

void SalarySchedule::set(const std::string& rank, const std::string& band, double salary_per_year) {
  entries_[{rank, band}] = salary_per_year;
}

std::optional<double> SalarySchedule::lookup(const std::string& rank, const std::string& band) const {
  if (auto it = entries_.find({rank, band}); it != entries_.end()) return it->second;
  return std::nullopt;
}

std::optional<double> SalarySchedule::lookup(const std::string& rank) const {
  if (auto exact = lookup(rank, "")) return exact;
  double sum = 0.0;
  int count = 0;
  for (auto it = entries_.lower_bound({rank, ""}); it != entries_.end() && it->first.first == rank; ++it) {
    sum += it->second;
    ++count;
  }
  if (count == 0) return std::nullopt;
  return sum / count;
}

std::optional<std::size_t> Corpus::find_researcher(const std::string& id) const {
  if (index_.size() == researchers.size()) {
    if (auto it = index_.find(id); it != index_.end()) return it->second;
    return std::nullopt;
  }
  // Stale index (researchers edited without rebuild_index); stay read-only.
  for (std::size_t i = 0; i < researchers.size(); ++i) {
    if (researchers[i].id == id) return i;
  }
  return std::nullopt;
}

void Corpus::rebuild_index() {
  index_.clear();
  index_.reserve(researchers.size());
  for (std::size_t i = 0; i < researchers.size(); ++i) index_.emplace(researchers[i].id, i);
}

bool operator==(const Researcher& a, const Researcher& b) {
  return a.id == b.id && a.name == b.name && a.sds == b.sds && a.uda == b.uda && a.rank == b.rank &&
         a.explicit_salary == b.explicit_salary && a.salary_per_year == b.salary_per_year &&
         a.institution == b.institution && a.department == b.department &&
         a.years_in_window == b.years_in_window;
}

bool operator==(const Authorship& a, const Authorship& b) {
  return a.position == b.position && a.researcher_id == b.researcher_id && a.institution == b.institution;
}

bool operator==(const Publication& a, const Publication& b) {
  return a.id == b.id && a.year == b.year && a.subject_categories == b.subject_categories &&
         a.citations == b.citations && a.byline == b.byline;
}

CorpusPaths CorpusPaths::in_directory(const std::filesystem::path& dir) {
  return {dir / "researchers.csv", dir / "publications.csv", dir / "bylines.csv", dir / "taxonomy.csv",
          dir / "salaries.csv"};
}

double resolve_salary(const Researcher& researcher, const SalarySchedule& schedule) {
  if (researcher.explicit_salary) return *researcher.explicit_salary;
  if (auto value = schedule.lookup(researcher.rank)) return *value;
  throw ComputationError("salary schedule has no entry for rank '" + researcher.rank + "'");
}

namespace {

std::vector<std::string> split_categories(const std::string& cell) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= cell.size()) {
    std::size_t end = cell.find(';', start);
    if (end == std::string::npos) end = cell.size();
    std::string item = cell.substr(start, end - start);
    if (!item.empty()) out.push_back(std::move(item));
    start = end + 1;
  }
  return out;
}

FieldTaxonomy load_taxonomy(const std::filesystem::path& path) {
  auto table = csv::read_file(path);
  const auto c_sds = table.column("sds");
  const auto c_uda = table.column("uda");
  const auto c_conv = table.column("convention");
  FieldTaxonomy taxonomy;
  for (const auto& row : table.rows()) {
    const auto& sds = table.text(row, c_sds);
    const auto& uda = table.text(row, c_uda);
    if (sds.empty()) table.fail(row, c_sds, "empty sds code");
    if (uda.empty()) table.fail(row, c_uda, "empty uda code");
    Convention conv{};
    try {
      conv = parse_convention(table.text(row, c_conv));
    } catch (const InputError& e) {
      table.fail(row, c_conv, e.what());
    }
    if (!taxonomy.sds.emplace(sds, FieldEntry{uda, conv}).second) {
      table.fail(row, c_sds, "sds '" + sds + "' mapped more than once");
    }
  }
  return taxonomy;
}

SalarySchedule load_salaries(const std::filesystem::path& path) {
  auto table = csv::read_file(path);
  const auto c_rank = table.column("rank");
  const auto c_band = table.find_column("seniority_band");
  const auto c_salary = table.column("salary_per_year");
  SalarySchedule schedule;
  for (const auto& row : table.rows()) {
    const auto& rank = table.text(row, c_rank);
    if (rank.empty()) table.fail(row, c_rank, "empty rank");
    std::string band = c_band ? table.text(row, *c_band) : std::string();
    double salary = table.real(row, c_salary);
    if (salary <= 0.0) table.fail(row, c_salary, "salary must be positive");
    if (schedule.lookup(rank, band)) table.fail(row, c_rank, "duplicate schedule entry for rank '" + rank + "'");
    schedule.set(rank, band, salary);
  }
  return schedule;
}

}  // namespace

LoadResult load_corpus(const CorpusPaths& paths, const LoadOptions& options) {
  LoadResult result;
  Corpus& corpus = result.corpus;
  LoadReport& report = result.report;
  corpus.window = options.window;
  corpus.citation_cutoff = options.citation_cutoff;
  if (options.window.end_year < options.window.start_year) {
    throw InputError("observation window is empty");
  }

  corpus.taxonomy = load_taxonomy(paths.taxonomy);
  corpus.salaries = load_salaries(paths.salaries);

  {
    auto table = csv::read_file(paths.researchers);
    const auto c_id = table.column("id");
    const auto c_name = table.find_column("name");
    const auto c_sds = table.column("sds");
    const auto c_rank = table.column("rank");
    const auto c_salary = table.find_column("salary");
    const auto c_inst = table.column("institution");
    const auto c_dept = table.find_column("department");
    const auto c_years = table.column("years_in_window");
    std::unordered_set<std::string> seen;
    for (const auto& row : table.rows()) {
      Researcher r;
      r.id = table.text(row, c_id);
      if (r.id.empty()) table.fail(row, c_id, "empty researcher id");
      if (!seen.insert(r.id).second) table.fail(row, c_id, "duplicate researcher id '" + r.id + "'");
      if (c_name) r.name = table.text(row, *c_name);
      r.sds = table.text(row, c_sds);
      auto field = corpus.taxonomy.sds.find(r.sds);
      if (field == corpus.taxonomy.sds.end()) table.fail(row, c_sds, "unknown sds code '" + r.sds + "'");
      r.uda = field->second.uda;
      r.rank = table.text(row, c_rank);
      if (c_salary && !table.text(row, *c_salary).empty()) {
        double s = table.real(row, *c_salary);
        if (s <= 0.0) table.fail(row, *c_salary, "salary must be positive");
        r.explicit_salary = s;
      }
      r.institution = table.text(row, c_inst);
      if (r.institution.empty()) table.fail(row, c_inst, "empty institution");
      if (c_dept) r.department = table.text(row, *c_dept);
      r.years_in_window = table.real(row, c_years);
      if (r.years_in_window <= 0.0) table.fail(row, c_years, "years_in_window must be positive");
      try {
        r.salary_per_year = resolve_salary(r, corpus.salaries);
      } catch (const ComputationError& e) {
        table.fail(row, c_rank, e.what());
      }
      corpus.researchers.push_back(std::move(r));
    }
  }
  corpus.rebuild_index();

  std::unordered_map<std::string, std::size_t> pub_index;
  {
    auto table = csv::read_file(paths.publications);
    const auto c_id = table.column("id");
    const auto c_year = table.column("year");
    const auto c_cit = table.column("citations");
    const auto c_cat = table.column("subject_categories");
    for (const auto& row : table.rows()) {
      Publication p;
      p.id = table.text(row, c_id);
      if (p.id.empty()) table.fail(row, c_id, "empty publication id");
      if (pub_index.count(p.id)) table.fail(row, c_id, "duplicate publication id '" + p.id + "'");
      auto year = table.integer(row, c_year);
      if (!options.window.contains(static_cast<int>(year))) {
        table.fail(row, c_year, "year " + std::to_string(year) + " outside observation window");
      }
      p.year = static_cast<int>(year);
      p.citations = table.integer(row, c_cit);
      if (p.citations < 0) table.fail(row, c_cit, "citations must be nonnegative");
      p.subject_categories = split_categories(table.text(row, c_cat));
      if (p.subject_categories.empty()) table.fail(row, c_cat, "at least one subject category required");
      pub_index.emplace(p.id, corpus.publications.size());
      corpus.publications.push_back(std::move(p));
    }
  }

  {
    auto table = csv::read_file(paths.bylines);
    const auto c_pub = table.column("publication_id");
    const auto c_pos = table.column("position");
    const auto c_rid = table.column("researcher_id");
    const auto c_inst = table.column("institution_id");
    for (const auto& row : table.rows()) {
      const auto& pid = table.text(row, c_pub);
      auto it = pub_index.find(pid);
      if (it == pub_index.end()) table.fail(row, c_pub, "unknown publication id '" + pid + "'");
      Authorship a;
      auto pos = table.integer(row, c_pos);
      if (pos < 1) table.fail(row, c_pos, "position must be >= 1");
      a.position = static_cast<int>(pos);
      a.institution = table.text(row, c_inst);
      if (a.institution.empty()) table.fail(row, c_inst, "empty institution id");
      const auto& rid = table.text(row, c_rid);
      if (!rid.empty()) {
        if (corpus.find_researcher(rid)) {
          a.researcher_id = rid;
        } else {
          report.warnings.push_back(table.source() + ":" + std::to_string(row.line) + ": researcher '" + rid +
                                    "' not in census, treated as external author");
        }
      }
      auto& byline = corpus.publications[it->second].byline;
      for (const auto& other : byline) {
        if (other.position == a.position) table.fail(row, c_pos, "duplicate byline position for '" + pid + "'");
        if (a.researcher_id && other.researcher_id == a.researcher_id) {
          table.fail(row, c_rid, "researcher '" + *a.researcher_id + "' appears twice in byline of '" + pid + "'");
        }
      }
      byline.push_back(std::move(a));
    }
  }

  for (auto& p : corpus.publications) {
    if (p.byline.empty()) throw InputError(paths.bylines.string() + ": publication '" + p.id + "' has no byline");
    std::sort(p.byline.begin(), p.byline.end(),
              [](const Authorship& x, const Authorship& y) { return x.position < y.position; });
    for (std::size_t i = 0; i < p.byline.size(); ++i) {
      if (p.byline[i].position != static_cast<int>(i + 1)) {
        throw InputError(paths.bylines.string() + ": byline of '" + p.id + "' has a gap before position " +
                         std::to_string(p.byline[i].position));
      }
      ++report.authorships;
      if (!p.byline[i].researcher_id) ++report.external_authorships;
    }
  }

  report.researchers = corpus.researchers.size();
  report.publications = corpus.publications.size();
  if (corpus.publications.empty()) report.warnings.push_back("corpus contains no publications");
  if (corpus.researchers.empty()) report.warnings.push_back("corpus contains no researchers");
  return result;
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path.string() + ": cannot open for writing");
  return out;
}

}  // namespace

void export_corpus(const Corpus& corpus, const CorpusPaths& paths) {
  using csv::format_number;
  {
    auto out = open_output(paths.researchers);
    out << "id,name,sds,rank,salary,institution,department,years_in_window\n";
    for (const auto& r : corpus.researchers) {
      std::vector<std::string> row{r.id,
                                   r.name,
                                   r.sds,
                                   r.rank,
                                   r.explicit_salary ? format_number(*r.explicit_salary) : "",
                                   r.institution,
                                   r.department,
                                   format_number(r.years_in_window)};
      csv::write_row(out, row);
    }
  }
  {
    auto out = open_output(paths.publications);
    out << "id,year,citations,subject_categories\n";
    for (const auto& p : corpus.publications) {
      std::string cats;
      for (std::size_t i = 0; i < p.subject_categories.size(); ++i) {
        if (i) cats += ';';
        cats += p.subject_categories[i];
      }
      std::vector<std::string> row{p.id, std::to_string(p.year), std::to_string(p.citations), cats};
      csv::write_row(out, row);
    }
  }
  {
    auto out = open_output(paths.bylines);
    out << "publication_id,position,researcher_id,institution_id\n";
    for (const auto& p : corpus.publications) {
      for (const auto& a : p.byline) {
        std::vector<std::string> row{p.id, std::to_string(a.position), a.researcher_id.value_or(""),
                                     a.institution};
        csv::write_row(out, row);
      }
    }
  }
  {
    auto out = open_output(paths.taxonomy);
    out << "sds,uda,convention\n";
    for (const auto& [sds, entry] : corpus.taxonomy.sds) {
      std::vector<std::string> row{sds, entry.uda, to_string(entry.convention)};
      csv::write_row(out, row);
    }
  }
  {
    auto out = open_output(paths.salaries);
    out << "rank,seniority_band,salary_per_year\n";
    for (const auto& [key, value] : corpus.salaries.entries()) {
      std::vector<std::string> row{key.first, key.second, format_number(value)};
      csv::write_row(out, row);
    }
  }
}

ExclusionResult apply_exclusions(const Corpus& corpus, const ExclusionThresholds& thresholds) {
  if (thresholds.min_years < 0 || thresholds.min_staff_uda < 0 || thresholds.min_staff_total < 0) {
    throw InputError("exclusion thresholds must be nonnegative");
  }
  ExclusionResult result;
  Corpus& out = result.corpus;
  out.taxonomy = corpus.taxonomy;
  out.salaries = corpus.salaries;
  out.window = corpus.window;
  out.citation_cutoff = corpus.citation_cutoff;
  out.excluded_uda_groups = corpus.excluded_uda_groups;
  out.excluded_institutions = corpus.excluded_institutions;

  std::unordered_set<std::string> dropped;
  for (const auto& r : corpus.researchers) {
    if (r.years_in_window < thresholds.min_years) {
      dropped.insert(r.id);
      result.report.excluded_researchers.push_back(r.id);
    } else {
      out.researchers.push_back(r);
    }
  }
  out.rebuild_index();

  out.publications = corpus.publications;
  if (!dropped.empty()) {
    for (auto& p : out.publications) {
      for (auto& a : p.byline) {
        if (a.researcher_id && dropped.count(*a.researcher_id)) a.researcher_id.reset();
      }
    }
  }

  std::map<std::pair<std::string, std::string>, int> uda_staff;
  std::map<std::string, int> total_staff;
  for (const auto& r : out.researchers) {
    ++uda_staff[{r.institution, r.uda}];
    ++total_staff[r.institution];
  }
  for (const auto& [group, staff] : uda_staff) {
    if (staff < thresholds.min_staff_uda && out.excluded_uda_groups.insert(group).second) {
      result.report.excluded_uda_groups.push_back(group);
    }
  }
  for (const auto& [inst, staff] : total_staff) {
    if (staff < thresholds.min_staff_total && out.excluded_institutions.insert(inst).second) {
      result.report.excluded_institutions.push_back(inst);
    }
  }
  return result;
}

}  // namespace fss
