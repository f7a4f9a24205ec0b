#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>

#include "fss/corpus.hpp"
#include "fss/error.hpp"

namespace fss {

namespace {

std::string numbered(const char* prefix, int value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*d", prefix, width, value);
  return buf;
}

}  // namespace

Corpus generate_synthetic_corpus(std::uint64_t seed, const SyntheticParams& params) {
  if (params.researchers < 1) throw InputError("synthetic corpus needs at least one researcher");
  if (params.sds_count < 1 || params.uda_count < 1 || params.institutions < 1 || params.categories_per_sds < 1 ||
      params.departments_per_institution < 0 || params.max_papers < 1) {
    throw InputError("synthetic corpus parameters must be positive");
  }
  if (params.window.end_year < params.window.start_year) throw InputError("observation window is empty");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };

  Corpus corpus;
  corpus.window = params.window;
  corpus.citation_cutoff = std::to_string(params.window.end_year + 1) + "-12-31";

  std::vector<std::string> sds_codes;
  std::vector<std::vector<std::string>> sds_categories;
  std::map<std::string, double> category_mean;
  int category_counter = 0;
  for (int i = 0; i < params.sds_count; ++i) {
    std::string sds = numbered("S", i + 1, 2);
    std::string uda = numbered("U", i % params.uda_count + 1, 2);
    bool weighted = std::floor((i + 1) * params.position_weighted_share) > std::floor(i * params.position_weighted_share);
    corpus.taxonomy.sds[sds] = FieldEntry{uda, weighted ? Convention::position_weighted : Convention::alphabetical};
    sds_codes.push_back(sds);
    std::vector<std::string> cats;
    for (int k = 0; k < params.categories_per_sds; ++k) {
      std::string cat = numbered("C", ++category_counter, 3);
      category_mean[cat] = params.citation_intensity * (1 + (category_counter - 1) % 4);
      cats.push_back(cat);
    }
    sds_categories.push_back(std::move(cats));
  }

  corpus.salaries.set("full", "", 100000.0);
  corpus.salaries.set("associate", "", 70000.0);
  corpus.salaries.set("assistant", "", 45000.0);
  const std::vector<std::string> ranks{"full", "associate", "assistant"};
  std::discrete_distribution<int> rank_dist({25, 35, 40});

  const int window_years = params.window.end_year - params.window.start_year + 1;
  std::vector<int> researcher_sds;
  std::map<std::pair<std::string, std::string>, std::vector<int>> units;  // (institution, sds) -> members
  for (int i = 0; i < params.researchers; ++i) {
    Researcher r;
    r.id = numbered("R", i + 1, 6);
    r.name = "Researcher " + std::to_string(i + 1);
    int s = pick(params.sds_count);
    researcher_sds.push_back(s);
    r.sds = sds_codes[s];
    r.uda = corpus.taxonomy.sds[r.sds].uda;
    r.rank = ranks[rank_dist(rng)];
    if (unit(rng) < 0.05) {
      r.explicit_salary = std::round(*corpus.salaries.lookup(r.rank) * (0.9 + 0.2 * unit(rng)));
    }
    r.salary_per_year = resolve_salary(r, corpus.salaries);
    int inst = pick(params.institutions);
    r.institution = numbered("I", inst + 1, 3);
    if (params.departments_per_institution > 0) {
      r.department = r.institution + "-D" + std::to_string(pick(params.departments_per_institution) + 1);
    }
    r.years_in_window = window_years;
    if (unit(rng) < params.short_tenure_share) {
      r.years_in_window = std::round((0.5 + unit(rng) * (window_years - 0.5)) * 4.0) / 4.0;
      r.years_in_window = std::clamp(r.years_in_window, 0.25, static_cast<double>(window_years));
    }
    units[{r.institution, r.sds}].push_back(i);
    corpus.researchers.push_back(std::move(r));
  }
  corpus.rebuild_index();

  std::vector<double> lotka_weights;
  for (int k = 1; k <= params.max_papers; ++k) lotka_weights.push_back(std::pow(k, -params.lotka_exponent));
  std::discrete_distribution<int> lotka(lotka_weights.begin(), lotka_weights.end());
  std::poisson_distribution<int> external_count(params.external_coauthors_mean);

  int pub_counter = 0;
  for (int i = 0; i < params.researchers; ++i) {
    if (unit(rng) < params.inactive_share) continue;
    const int papers = lotka(rng) + 1;
    const Researcher& lead = corpus.researchers[i];
    const auto& cats = sds_categories[researcher_sds[i]];
    for (int k = 0; k < papers; ++k) {
      Publication p;
      p.id = numbered("P", ++pub_counter, 7);
      p.year = params.window.start_year + pick(window_years);
      p.subject_categories.push_back(cats[pick(static_cast<int>(cats.size()))]);
      if (unit(rng) < 0.15 && params.sds_count > 1) {
        const auto& other = sds_categories[pick(params.sds_count)];
        const auto& extra = other[pick(static_cast<int>(other.size()))];
        if (extra != p.subject_categories.front()) p.subject_categories.push_back(extra);
      }
      if (unit(rng) >= params.uncited_share) {
        double mean = 0.0;
        for (const auto& c : p.subject_categories) mean += category_mean[c];
        mean /= p.subject_categories.size();
        std::geometric_distribution<int> tail(1.0 / std::max(mean, 1.0));
        p.citations = 1 + tail(rng);
      }

      std::vector<Authorship> authors;
      authors.push_back(Authorship{0, lead.id, lead.institution});
      if (unit(rng) < params.census_coauthor_prob) {
        const auto& members = units[{lead.institution, lead.sds}];
        if (members.size() > 1) {
          int other = members[pick(static_cast<int>(members.size()))];
          if (other != i) {
            const auto& co = corpus.researchers[other];
            authors.push_back(Authorship{0, co.id, co.institution});
          }
        }
      }
      const int externals = external_count(rng);
      for (int e = 0; e < externals; ++e) {
        std::string inst = unit(rng) < 0.4 ? lead.institution : numbered("X", pick(20) + 1, 2);
        authors.push_back(Authorship{0, std::nullopt, inst});
      }
      std::shuffle(authors.begin(), authors.end(), rng);
      for (std::size_t pos = 0; pos < authors.size(); ++pos) authors[pos].position = static_cast<int>(pos + 1);
      p.byline = std::move(authors);
      corpus.publications.push_back(std::move(p));
    }
  }
  return corpus;
}

}  // namespace fss
