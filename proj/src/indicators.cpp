#include "fss/indicators.hpp"

#include <algorithm>

#include "fss/error.hpp"
#include "fss/parallel.hpp"

namespace fss {

std::string to_string(Level level) {
  switch (level) {
    case Level::researcher: return "researcher";
    case Level::sds: return "sds";
    case Level::department: return "department";
    case Level::university_uda: return "university_uda";
    case Level::university_total: return "university_total";
    case Level::region: return "region";
    case Level::country: return "country";
  }
  return "?";
}

Level parse_level(const std::string& text) {
  for (Level l : {Level::researcher, Level::sds, Level::department, Level::university_uda, Level::university_total,
                  Level::region, Level::country}) {
    if (to_string(l) == text) return l;
  }
  throw InputError("unknown level '" + text + "'");
}

std::string to_string(Scope scope) {
  switch (scope) {
    case Scope::sds: return "sds";
    case Scope::department: return "department";
    case Scope::university: return "university";
    case Scope::region: return "region";
    case Scope::country: return "country";
  }
  return "?";
}

Scope parse_scope(const std::string& text) {
  for (Scope s : {Scope::sds, Scope::department, Scope::university, Scope::region, Scope::country}) {
    if (to_string(s) == text) return s;
  }
  throw InputError("unknown scope '" + text + "'");
}

ScoringContext::ScoringContext(const Corpus& corpus, const BaselineTable& baselines, const SchemeBook& schemes,
                               int threads)
    : corpus_(&corpus), impacts_(corpus.publications.size()), contributions_(corpus.researchers.size()) {
  parallel_for(corpus.publications.size(), threads,
               [&](std::size_t i) { impacts_[i] = normalized_impact(corpus.publications[i], baselines); });

  for (std::size_t p = 0; p < corpus.publications.size(); ++p) {
    const auto& byline = corpus.publications[p].byline;
    for (const auto& a : byline) {
      if (!a.researcher_id) continue;
      auto r = corpus.find_researcher(*a.researcher_id);
      if (!r) continue;
      const auto& scheme = schemes.for_sds(corpus.researchers[*r].sds);
      contributions_[*r].push_back(Contribution{p, fractional_contribution(byline, a.position, scheme), impacts_[p]});
    }
  }
}

double labor_cost(const Researcher& researcher) { return researcher.salary_per_year * researcher.years_in_window; }

double fss_r(const ScoringContext& ctx, std::size_t researcher) {
  const Researcher& r = ctx.corpus().researchers.at(researcher);
  if (!(r.salary_per_year > 0.0) || !(r.years_in_window > 0.0)) {
    throw ComputationError("researcher '" + r.id + "' has non-positive salary or years in window");
  }
  double sum = 0.0;
  for (const auto& c : ctx.contributions(researcher)) sum += c.impact * c.credit;
  return sum / (r.salary_per_year * r.years_in_window);
}

double annual_output(const ScoringContext& ctx, std::size_t researcher) {
  const Researcher& r = ctx.corpus().researchers.at(researcher);
  return static_cast<double>(ctx.contributions(researcher).size()) / r.years_in_window;
}

double annual_fractional_output(const ScoringContext& ctx, std::size_t researcher) {
  const Researcher& r = ctx.corpus().researchers.at(researcher);
  double sum = 0.0;
  for (const auto& c : ctx.contributions(researcher)) sum += c.credit;
  return sum / r.years_in_window;
}

double fss_s(const ScoringContext& ctx, std::span<const std::size_t> staff) {
  std::vector<std::size_t> members(staff.begin(), staff.end());
  std::sort(members.begin(), members.end());
  double cost = 0.0;
  std::map<std::size_t, double> unit_credit;  // publication -> summed credit of the group
  for (std::size_t r : members) {
    cost += labor_cost(ctx.corpus().researchers.at(r));
    for (const auto& c : ctx.contributions(r)) unit_credit[c.publication] += c.credit;
  }
  if (!(cost > 0.0)) throw ComputationError("field unit has zero labor cost");
  double sum = 0.0;
  for (const auto& [pub, credit] : unit_credit) sum += ctx.impact(pub) * credit;
  return sum / cost;
}

std::optional<double> positive_mean(std::span<const double> values) {
  double sum = 0.0;
  std::size_t count = 0;
  for (double v : values) {
    if (v > 0.0) {
      sum += v;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

std::optional<double> positive_weighted_mean(std::span<const double> values, std::span<const double> weights) {
  if (values.size() != weights.size()) throw ComputationError("values and weights differ in length");
  double sum = 0.0;
  double weight = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > 0.0) {
      sum += values[i] * weights[i];
      weight += weights[i];
    }
  }
  if (!(weight > 0.0)) return std::nullopt;
  return sum / weight;
}

FieldMeans field_means(const Corpus& corpus, std::span<const ResearcherOutput> researchers,
                       std::span<const SdsUnit> units) {
  if (researchers.size() != corpus.researchers.size()) {
    throw ComputationError("researcher outputs do not match the corpus");
  }
  struct Columns {
    std::vector<double> fss_r, q, fq;
  };
  std::map<std::string, Columns> by_sds;
  for (std::size_t i = 0; i < researchers.size(); ++i) {
    auto& col = by_sds[corpus.researchers[i].sds];
    col.fss_r.push_back(researchers[i].fss_r);
    col.q.push_back(researchers[i].q);
    col.fq.push_back(researchers[i].fq);
  }
  FieldMeans means;
  for (const auto& [sds, col] : by_sds) {
    if (auto m = positive_mean(col.fss_r)) means.fss_r[sds] = *m;
    if (auto m = positive_mean(col.q)) means.q[sds] = *m;
    if (auto m = positive_mean(col.fq)) means.fq[sds] = *m;
  }
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> unit_cols;
  for (const auto& u : units) {
    auto& [values, weights] = unit_cols[u.sds];
    values.push_back(u.fss_s);
    weights.push_back(u.labor_cost);
  }
  for (const auto& [sds, cols] : unit_cols) {
    if (auto m = positive_weighted_mean(cols.first, cols.second)) means.fss_s[sds] = *m;
  }
  return means;
}

double standardized_average(const Corpus& corpus, std::span<const std::size_t> members,
                            std::span<const double> values, const std::map<std::string, double>& means,
                            const char* indicator) {
  if (members.empty()) throw ComputationError(std::string(indicator) + ": unit has no research staff");
  double sum = 0.0;
  for (std::size_t r : members) {
    const auto& sds = corpus.researchers.at(r).sds;
    auto it = means.find(sds);
    if (it == means.end()) {
      throw ComputationError(std::string(indicator) + ": no productive researchers in sds '" + sds +
                             "' to standardize against");
    }
    sum += values[r] / it->second;
  }
  return sum / static_cast<double>(members.size());
}

namespace {

template <class Member>
std::vector<double> project(std::span<const ResearcherOutput> outputs, Member member) {
  std::vector<double> out;
  out.reserve(outputs.size());
  for (const auto& o : outputs) out.push_back(o.*member);
  return out;
}

}  // namespace

double fss_d(const Corpus& corpus, std::span<const std::size_t> members, std::span<const ResearcherOutput> outputs,
             const FieldMeans& means) {
  return standardized_average(corpus, members, project(outputs, &ResearcherOutput::fss_r), means.fss_r, "FSS_D");
}

double p_u(const Corpus& corpus, std::span<const std::size_t> members, std::span<const ResearcherOutput> outputs,
           const FieldMeans& means) {
  return standardized_average(corpus, members, project(outputs, &ResearcherOutput::q), means.q, "P_U");
}

double fp_u(const Corpus& corpus, std::span<const std::size_t> members, std::span<const ResearcherOutput> outputs,
            const FieldMeans& means) {
  return standardized_average(corpus, members, project(outputs, &ResearcherOutput::fq), means.fq, "FP_U");
}

std::vector<double> size_weights(std::span<const FieldShare> shares) {
  double total = 0.0;
  for (const auto& s : shares) total += s.labor_cost;
  if (!(total > 0.0)) throw ComputationError("unit has zero total labor cost");
  std::vector<double> weights;
  weights.reserve(shares.size());
  for (const auto& s : shares) weights.push_back(s.labor_cost / total);
  return weights;
}

double fss_u(std::span<const FieldShare> shares, const std::map<std::string, double>& fss_s_means) {
  if (shares.empty()) throw ComputationError("FSS_U: unit has no fields");
  const auto weights = size_weights(shares);
  double sum = 0.0;
  for (std::size_t k = 0; k < shares.size(); ++k) {
    auto it = fss_s_means.find(shares[k].sds);
    if (it == fss_s_means.end()) {
      throw ComputationError("FSS_U: no productive unit in sds '" + shares[k].sds + "' to standardize against");
    }
    sum += shares[k].fss_s / it->second * weights[k];
  }
  return sum;
}

namespace {

// FSS_U of a unit whose staff is `members`: FSS_S is taken per field over the
// unit's own staff in that field.
double fss_u_of_staff(const ScoringContext& ctx, std::span<const std::size_t> members, const FieldMeans& means) {
  std::map<std::string, std::vector<std::size_t>> by_sds;
  for (std::size_t r : members) by_sds[ctx.corpus().researchers[r].sds].push_back(r);
  std::vector<FieldShare> shares;
  for (const auto& [sds, staff] : by_sds) {
    double cost = 0.0;
    for (std::size_t r : staff) cost += labor_cost(ctx.corpus().researchers[r]);
    shares.push_back(FieldShare{sds, fss_s(ctx, staff), cost});
  }
  return fss_u(shares, means.fss_s);
}

}  // namespace

IndicatorResults compute_indicators(const ScoringContext& ctx, const IndicatorOptions& options) {
  const Corpus& corpus = ctx.corpus();
  IndicatorResults out;
  const std::size_t n = corpus.researchers.size();

  out.researchers.resize(n);
  parallel_for(n, options.threads, [&](std::size_t i) {
    out.researchers[i] = ResearcherOutput{fss_r(ctx, i), annual_output(ctx, i), annual_fractional_output(ctx, i)};
  });

  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> unit_staff;
  for (std::size_t i = 0; i < n; ++i) unit_staff[{corpus.researchers[i].institution, corpus.researchers[i].sds}].push_back(i);
  for (auto& [key, staff] : unit_staff) {
    SdsUnit u;
    u.institution = key.first;
    u.sds = key.second;
    u.uda = corpus.taxonomy.sds.at(key.second).uda;
    u.staff = std::move(staff);
    for (std::size_t r : u.staff) u.labor_cost += labor_cost(corpus.researchers[r]);
    out.sds_units.push_back(std::move(u));
  }
  parallel_for(out.sds_units.size(), options.threads,
               [&](std::size_t k) { out.sds_units[k].fss_s = fss_s(ctx, out.sds_units[k].staff); });

  out.means = field_means(corpus, out.researchers, out.sds_units);
  const auto fss_r_values = project(out.researchers, &ResearcherOutput::fss_r);
  const auto q_values = project(out.researchers, &ResearcherOutput::q);
  const auto fq_values = project(out.researchers, &ResearcherOutput::fq);

  {
    ScoreSet set{Level::researcher, "FSS_R", {}};
    for (std::size_t i = 0; i < n; ++i) {
      set.entries.push_back(ScoreEntry{corpus.researchers[i].id, corpus.researchers[i].sds, out.researchers[i].fss_r});
    }
    out.sets.push_back(std::move(set));
  }
  {
    ScoreSet set{Level::sds, "FSS_S", {}};
    for (const auto& u : out.sds_units) set.entries.push_back(ScoreEntry{u.institution + "|" + u.sds, u.sds, u.fss_s});
    out.sets.push_back(std::move(set));
  }
  if (options.scope == Scope::sds) return out;

  {
    std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> departments;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& r = corpus.researchers[i];
      if (!r.department.empty()) departments[{r.institution, r.department}].push_back(i);
    }
    ScoreSet set{Level::department, "FSS_D", {}};
    for (const auto& [key, members] : departments) {
      set.entries.push_back(ScoreEntry{key.first + "|" + key.second, key.first, standardized_average(corpus, members, fss_r_values, out.means.fss_r, "FSS_D")});
    }
    out.sets.push_back(std::move(set));
  }
  if (options.scope == Scope::department) return out;

  {
    std::map<std::pair<std::string, std::string>, std::vector<const SdsUnit*>> uda_units;
    std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> uda_staff;
    for (const auto& u : out.sds_units) {
      if (corpus.excluded_uda_groups.count({u.institution, u.uda})) continue;
      uda_units[{u.institution, u.uda}].push_back(&u);
      auto& staff = uda_staff[{u.institution, u.uda}];
      staff.insert(staff.end(), u.staff.begin(), u.staff.end());
    }
    ScoreSet fss{Level::university_uda, "FSS_U", {}};
    ScoreSet p{Level::university_uda, "P_U", {}};
    ScoreSet fp{Level::university_uda, "FP_U", {}};
    for (auto& [key, units] : uda_units) {
      std::vector<FieldShare> shares;
      for (const SdsUnit* u : units) shares.push_back(FieldShare{u->sds, u->fss_s, u->labor_cost});
      auto& staff = uda_staff[key];
      std::sort(staff.begin(), staff.end());
      const std::string id = key.first + "|" + key.second;
      fss.entries.push_back(ScoreEntry{id, key.second, fss_u(shares, out.means.fss_s)});
      p.entries.push_back(ScoreEntry{id, key.second, standardized_average(corpus, staff, q_values, out.means.q, "P_U")});
      fp.entries.push_back(ScoreEntry{id, key.second, standardized_average(corpus, staff, fq_values, out.means.fq, "FP_U")});
    }
    out.sets.push_back(std::move(fss));
    out.sets.push_back(std::move(p));
    out.sets.push_back(std::move(fp));
  }
  {
    std::map<std::string, std::vector<const SdsUnit*>> inst_units;
    std::map<std::string, std::vector<std::size_t>> inst_staff;
    for (const auto& u : out.sds_units) {
      if (corpus.excluded_institutions.count(u.institution)) continue;
      inst_units[u.institution].push_back(&u);
      auto& staff = inst_staff[u.institution];
      staff.insert(staff.end(), u.staff.begin(), u.staff.end());
    }
    ScoreSet fss{Level::university_total, "FSS_U", {}};
    ScoreSet p{Level::university_total, "P_U", {}};
    ScoreSet fp{Level::university_total, "FP_U", {}};
    for (auto& [inst, units] : inst_units) {
      std::vector<FieldShare> shares;
      for (const SdsUnit* u : units) shares.push_back(FieldShare{u->sds, u->fss_s, u->labor_cost});
      auto& staff = inst_staff[inst];
      std::sort(staff.begin(), staff.end());
      fss.entries.push_back(ScoreEntry{inst, "all", fss_u(shares, out.means.fss_s)});
      p.entries.push_back(ScoreEntry{inst, "all", standardized_average(corpus, staff, q_values, out.means.q, "P_U")});
      fp.entries.push_back(ScoreEntry{inst, "all", standardized_average(corpus, staff, fq_values, out.means.fq, "FP_U")});
    }
    out.sets.push_back(std::move(fss));
    out.sets.push_back(std::move(p));
    out.sets.push_back(std::move(fp));
  }
  if (options.scope == Scope::university) return out;

  if (options.scope == Scope::region && options.regions.empty()) {
    throw InputError("region scope needs a regions map (institution -> region)");
  }
  // Country scope skips regions when none are declared.
  if (!options.regions.empty()) {
    std::map<std::string, std::vector<std::size_t>> regions;
    for (std::size_t i = 0; i < n; ++i) {
      auto it = options.regions.find(corpus.researchers[i].institution);
      if (it == options.regions.end()) {
        throw InputError("no region declared for institution '" + corpus.researchers[i].institution + "'");
      }
      regions[it->second].push_back(i);
    }
    ScoreSet set{Level::region, "FSS_U", {}};
    for (const auto& [region, members] : regions) {
      set.entries.push_back(ScoreEntry{region, "all", fss_u_of_staff(ctx, members, out.means)});
    }
    out.sets.push_back(std::move(set));
  }
  if (options.scope == Scope::region) return out;

  {
    std::vector<std::size_t> everyone(n);
    for (std::size_t i = 0; i < n; ++i) everyone[i] = i;
    ScoreSet set{Level::country, "FSS_U", {}};
    if (n > 0) set.entries.push_back(ScoreEntry{"country", "all", fss_u_of_staff(ctx, everyone, out.means)});
    out.sets.push_back(std::move(set));
  }
  return out;
}

}  // namespace fss
