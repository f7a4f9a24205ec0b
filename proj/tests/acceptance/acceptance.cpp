// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "fss/corpus.hpp"
#include "fss/credit.hpp"
#include "fss/dea.hpp"
#include "fss/indicators.hpp"
#include "fss/normalize.hpp"
#include "fss/rankings.hpp"
#include "oracles/dea_oracle.hpp"
#include "oracles/naive_fss.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace fss;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double rel_err(double got, double want) {
  const double scale = std::max(std::abs(want), std::abs(got));
  return scale == 0.0 ? 0.0 : std::abs(got - want) / scale;
}

std::vector<ScoreEntry> descending(std::size_t n) {
  std::vector<ScoreEntry> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back({"u" + std::to_string(1000 + i), "g", static_cast<double>(n - i)});
  return v;
}

IndicatorResults pipeline(const Corpus& raw, const ExclusionThresholds& th, int threads = 1) {
  const BaselineTable baselines = compute_baselines(raw);
  const Corpus excluded = apply_exclusions(raw, th).corpus;
  SchemeBook schemes(excluded.taxonomy, PositionWeights{});
  ScoringContext ctx(excluded, baselines, schemes, threads);
  IndicatorOptions options;
  options.threads = threads;
  return compute_indicators(ctx, options);
}

// ---------------------------------------------------------------------------

Outcome percentile_anchors() {
  auto ten = percentile_rank(descending(10));
  auto hundred = percentile_rank(descending(100));
  const double p10 = ten.entries[2].percentile, p100 = hundred.entries[2].percentile;
  return {p10 == 70.0 && p100 == 97.0, "3rd of 10 -> " + fmt("%g", p10) + ", 3rd of 100 -> " + fmt("%g", p100)};
}

Outcome credit_fixtures() {
  auto byline = [](std::vector<std::string> insts) {
    std::vector<Authorship> b;
    for (std::size_t i = 0; i < insts.size(); ++i) b.push_back({static_cast<int>(i + 1), std::nullopt, insts[i]});
    return b;
  };
  const WeightingScheme pos{Convention::position_weighted, {}};
  const WeightingScheme alpha{Convention::alphabetical, {}};
  const double mid = 0.2 / 3.0;
  bool ok = credit_vector(byline({"A", "B", "C", "D", "A"}), pos) == std::vector<double>{0.40, mid, mid, mid, 0.40};
  ok = ok && credit_vector(byline({"A", "A", "B", "C", "D", "D"}), pos) ==
                 std::vector<double>{0.30, 0.15, 0.05, 0.05, 0.15, 0.30};
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> len(1, 60), inst(0, 4), kind(0, 1);
  double worst = 0.0;
  for (int t = 0; t < 10000; ++t) {
    std::vector<std::string> insts(len(rng));
    for (auto& s : insts) s = "I" + std::to_string(inst(rng));
    auto v = credit_vector(byline(insts), kind(rng) ? pos : alpha);
    worst = std::max(worst, std::abs(std::accumulate(v.begin(), v.end(), 0.0) - 1.0));
  }
  ok = ok && worst <= 1e-12;
  return {ok, "n=5/n=6 vectors exact; max |sum-1| over 10000 bylines = " + fmt("%.3g", worst)};
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  SyntheticParams params;
  params.researchers = 500;
  params.sds_count = 5;
  params.uda_count = 2;
  params.institutions = 10;
  params.lotka_exponent = 1.1;  // about 3000 publications
  params.max_papers = 30;
  Corpus raw = generate_synthetic_corpus(777, params);
  const ExclusionThresholds th{3.0, 10, 30};
  auto results = pipeline(raw, th);
  auto naive = oracle::naive_scores(raw, {th.min_years, th.min_staff_uda, th.min_staff_total});

  double worst = 0.0;
  std::size_t compared = 0;
  bool keys_match = true;
  auto check = [&](const ScoreSet& set, const std::map<std::string, double>& want) {
    std::map<std::string, double> got;
    for (const auto& e : set.entries) got[e.unit_id] = e.value;
    if (got.size() != want.size()) keys_match = false;
    for (const auto& [k, v] : want) {
      auto it = got.find(k);
      if (it == got.end()) {
        keys_match = false;
        continue;
      }
      worst = std::max(worst, rel_err(it->second, v));
      ++compared;
    }
  };
  std::map<std::string, double> uda_u, total_u, uda_p, total_p, uda_fp, total_fp;
  auto split = [](const std::map<std::string, double>& all, std::map<std::string, double>& uda,
                  std::map<std::string, double>& total) {
    for (const auto& [k, v] : all) (k.find('|') == std::string::npos ? total : uda)[k] = v;
  };
  split(naive.fss_u, uda_u, total_u);
  split(naive.p_u, uda_p, total_p);
  split(naive.fp_u, uda_fp, total_fp);
  for (const auto& set : results.sets) {
    const bool uda = set.level == Level::university_uda;
    if (set.indicator == "FSS_R") check(set, naive.fss_r);
    if (set.indicator == "FSS_S") check(set, naive.fss_s);
    if (set.indicator == "FSS_D") check(set, naive.fss_d);
    if (set.indicator == "FSS_U") check(set, uda ? uda_u : total_u);
    if (set.indicator == "P_U") check(set, uda ? uda_p : total_p);
    if (set.indicator == "FP_U") check(set, uda ? uda_fp : total_fp);
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << raw.researchers.size() << " researchers, " << raw.publications.size() << " publications, " << compared
    << " values, max rel err " << fmt("%.3g", worst) << ", " << fmt("%.2f", secs) << " s";
  if (!keys_match) d << ", unit sets differ";
  return {keys_match && compared > 0 && worst <= 1e-9 && secs < 10.0, d.str()};
}

Outcome normalization_property() {
  SyntheticParams params;
  params.researchers = 400;
  Corpus c = generate_synthetic_corpus(4242, params);
  for (auto& p : c.publications) p.subject_categories.resize(1);
  auto table = compute_baselines(c);
  std::map<BaselineKey, std::pair<double, int>> sums;
  for (const auto& p : c.publications) {
    if (p.citations == 0) continue;
    auto& s = sums[{p.year, p.subject_categories[0]}];
    s.first += normalized_impact(p, table);
    ++s.second;
  }
  double worst = 0.0;
  for (const auto& [key, s] : sums) worst = std::max(worst, std::abs(s.first / s.second - 1.0));
  return {!sums.empty() && worst <= 1e-12,
          std::to_string(sums.size()) + " cohorts, max |mean-1| = " + fmt("%.3g", worst)};
}

Outcome salary_invariance() {
  SyntheticParams params;
  params.researchers = 300;
  Corpus raw = generate_synthetic_corpus(99, params);
  const ExclusionThresholds th{3.0, 5, 10};
  auto base = pipeline(raw, th);
  bool order_ok = true;
  double worst = 0.0;
  for (double k : {0.5, 3.0}) {
    Corpus scaled = raw;
    for (auto& r : scaled.researchers) r.salary_per_year *= k;
    auto out = pipeline(scaled, th);
    if (out.sets.size() != base.sets.size()) return {false, "score sets differ"};
    for (std::size_t s = 0; s < base.sets.size(); ++s) {
      const auto& x = base.sets[s];
      const auto& y = out.sets[s];
      // Ranking order per group.
      std::map<std::string, std::vector<ScoreEntry>> gx, gy;
      for (const auto& e : x.entries) gx[e.group].push_back(e);
      for (const auto& e : y.entries) gy[e.group].push_back(e);
      for (const auto& [g, entries] : gx) {
        auto lx = percentile_rank(entries), ly = percentile_rank(gy[g]);
        for (std::size_t i = 0; i < lx.entries.size(); ++i) {
          if (lx.entries[i].unit_id != ly.entries[i].unit_id || lx.entries[i].rank != ly.entries[i].rank) {
            order_ok = false;
          }
        }
      }
      if (x.indicator == "FSS_R" || x.indicator == "FSS_S") {
        for (std::size_t i = 0; i < x.entries.size(); ++i) {
          worst = std::max(worst, rel_err(y.entries[i].value, x.entries[i].value / k));
        }
      }
    }
  }
  return {order_ok && worst <= 1e-12, std::string("orders ") + (order_ok ? "identical" : "DIFFER") +
                                          ", max rel err of raw FSS vs 1/k = " + fmt("%.3g", worst)};
}

Outcome quartile_convention() {
  const std::size_t n[] = {42, 43, 50, 61}, want[] = {11, 11, 13, 16};
  bool ok = true;
  std::string d;
  for (int i = 0; i < 4; ++i) {
    const auto q = top_quartile_size(n[i]);
    ok = ok && q == want[i];
    d += (i ? ", " : "") + std::to_string(n[i]) + "->" + std::to_string(q);
  }
  return {ok, d};
}

Outcome spearman_oracle() {
  double worst = 0.0;
  int cases = 0;
  for (int n = 2; n <= 6; ++n) {
    std::vector<double> x(n);
    std::iota(x.begin(), x.end(), 1.0);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    do {
      std::vector<double> y(perm.begin(), perm.end());
      double d2 = 0.0;
      for (int i = 0; i < n; ++i) d2 += (x[i] - y[i]) * (x[i] - y[i]);
      const double closed = 1.0 - 6.0 * d2 / (n * (static_cast<double>(n) * n - 1.0));
      worst = std::max(worst, std::abs(spearman(x, y) - closed));
      ++cases;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return {worst <= 1e-12, std::to_string(cases) + " permutations, max abs err " + fmt("%.3g", worst)};
}

Outcome dea_properties() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(60606);
  std::uniform_real_distribution<double> u(0.5, 10.0);
  std::uniform_int_distribution<int> size(1, 6), dim(1, 2);
  double worst_oracle = 0.0, worst_frontier = 0.0, worst_se = 0.0, worst_order = 0.0;
  int fixtures = 0;
  for (; fixtures < 120; ++fixtures) {
    const int n = size(rng), ni = dim(rng), no = dim(rng);
    std::vector<dea::Dmu> dmus;
    for (int j = 0; j < n; ++j) {
      dea::Dmu d{"d" + std::to_string(j), std::vector<double>(ni), std::vector<double>(no)};
      for (auto& v : d.inputs) v = u(rng);
      for (auto& v : d.outputs) v = u(rng);
      dmus.push_back(d);
    }
    auto crs = dea::output_oriented(dmus, dea::Model::crs);
    auto vrs = dea::output_oriented(dmus, dea::Model::vrs);
    auto se = dea::scale_efficiency(crs, vrs);
    std::vector<oracle::Unit> units;
    for (const auto& d : dmus) units.push_back({d.inputs, d.outputs});
    for (int o = 0; o < n; ++o) {
      worst_oracle = std::max(worst_oracle, rel_err(crs.units[o].phi, oracle::dea_phi(units, o, false)));
      worst_oracle = std::max(worst_oracle, rel_err(vrs.units[o].phi, oracle::dea_phi(units, o, true)));
      worst_order = std::max(worst_order, crs.units[o].efficiency - vrs.units[o].efficiency);
      worst_se = std::max(worst_se, se[o].second - 1.0);
    }
    // A DMU maximizing a positive ratio of weighted output to weighted input
    // lies on the CRS frontier, hence also on the VRS frontier.
    std::vector<double> wi(ni), wo(no);
    for (auto& w : wi) w = u(rng);
    for (auto& w : wo) w = u(rng);
    int best = 0;
    double best_ratio = -1.0;
    for (int j = 0; j < n; ++j) {
      const double ratio = std::inner_product(wo.begin(), wo.end(), dmus[j].outputs.begin(), 0.0) /
                           std::inner_product(wi.begin(), wi.end(), dmus[j].inputs.begin(), 0.0);
      if (ratio > best_ratio) best_ratio = ratio, best = j;
    }
    worst_frontier = std::max({worst_frontier, std::abs(crs.units[best].efficiency - 1.0),
                               std::abs(vrs.units[best].efficiency - 1.0)});
  }
  const double secs = seconds_since(t0);
  const bool ok = worst_oracle <= 1e-6 && worst_frontier <= 1e-6 && worst_se <= 1e-6 && worst_order <= 1e-6 &&
                  secs < 1.0;
  return {ok, std::to_string(fixtures) + " fixtures; frontier dev " + fmt("%.2g", worst_frontier) + ", SE-1 max " +
                  fmt("%.2g", worst_se) + ", TE_CRS-TE_VRS max " + fmt("%.2g", worst_order) + ", oracle rel err " +
                  fmt("%.2g", worst_oracle) + ", " + fmt("%.3f", secs) + " s"};
}

int cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (code != 0) std::fprintf(stderr, "%s", err.str().c_str());
  return code;
}

Outcome determinism() {
  auto data = testing::scratch_dir("acc_det_data");
  if (cli({"synth", "--seed", "31", "--researchers", "600", "--institutions", "6", "--out", data.string()}) != 0) {
    return {false, "synth failed"};
  }
  auto a = testing::scratch_dir("acc_det_a");
  auto b = testing::scratch_dir("acc_det_b");
  if (cli({"score", "--data", data.string(), "--out", a.string(), "--threads", "1"}) != 0 ||
      cli({"score", "--data", data.string(), "--out", b.string(), "--threads", "8"}) != 0) {
    return {false, "score failed"};
  }
  std::size_t files = 0, same = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    ++files;
    if (fs::exists(b / e.path().filename()) && testing::slurp(e.path()) == testing::slurp(b / e.path().filename())) ++same;
  }
  return {files > 0 && files == same, std::to_string(same) + "/" + std::to_string(files) +
                                          " output files byte-identical (threads 1 vs 8)"};
}

Outcome throughput() {
  auto data = testing::scratch_dir("acc_big_data");
  SyntheticParams params;
  params.researchers = 38000;
  params.institutions = 60;
  params.sds_count = 40;
  params.uda_count = 8;
  Corpus corpus = generate_synthetic_corpus(100000, params);
  while (corpus.publications.size() < 100000) {
    params.researchers += 2000;
    corpus = generate_synthetic_corpus(100000, params);
  }
  export_corpus(corpus, CorpusPaths::in_directory(data));
  const std::size_t pubs = corpus.publications.size();
  corpus = Corpus{};
  auto out = testing::scratch_dir("acc_big_out");
  const auto t0 = Clock::now();
  const int code = cli({"score", "--data", data.string(), "--out", out.string()});
  const double secs = seconds_since(t0);
  return {code == 0 && secs < 30.0, std::to_string(pubs) + " publications scored end to end in " +
                                        fmt("%.2f", secs) + " s"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"percentile anchors", percentile_anchors},
      {"byline credit fixtures", credit_fixtures},
      {"oracle equivalence", oracle_equivalence},
      {"normalization property", normalization_property},
      {"salary-scale invariance", salary_invariance},
      {"quartile convention", quartile_convention},
      {"spearman oracle", spearman_oracle},
      {"DEA properties", dea_properties},
      {"determinism", determinism},
      {"throughput", throughput},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
