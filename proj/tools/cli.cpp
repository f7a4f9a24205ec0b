#include "cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "fss/config.hpp"
#include "fss/corpus.hpp"
#include "fss/credit.hpp"
#include "fss/csv.hpp"
#include "fss/dea.hpp"
#include "fss/error.hpp"
#include "fss/indicators.hpp"
#include "fss/normalize.hpp"
#include "fss/rankings.hpp"

namespace fss::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

std::string file_sha256(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path.string() + ": cannot open for writing");
  return out;
}

struct CorpusArgs {
  std::string data_dir;
  std::string researchers, publications, bylines, taxonomy, salaries;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--data", data_dir, "Directory holding researchers/publications/bylines/taxonomy/salaries.csv");
    cmd->add_option("--researchers", researchers, "researchers.csv (overrides --data)");
    cmd->add_option("--publications", publications, "publications.csv (overrides --data)");
    cmd->add_option("--bylines", bylines, "bylines.csv (overrides --data)");
    cmd->add_option("--taxonomy", taxonomy, "taxonomy.csv (overrides --data)");
    cmd->add_option("--salaries", salaries, "salaries.csv (overrides --data)");
  }

  CorpusPaths paths() const {
    CorpusPaths p = CorpusPaths::in_directory(data_dir.empty() ? fs::path(".") : fs::path(data_dir));
    if (!researchers.empty()) p.researchers = researchers;
    if (!publications.empty()) p.publications = publications;
    if (!bylines.empty()) p.bylines = bylines;
    if (!taxonomy.empty()) p.taxonomy = taxonomy;
    if (!salaries.empty()) p.salaries = salaries;
    for (const fs::path* f : {&p.researchers, &p.publications, &p.bylines, &p.taxonomy, &p.salaries}) {
      if (!fs::is_regular_file(*f)) throw InputError(f->string() + ": file not found");
    }
    return p;
  }
};

LoadedConfig resolve_config(const std::string& path, std::ostream& err) {
  LoadedConfig loaded = path.empty() ? parse_config(json::object()) : load_config(path);
  if (!loaded.defaults_used.empty()) {
    const json canonical = to_json(loaded.config);
    err << "using defaults:";
    for (const auto& key : loaded.defaults_used) err << ' ' << key << '=' << canonical.at(key).dump();
    err << '\n';
  }
  return loaded;
}

LoadResult load_with(const CorpusPaths& paths, const RunConfig& config) {
  return load_corpus(paths, LoadOptions{config.window, config.citation_cutoff});
}

json report_json(const LoadReport& report) {
  return json{{"researchers", report.researchers},
              {"publications", report.publications},
              {"authorships", report.authorships},
              {"external_authorships", report.external_authorships},
              {"warnings", report.warnings}};
}

// --- validate ---------------------------------------------------------------

int cmd_validate(const CorpusArgs& corpus_args, const std::string& config_path, std::ostream& out, std::ostream& err) {
  auto loaded = resolve_config(config_path, err);
  auto result = load_with(corpus_args.paths(), loaded.config);
  for (const auto& w : result.report.warnings) err << "warning: " << w << '\n';
  out << report_json(result.report).dump(2) << '\n';
  return 0;
}

// --- score ------------------------------------------------------------------

struct ScoreArgs {
  CorpusArgs corpus;
  std::string config_path;
  std::string out_dir;
  std::string baselines;
  std::string scope;
  int threads = 0;
};

int cmd_score(const ScoreArgs& args, std::ostream& out, std::ostream& err) {
  auto loaded = resolve_config(args.config_path, err);
  RunConfig config = loaded.config;
  if (!args.out_dir.empty()) config.output_dir = args.out_dir;
  if (!args.baselines.empty()) config.baselines = args.baselines;
  if (!args.scope.empty()) config.scope = parse_scope(args.scope);
  config.validate();

  const CorpusPaths paths = args.corpus.paths();
  auto loaded_corpus = load_with(paths, config);
  for (const auto& w : loaded_corpus.report.warnings) err << "warning: " << w << '\n';
  const BaselineTable baselines = config.baselines == "computed" ? compute_baselines(loaded_corpus.corpus)
                                                                 : read_baselines(config.baselines);
  auto excluded = apply_exclusions(loaded_corpus.corpus, config.exclusions);
  const Corpus& corpus = excluded.corpus;

  SchemeBook schemes(corpus.taxonomy, config.byline_weights, config.byline_weights_per_sds);
  ScoringContext ctx(corpus, baselines, schemes, args.threads);
  IndicatorOptions options{config.scope, args.threads, config.regions};
  IndicatorResults results = compute_indicators(ctx, options);

  const fs::path dir = config.output_dir;
  fs::create_directories(dir);
  {
    auto f = open_output(dir / "scores.csv");
    f << "level,unit_id,indicator,value\n";
    for (const auto& set : results.sets) {
      for (const auto& e : set.entries) {
        std::vector<std::string> row{to_string(set.level), e.unit_id, set.indicator, csv::format_number(e.value)};
        csv::write_row(f, row);
      }
    }
  }
  {
    auto f = open_output(dir / "units.csv");
    f << "level,unit_id,group\n";
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& set : results.sets) {
      for (const auto& e : set.entries) {
        if (!seen.insert({to_string(set.level), e.unit_id}).second) continue;
        std::vector<std::string> row{to_string(set.level), e.unit_id, e.group};
        csv::write_row(f, row);
      }
    }
  }
  {
    auto f = open_output(dir / "field_means.csv");
    f << "sds,indicator,mean\n";
    const std::pair<const char*, const std::map<std::string, double>*> tables[] = {
        {"FSS_R", &results.means.fss_r}, {"FSS_S", &results.means.fss_s}, {"Q", &results.means.q},
        {"FQ", &results.means.fq}};
    for (const auto& [name, table] : tables) {
      for (const auto& [sds, mean] : *table) {
        std::vector<std::string> row{sds, name, csv::format_number(mean)};
        csv::write_row(f, row);
      }
    }
  }
  write_baselines(baselines, dir / "baselines.csv");
  dea::write_dmus(dea::dmus_from_corpus(ctx), dir / "dmus.csv");

  json report;
  report["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  // The output location is left out so reruns into another directory stay
  // byte-identical.
  json config_doc = to_json(config);
  config_doc.erase("output_dir");
  report["config"] = config_doc;
  report["config_sha256"] = sha256_hex(config_doc.dump());
  report["defaults_used"] = loaded.defaults_used;
  json inputs = json::object();
  for (const auto& [name, path] : std::vector<std::pair<std::string, fs::path>>{{"researchers", paths.researchers},
                                                                                {"publications", paths.publications},
                                                                                {"bylines", paths.bylines},
                                                                                {"taxonomy", paths.taxonomy},
                                                                                {"salaries", paths.salaries}}) {
    inputs[name] = {{"file", path.filename().string()}, {"sha256", file_sha256(path)}};
  }
  if (config.baselines != "computed") inputs["baselines"] = {{"file", fs::path(config.baselines).filename().string()}, {"sha256", file_sha256(config.baselines)}};
  report["inputs"] = inputs;
  report["load"] = report_json(loaded_corpus.report);
  json excl;
  excl["researchers"] = excluded.report.excluded_researchers;
  excl["uda_groups"] = json::array();
  for (const auto& [inst, uda] : corpus.excluded_uda_groups) excl["uda_groups"].push_back(inst + "|" + uda);
  excl["institutions"] = corpus.excluded_institutions;
  report["exclusions"] = excl;
  json sets = json::array();
  for (const auto& set : results.sets) {
    sets.push_back({{"level", to_string(set.level)}, {"indicator", set.indicator}, {"units", set.entries.size()}});
  }
  report["score_sets"] = sets;
  report["window"] = {{"start", corpus.window.start_year}, {"end", corpus.window.end_year}};
  report["citation_cutoff"] = corpus.citation_cutoff;
  {
    auto f = open_output(dir / "report.json");
    f << report.dump(2) << '\n';
  }
  out << "wrote " << results.sets.size() << " score sets to " << dir.string() << '\n';
  return 0;
}

// --- rank -------------------------------------------------------------------

struct RankArgs {
  std::string scores_dir;
  std::string out_dir = "rankings";
  bool standardized = false;
  bool aggregate_percentile = false;
  CorpusArgs corpus;
  std::string config_path;
};

std::string ranking_dir_for(const std::string& level) {
  // UDA lists and the whole-institution list sit side by side so that
  // comparing two indicator directories yields one row per UDA plus "total".
  if (level == "university_uda" || level == "university_total") return "university";
  return level;
}

int cmd_rank(const RankArgs& args, std::ostream& out, std::ostream& err) {
  const fs::path in = args.scores_dir;
  std::map<std::pair<std::string, std::string>, std::string> group_of;
  {
    auto table = csv::read_file(in / "units.csv");
    const auto c_level = table.column("level"), c_id = table.column("unit_id"), c_group = table.column("group");
    for (const auto& row : table.rows()) {
      group_of[{table.text(row, c_level), table.text(row, c_id)}] = table.text(row, c_group);
    }
  }
  std::map<std::tuple<std::string, std::string>, ScoreSet> sets;  // (level, indicator)
  {
    auto table = csv::read_file(in / "scores.csv");
    const auto c_level = table.column("level"), c_id = table.column("unit_id");
    const auto c_ind = table.column("indicator"), c_val = table.column("value");
    for (const auto& row : table.rows()) {
      const auto& level = table.text(row, c_level);
      const auto& id = table.text(row, c_id);
      auto& set = sets[{level, table.text(row, c_ind)}];
      set.level = parse_level(level);
      set.indicator = table.text(row, c_ind);
      auto g = group_of.find({level, id});
      if (g == group_of.end()) table.fail(row, c_id, "unit missing from units.csv");
      std::string group = set.level == Level::university_total ? "total" : g->second;
      set.entries.push_back(ScoreEntry{id, group, table.real(row, c_val)});
    }
  }
  FieldMeans means;
  if (args.standardized) {
    auto table = csv::read_file(in / "field_means.csv");
    const auto c_sds = table.column("sds"), c_ind = table.column("indicator"), c_mean = table.column("mean");
    for (const auto& row : table.rows()) {
      const auto& ind = table.text(row, c_ind);
      double m = table.real(row, c_mean);
      if (ind == "FSS_R") means.fss_r[table.text(row, c_sds)] = m;
      if (ind == "FSS_S") means.fss_s[table.text(row, c_sds)] = m;
    }
  }

  const fs::path out_dir = args.out_dir;
  std::size_t files = 0;
  auto dist = open_output(out_dir / "percentile_distribution.csv");
  dist << "level,indicator,group,percentile_bin,count\n";
  for (const auto& [key, set] : sets) {
    const auto& [level, indicator] = key;
    std::map<std::string, std::vector<ScoreEntry>> by_group;
    for (const auto& e : set.entries) by_group[e.group].push_back(e);
    for (const auto& [group, entries] : by_group) {
      RankedList list = percentile_rank(entries);
      write_ranking(list, out_dir / ranking_dir_for(level) / indicator / (group + ".csv"));
      ++files;
      std::map<int, int> bins;
      for (const auto& e : list.entries) ++bins[std::min(9, static_cast<int>(e.percentile / 10.0))];
      for (const auto& [bin, count] : bins) {
        std::vector<std::string> row{level, indicator, group, std::to_string(bin * 10) + "-" + std::to_string(bin * 10 + 10),
                                     std::to_string(count)};
        csv::write_row(dist, row);
      }
      if (args.standardized && (indicator == "FSS_R" || indicator == "FSS_S")) {
        ScoreSet subset{set.level, indicator, entries};
        write_ranking(standardized_list(subset, means), out_dir / ranking_dir_for(level) / (indicator + "_std") / (group + ".csv"));
        ++files;
      }
    }
  }

  if (args.aggregate_percentile) {
    auto researcher_set = sets.find({"researcher", "FSS_R"});
    if (researcher_set == sets.end()) throw InputError("scores.csv has no researcher-level FSS_R");
    auto loaded = resolve_config(args.config_path, err);
    auto corpus = apply_exclusions(load_with(args.corpus.paths(), loaded.config).corpus, loaded.config.exclusions).corpus;
    std::map<std::string, std::vector<std::string>> departments, universities;
    for (const auto& r : corpus.researchers) {
      universities[r.institution].push_back(r.id);
      if (!r.department.empty()) departments[r.institution + "|" + r.department].push_back(r.id);
    }
    for (const auto& [name, members] : {std::pair{"department", &departments}, std::pair{"university", &universities}}) {
      auto agg = average_percentiles(researcher_set->second, *members);
      if (agg.entries.empty()) continue;
      err << "warning: " << agg.warning << '\n';
      write_ranking(percentile_rank(agg.entries), out_dir / "percentile_aggregate" / (std::string(name) + ".csv"));
      ++files;
    }
  }
  out << "wrote " << files << " ranking files to " << out_dir.string() << '\n';
  return 0;
}

// --- compare ----------------------------------------------------------------

json stats_json(const ComparisonStats& s) {
  return json{{"n_units", s.n_units},           {"pct_shifting", s.pct_shifting}, {"avg_shift", s.avg_shift},
              {"median_shift", s.median_shift}, {"max_shift", s.max_shift},       {"spearman", s.spearman},
              {"top_quartile_exit", s.top_quartile_exit}};
}

int cmd_compare(const std::string& a, const std::string& b, const std::string& out_path, std::ostream& out) {
  std::vector<std::tuple<std::string, fs::path, fs::path>> pairs;
  const bool dir_a = fs::is_directory(a), dir_b = fs::is_directory(b);
  if (dir_a != dir_b) throw InputError("compare: both arguments must be files or both directories");
  if (!dir_a) {
    pairs.emplace_back("all", a, b);
  } else {
    auto stems = [](const fs::path& dir) {
      std::map<std::string, fs::path> m;
      for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") m[entry.path().stem().string()] = entry.path();
      }
      return m;
    };
    auto ma = stems(a), mb = stems(b);
    std::string missing;
    for (const auto& [k, v] : ma) if (!mb.count(k)) missing += " -" + k;
    for (const auto& [k, v] : mb) if (!ma.count(k)) missing += " +" + k;
    if (!missing.empty()) throw InputError("compare: ranking groups differ:" + missing);
    if (ma.empty()) throw InputError("compare: no ranking files in " + a);
    for (const auto& [k, v] : ma) pairs.emplace_back(k, v, mb.at(k));
  }

  json doc;
  doc["a"] = a;
  doc["b"] = b;
  doc["columns"] = {"n_units", "pct_shifting", "avg_shift", "median_shift", "max_shift", "spearman", "top_quartile_exit"};
  json groups = json::object();
  fs::path hist_path = fs::path(out_path).parent_path() / (fs::path(out_path).stem().string() + "_shifts.csv");
  auto hist = open_output(hist_path);
  hist << "group,shift,count\n";
  for (const auto& [group, pa, pb] : pairs) {
    RankedList la = read_ranking(pa), lb = read_ranking(pb);
    groups[group] = stats_json(compare_rankings(la, lb));
    for (const auto& [shift, count] : shift_histogram(la, lb)) {
      std::vector<std::string> row{group, std::to_string(shift), std::to_string(count)};
      csv::write_row(hist, row);
    }
  }
  doc["groups"] = groups;
  {
    auto f = open_output(out_path);
    f << doc.dump(2) << '\n';
  }
  out << "compared " << pairs.size() << " group(s); wrote " << out_path << '\n';
  return 0;
}

// --- dea --------------------------------------------------------------------

int cmd_dea(const std::string& dmus_path, const std::string& model, const std::string& out_dir, int threads,
            std::ostream& out) {
  auto table = dea::read_dmus(dmus_path);
  std::vector<dea::Result> results;
  if (model == "crs" || model == "both") results.push_back(dea::output_oriented(table.dmus, dea::Model::crs, threads));
  if (model == "vrs" || model == "both") results.push_back(dea::output_oriented(table.dmus, dea::Model::vrs, threads));
  const fs::path dir = out_dir;
  {
    auto f = open_output(dir / "dea_results.csv");
    f << "id,model,phi,efficiency,peers\n";
    for (const auto& res : results) {
      for (const auto& u : res.units) {
        std::string peers;
        for (std::size_t i = 0; i < u.peers.size(); ++i) peers += (i ? ";" : "") + u.peers[i];
        std::vector<std::string> row{u.id, dea::to_string(res.model), csv::format_number(u.phi),
                                     csv::format_number(u.efficiency), peers};
        csv::write_row(f, row);
      }
    }
  }
  if (results.size() == 2) {
    auto se = dea::scale_efficiency(results[0], results[1]);
    auto f = open_output(dir / "scale_efficiency.csv");
    f << "id,te_crs,te_vrs,se\n";
    for (std::size_t i = 0; i < se.size(); ++i) {
      std::vector<std::string> row{se[i].first, csv::format_number(results[0].units[i].efficiency),
                                   csv::format_number(results[1].units[i].efficiency), csv::format_number(se[i].second)};
      csv::write_row(f, row);
    }
  }
  out << "evaluated " << table.dmus.size() << " DMUs\n";
  return 0;
}

// --- synth ------------------------------------------------------------------

int cmd_synth(std::uint64_t seed, const SyntheticParams& params, const std::string& out_dir, std::ostream& out) {
  Corpus corpus = generate_synthetic_corpus(seed, params);
  const fs::path dir = out_dir;
  export_corpus(corpus, CorpusPaths::in_directory(dir));
  RunConfig config;
  config.window = corpus.window;
  config.citation_cutoff = corpus.citation_cutoff;
  config.seed = seed;
  {
    auto f = open_output(dir / "config.json");
    f << to_json(config).dump(2) << '\n';
  }
  out << "generated " << corpus.researchers.size() << " researchers and " << corpus.publications.size()
      << " publications in " << dir.string() << '\n';
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Field- and cost-normalized research productivity (FSS) toolkit", kToolName};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  CorpusArgs validate_corpus;
  std::string validate_config;
  auto* validate = app.add_subcommand("validate", "Load and check a corpus, print the load report");
  validate_corpus.add_to(validate);
  validate->add_option("--config", validate_config, "Run configuration (JSON)");

  ScoreArgs score_args;
  auto* score = app.add_subcommand("score", "Compute FSS_R/S/D/U, P_U and FP_U score files");
  score_args.corpus.add_to(score);
  score->add_option("--config", score_args.config_path, "Run configuration (JSON)");
  score->add_option("--out", score_args.out_dir, "Output directory (overrides config output_dir)");
  score->add_option("--baselines", score_args.baselines, "External baselines.csv (overrides config)");
  score->add_option("--scope", score_args.scope, "sds|department|university|region|country");
  score->add_option("--threads", score_args.threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

  RankArgs rank_args;
  auto* rank = app.add_subcommand("rank", "Turn score files into percentile ranking lists");
  rank->add_option("--scores", rank_args.scores_dir, "Output directory of 'score'")->required();
  rank->add_option("--out", rank_args.out_dir, "Directory for ranking CSVs");
  rank->add_flag("--standardized", rank_args.standardized, "Also rank by ratio to the productive field mean");
  rank->add_flag("--aggregate-percentile", rank_args.aggregate_percentile,
                 "Also average researcher percentiles per department and university (needs the corpus)");
  rank_args.corpus.add_to(rank);
  rank->add_option("--config", rank_args.config_path, "Run configuration (JSON)");

  std::string cmp_a, cmp_b, cmp_out = "comparison.json";
  auto* compare = app.add_subcommand("compare", "Compare two ranking lists (files or group directories)");
  compare->add_option("a", cmp_a, "Reference ranking (file or directory)")->required();
  compare->add_option("b", cmp_b, "Other ranking (file or directory)")->required();
  compare->add_option("--out", cmp_out, "Output JSON path");

  std::string dea_path, dea_model = "both", dea_out = "dea";
  int dea_threads = 0;
  auto* dea_cmd = app.add_subcommand("dea", "Output-oriented DEA efficiency under CRS and/or VRS");
  dea_cmd->add_option("--dmus", dea_path, "dmus.csv")->required();
  dea_cmd->add_option("--model", dea_model, "crs|vrs|both")->check(CLI::IsMember({"crs", "vrs", "both"}));
  dea_cmd->add_option("--out", dea_out, "Output directory");
  dea_cmd->add_option("--threads", dea_threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

  std::uint64_t synth_seed = 1;
  SyntheticParams synth_params;
  std::string synth_out = "synthetic";
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus fixture");
  synth->add_option("--seed", synth_seed, "Random seed");
  synth->add_option("--researchers", synth_params.researchers, "Number of researchers");
  synth->add_option("--sds", synth_params.sds_count, "Number of fields (SDS)");
  synth->add_option("--udas", synth_params.uda_count, "Number of disciplines (UDA)");
  synth->add_option("--institutions", synth_params.institutions, "Number of institutions");
  synth->add_option("--lotka-exponent", synth_params.lotka_exponent, "Exponent of the paper-count distribution");
  synth->add_option("--max-papers", synth_params.max_papers, "Largest per-researcher paper count");
  synth->add_option("--out", synth_out, "Output directory");

  std::vector<const char*> argv{kToolName};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate) return cmd_validate(validate_corpus, validate_config, out, err);
    if (*score) return cmd_score(score_args, out, err);
    if (*rank) return cmd_rank(rank_args, out, err);
    if (*compare) return cmd_compare(cmp_a, cmp_b, cmp_out, out);
    if (*dea_cmd) return cmd_dea(dea_path, dea_model, dea_out, dea_threads, out);
    if (*synth) return cmd_synth(synth_seed, synth_params, synth_out, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace fss::cli
