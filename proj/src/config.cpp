#include "fss/config.hpp"

#include <fstream>
#include <set>

#include "fss/error.hpp"

namespace fss {

using nlohmann::json;

void RunConfig::validate() const {
  if (window.end_year < window.start_year) throw InputError("config: observation window is empty");
  if (exclusions.min_years < 0 || exclusions.min_staff_uda < 0 || exclusions.min_staff_total < 0) {
    throw InputError("config: exclusion thresholds must be nonnegative");
  }
  byline_weights.validate();
  for (const auto& [sds, w] : byline_weights_per_sds) w.validate();
  if (scope == Scope::region && regions.empty()) throw InputError("config: scope 'region' needs a regions map");
}

json to_json(const PositionWeights& w) {
  return json{{"intra_first", w.intra_first},   {"intra_last", w.intra_last},
              {"intra_rest", w.intra_rest},     {"extra_first", w.extra_first},
              {"extra_last", w.extra_last},     {"extra_second", w.extra_second},
              {"extra_second_last", w.extra_second_last}, {"extra_rest", w.extra_rest}};
}

json to_json(const RunConfig& c) {
  json per_sds = json::object();
  for (const auto& [sds, w] : c.byline_weights_per_sds) per_sds[sds] = to_json(w);
  return json{{"window", {{"start", c.window.start_year}, {"end", c.window.end_year}}},
              {"citation_cutoff", c.citation_cutoff},
              {"exclusions",
               {{"min_years", c.exclusions.min_years},
                {"min_staff_uda", c.exclusions.min_staff_uda},
                {"min_staff_total", c.exclusions.min_staff_total}}},
              {"byline_weights", {{"default", to_json(c.byline_weights)}, {"per_sds", per_sds}}},
              {"baselines", c.baselines},
              {"scope", to_string(c.scope)},
              {"output_dir", c.output_dir},
              {"seed", c.seed},
              {"regions", c.regions}};
}

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& where) {
  std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw InputError("config: unknown key '" + where + key + "'");
  }
}

PositionWeights parse_weights(const json& obj, PositionWeights w, const std::string& where) {
  if (!obj.is_object()) throw InputError("config: '" + where + "' must be an object");
  reject_unknown(obj,
                 {"intra_first", "intra_last", "intra_rest", "extra_first", "extra_last", "extra_second",
                  "extra_second_last", "extra_rest"},
                 where + ".");
  auto get = [&](const char* key, double& slot) {
    if (obj.contains(key)) slot = obj.at(key).get<double>();
  };
  get("intra_first", w.intra_first);
  get("intra_last", w.intra_last);
  get("intra_rest", w.intra_rest);
  get("extra_first", w.extra_first);
  get("extra_last", w.extra_last);
  get("extra_second", w.extra_second);
  get("extra_second_last", w.extra_second_last);
  get("extra_rest", w.extra_rest);
  return w;
}

}  // namespace

LoadedConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw InputError("config: top level must be a JSON object");
  reject_unknown(doc,
                 {"window", "citation_cutoff", "exclusions", "byline_weights", "baselines", "scope", "output_dir",
                  "seed", "regions"},
                 "");
  LoadedConfig out;
  RunConfig& c = out.config;
  auto present = [&](const char* key) {
    if (doc.contains(key)) return true;
    out.defaults_used.push_back(key);
    return false;
  };
  try {
    if (present("window")) {
      const auto& w = doc.at("window");
      reject_unknown(w, {"start", "end"}, "window.");
      c.window.start_year = w.at("start").get<int>();
      c.window.end_year = w.at("end").get<int>();
    }
    if (present("citation_cutoff")) c.citation_cutoff = doc.at("citation_cutoff").get<std::string>();
    if (present("exclusions")) {
      const auto& e = doc.at("exclusions");
      reject_unknown(e, {"min_years", "min_staff_uda", "min_staff_total"}, "exclusions.");
      if (e.contains("min_years")) c.exclusions.min_years = e.at("min_years").get<double>();
      if (e.contains("min_staff_uda")) c.exclusions.min_staff_uda = e.at("min_staff_uda").get<int>();
      if (e.contains("min_staff_total")) c.exclusions.min_staff_total = e.at("min_staff_total").get<int>();
    }
    if (present("byline_weights")) {
      const auto& b = doc.at("byline_weights");
      reject_unknown(b, {"default", "per_sds"}, "byline_weights.");
      if (b.contains("default")) c.byline_weights = parse_weights(b.at("default"), c.byline_weights, "byline_weights.default");
      if (b.contains("per_sds")) {
        for (const auto& [sds, w] : b.at("per_sds").items()) {
          c.byline_weights_per_sds[sds] = parse_weights(w, c.byline_weights, "byline_weights.per_sds." + sds);
        }
      }
    }
    if (present("baselines")) c.baselines = doc.at("baselines").get<std::string>();
    if (present("scope")) c.scope = parse_scope(doc.at("scope").get<std::string>());
    if (present("output_dir")) c.output_dir = doc.at("output_dir").get<std::string>();
    if (present("seed")) c.seed = doc.at("seed").get<std::uint64_t>();
    if (present("regions")) c.regions = doc.at("regions").get<std::map<std::string, std::string>>();
  } catch (const json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  c.validate();
  return out;
}

LoadedConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string() + ": cannot open config file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  try {
    return parse_config(doc);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace fss
