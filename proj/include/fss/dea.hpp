#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "fss/indicators.hpp"

namespace fss::dea {

struct Dmu {
  std::string id;
  std::vector<double> inputs;
  std::vector<double> outputs;
};

enum class Model { crs, vrs };

std::string to_string(Model model);

inline constexpr double frontier_tolerance = 1e-6;

struct Efficiency {
  std::string id;
  double phi = 1.0;         // maximal radial output expansion
  double efficiency = 1.0;  // 1 / phi
  std::vector<std::string> peers;  // reference DMUs with positive intensity
};

struct Result {
  Model model = Model::crs;
  std::vector<Efficiency> units;  // in input order
};

// Checks DMU homogeneity and positivity; throws InputError.
void validate(const std::vector<Dmu>& dmus);

// Output-oriented envelopment model, one linear program per DMU:
//   max phi  s.t.  sum_j lambda_j x_j <= x_o,  sum_j lambda_j y_j >= phi y_o,
//   lambda >= 0  (and sum_j lambda_j = 1 under VRS).
Result output_oriented(const std::vector<Dmu>& dmus, Model model, int threads = 1);

// TE_CRS / TE_VRS per DMU, in input order.
std::vector<std::pair<std::string, double>> scale_efficiency(const Result& crs, const Result& vrs);

struct DmuTable {
  std::vector<std::string> input_names;
  std::vector<std::string> output_names;
  std::vector<Dmu> dmus;
};

// dmus.csv: id column plus input_* and output_* columns.
DmuTable read_dmus(const std::filesystem::path& path);
void write_dmus(const DmuTable& table, const std::filesystem::path& path);

// One DMU per institution. Inputs: labor cost (salary x years) per academic
// rank. Outputs: fractional field-normalized impact and fractional
// publication count. Institutions without output are skipped.
DmuTable dmus_from_corpus(const ScoringContext& ctx);

}  // namespace fss::dea
