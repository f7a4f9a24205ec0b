#include "fss/dea.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "fss/csv.hpp"
#include "fss/error.hpp"
#include "fss/lp.hpp"
#include "fss/parallel.hpp"

namespace fss::dea {

std::string to_string(Model model) { return model == Model::crs ? "CRS" : "VRS"; }

void validate(const std::vector<Dmu>& dmus) {
  if (dmus.empty()) throw InputError("DEA needs at least one DMU");
  const std::size_t ni = dmus.front().inputs.size();
  const std::size_t no = dmus.front().outputs.size();
  if (ni == 0 || no == 0) throw InputError("DMUs need at least one input and one output");
  std::set<std::string> ids;
  for (const auto& d : dmus) {
    if (!ids.insert(d.id).second) throw InputError("duplicate DMU id '" + d.id + "'");
    if (d.inputs.size() != ni || d.outputs.size() != no) {
      throw InputError("DMU '" + d.id + "' has a different number of inputs or outputs");
    }
    auto check = [&](const std::vector<double>& v, const char* what) {
      bool positive = false;
      for (double x : v) {
        if (!std::isfinite(x) || x < 0.0) throw InputError("DMU '" + d.id + "' has a negative or non-finite " + what);
        positive = positive || x > 0.0;
      }
      if (!positive) throw InputError("DMU '" + d.id + "' needs at least one positive " + what);
    };
    check(d.inputs, "input");
    check(d.outputs, "output");
  }
}

namespace {

// Divides every column by its mean so the programs are well scaled; radial
// efficiencies do not depend on column units.
std::vector<Dmu> rescale(const std::vector<Dmu>& dmus) {
  std::vector<Dmu> out = dmus;
  auto normalize = [&](auto member, std::size_t width) {
    for (std::size_t k = 0; k < width; ++k) {
      double mean = 0.0;
      for (const auto& d : dmus) mean += (d.*member)[k];
      mean /= static_cast<double>(dmus.size());
      if (mean <= 0.0) continue;
      for (auto& d : out) (d.*member)[k] /= mean;
    }
  };
  normalize(&Dmu::inputs, dmus.front().inputs.size());
  normalize(&Dmu::outputs, dmus.front().outputs.size());
  return out;
}

Efficiency solve_one(const std::vector<Dmu>& dmus, std::size_t o, Model model) {
  const std::size_t n = dmus.size();
  lp::Program prog;
  prog.objective.assign(n + 1, 0.0);
  prog.objective[0] = 1.0;
  const Dmu& target = dmus[o];
  for (std::size_t i = 0; i < target.inputs.size(); ++i) {
    lp::Constraint row{std::vector<double>(n + 1, 0.0), lp::Relation::less_equal, target.inputs[i]};
    for (std::size_t j = 0; j < n; ++j) row.coefficients[j + 1] = dmus[j].inputs[i];
    prog.constraints.push_back(std::move(row));
  }
  for (std::size_t r = 0; r < target.outputs.size(); ++r) {
    lp::Constraint row{std::vector<double>(n + 1, 0.0), lp::Relation::less_equal, 0.0};
    row.coefficients[0] = target.outputs[r];
    for (std::size_t j = 0; j < n; ++j) row.coefficients[j + 1] = -dmus[j].outputs[r];
    prog.constraints.push_back(std::move(row));
  }
  if (model == Model::vrs) {
    lp::Constraint row{std::vector<double>(n + 1, 1.0), lp::Relation::equal, 1.0};
    row.coefficients[0] = 0.0;
    prog.constraints.push_back(std::move(row));
  }

  lp::Solution sol;
  try {
    sol = lp::solve(prog);
  } catch (const ComputationError& e) {
    throw ComputationError("DEA (" + to_string(model) + ") failed for DMU '" + target.id + "': " + e.what());
  }
  Efficiency eff;
  eff.id = target.id;
  eff.phi = std::max(1.0, sol.objective);
  eff.efficiency = 1.0 / eff.phi;
  for (std::size_t j = 0; j < n; ++j) {
    if (sol.x[j + 1] > 1e-9) eff.peers.push_back(dmus[j].id);
  }
  return eff;
}

}  // namespace

Result output_oriented(const std::vector<Dmu>& dmus, Model model, int threads) {
  validate(dmus);
  const auto scaled = rescale(dmus);
  Result result;
  result.model = model;
  result.units.resize(dmus.size());
  parallel_for(dmus.size(), threads, [&](std::size_t o) { result.units[o] = solve_one(scaled, o, model); });
  return result;
}

std::vector<std::pair<std::string, double>> scale_efficiency(const Result& crs, const Result& vrs) {
  if (crs.units.size() != vrs.units.size()) throw InputError("CRS and VRS results cover different DMU sets");
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t i = 0; i < crs.units.size(); ++i) {
    if (crs.units[i].id != vrs.units[i].id) throw InputError("CRS and VRS results cover different DMU sets");
    out.emplace_back(crs.units[i].id, crs.units[i].efficiency / vrs.units[i].efficiency);
  }
  return out;
}

DmuTable read_dmus(const std::filesystem::path& path) {
  auto table = csv::read_file(path);
  const auto& header = table.header();
  if (header.empty() || header.front() != "id") throw InputError(path.string() + ": first column must be 'id'");
  DmuTable out;
  std::vector<std::size_t> in_cols, out_cols;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c].starts_with("input_")) {
      in_cols.push_back(c);
      out.input_names.push_back(header[c]);
    } else if (header[c].starts_with("output_")) {
      out_cols.push_back(c);
      out.output_names.push_back(header[c]);
    } else {
      throw InputError(path.string() + ": column '" + header[c] + "' is neither input_* nor output_*");
    }
  }
  if (in_cols.empty() || out_cols.empty()) {
    throw InputError(path.string() + ": need at least one input_* and one output_* column");
  }
  for (const auto& row : table.rows()) {
    Dmu d;
    d.id = table.text(row, 0);
    if (d.id.empty()) table.fail(row, 0, "empty DMU id");
    for (auto c : in_cols) d.inputs.push_back(table.real(row, c));
    for (auto c : out_cols) d.outputs.push_back(table.real(row, c));
    out.dmus.push_back(std::move(d));
  }
  try {
    validate(out.dmus);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return out;
}

void write_dmus(const DmuTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path.string() + ": cannot open for writing");
  std::vector<std::string> header{"id"};
  header.insert(header.end(), table.input_names.begin(), table.input_names.end());
  header.insert(header.end(), table.output_names.begin(), table.output_names.end());
  csv::write_row(out, header);
  for (const auto& d : table.dmus) {
    std::vector<std::string> row{d.id};
    for (double v : d.inputs) row.push_back(csv::format_number(v));
    for (double v : d.outputs) row.push_back(csv::format_number(v));
    csv::write_row(out, row);
  }
}

DmuTable dmus_from_corpus(const ScoringContext& ctx) {
  const Corpus& corpus = ctx.corpus();
  std::set<std::string> ranks;
  for (const auto& r : corpus.researchers) ranks.insert(r.rank);
  std::vector<std::string> rank_list(ranks.begin(), ranks.end());

  struct Accum {
    std::map<std::string, double> cost;
    double impact = 0.0;
    double papers = 0.0;
  };
  std::map<std::string, Accum> by_inst;
  for (std::size_t i = 0; i < corpus.researchers.size(); ++i) {
    const auto& r = corpus.researchers[i];
    auto& acc = by_inst[r.institution];
    acc.cost[r.rank] += labor_cost(r);
    for (const auto& c : ctx.contributions(i)) {
      acc.impact += c.impact * c.credit;
      acc.papers += c.credit;
    }
  }

  DmuTable table;
  for (const auto& rank : rank_list) table.input_names.push_back("input_cost_" + rank);
  table.output_names = {"output_fractional_impact", "output_fractional_papers"};
  for (const auto& [inst, acc] : by_inst) {
    if (!(acc.impact > 0.0) && !(acc.papers > 0.0)) continue;
    Dmu d;
    d.id = inst;
    for (const auto& rank : rank_list) {
      auto it = acc.cost.find(rank);
      d.inputs.push_back(it == acc.cost.end() ? 0.0 : it->second);
    }
    d.outputs = {acc.impact, acc.papers};
    table.dmus.push_back(std::move(d));
  }
  return table;
}

}  // namespace fss::dea
