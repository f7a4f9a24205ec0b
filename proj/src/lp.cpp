#include "fss/lp.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace fss::lp {

namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), cells_((rows + 1) * (cols + 1), 0.0) {}

  double& at(std::size_t r, std::size_t c) { return cells_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return cells_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double& cost(std::size_t c) { return at(rows_, c); }  // objective row
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) /= p;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
  }

 private:
  std::size_t rows_, cols_;
  std::vector<double> cells_;
};

// Loads maximize(costs . x) into the objective row, priced out against the
// current basis.
void set_objective(Tableau& t, const std::vector<double>& costs, const std::vector<std::size_t>& basis) {
  for (std::size_t c = 0; c <= t.cols(); ++c) t.cost(c) = c < costs.size() ? -costs[c] : 0.0;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    const double f = t.cost(basis[r]);
    if (f == 0.0) continue;
    for (std::size_t c = 0; c <= t.cols(); ++c) t.cost(c) -= f * t.at(r, c);
  }
}

enum class Outcome { optimal, unbounded };

Outcome run_simplex(Tableau& t, std::vector<std::size_t>& basis, std::size_t allowed_cols, double eps) {
  const std::size_t limit = 100000 + 50 * (t.rows() + t.cols()) * (t.rows() + 1);
  for (std::size_t iter = 0; iter < limit; ++iter) {
    std::size_t enter = allowed_cols;
    for (std::size_t c = 0; c < allowed_cols; ++c) {
      if (t.cost(c) < -eps) {
        enter = c;
        break;
      }
    }
    if (enter == allowed_cols) return Outcome::optimal;

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < t.rows(); ++r) {
      const double a = t.at(r, enter);
      if (a > eps) best = std::min(best, t.rhs(r) / a);
    }
    if (best == std::numeric_limits<double>::infinity()) return Outcome::unbounded;
    // Among (near-)tied minimum ratios, the smallest basic index leaves.
    std::size_t leave = t.rows();
    for (std::size_t r = 0; r < t.rows(); ++r) {
      const double a = t.at(r, enter);
      if (a <= eps || t.rhs(r) / a > best + eps * (1.0 + std::abs(best))) continue;
      if (leave == t.rows() || basis[r] < basis[leave]) leave = r;
    }
    t.pivot(leave, enter);
    basis[leave] = enter;
  }
  throw ComputationError("simplex iteration limit exceeded");
}

}  // namespace

Solution solve(const Program& program, double tolerance) {
  const std::size_t n = program.objective.size();
  const std::size_t m = program.constraints.size();
  if (n == 0) throw ComputationError("linear program has no variables");

  std::vector<Constraint> rows = program.constraints;
  std::size_t slack_count = 0, artificial_count = 0;
  for (auto& row : rows) {
    if (row.coefficients.size() != n) throw ComputationError("constraint width does not match objective");
    if (row.rhs < 0.0) {
      for (auto& a : row.coefficients) a = -a;
      row.rhs = -row.rhs;
      if (row.relation == Relation::less_equal) {
        row.relation = Relation::greater_equal;
      } else if (row.relation == Relation::greater_equal) {
        row.relation = Relation::less_equal;
      }
    }
    if (row.relation != Relation::equal) ++slack_count;
    if (row.relation != Relation::less_equal) ++artificial_count;
  }

  // Columns: [structural | slack/surplus | artificial]
  const std::size_t first_slack = n;
  const std::size_t first_artificial = n + slack_count;
  const std::size_t cols = first_artificial + artificial_count;
  Tableau t(m, cols);
  std::vector<std::size_t> basis(m);
  std::size_t next_slack = first_slack, next_art = first_artificial;
  double scale = 1.0;
  for (std::size_t r = 0; r < m; ++r) {
    const auto& row = rows[r];
    for (std::size_t c = 0; c < n; ++c) t.at(r, c) = row.coefficients[c];
    t.rhs(r) = row.rhs;
    scale = std::max(scale, std::abs(row.rhs));
    switch (row.relation) {
      case Relation::less_equal:
        t.at(r, next_slack) = 1.0;
        basis[r] = next_slack++;
        break;
      case Relation::greater_equal:
        t.at(r, next_slack++) = -1.0;
        t.at(r, next_art) = 1.0;
        basis[r] = next_art++;
        break;
      case Relation::equal:
        t.at(r, next_art) = 1.0;
        basis[r] = next_art++;
        break;
    }
  }

  if (artificial_count > 0) {
    std::vector<double> phase1(cols, 0.0);
    for (std::size_t c = first_artificial; c < cols; ++c) phase1[c] = -1.0;
    set_objective(t, phase1, basis);
    run_simplex(t, basis, cols, tolerance);
    if (t.rhs(m) < -tolerance * scale) throw Infeasible("linear program is infeasible");

    // Pivot remaining zero-level artificials out of the basis. Rows where no
    // structural or slack column can replace them are redundant.
    for (std::size_t r = 0; r < m; ++r) {
      if (basis[r] < first_artificial) continue;
      for (std::size_t c = 0; c < first_artificial; ++c) {
        if (std::abs(t.at(r, c)) > tolerance) {
          t.pivot(r, c);
          basis[r] = c;
          break;
        }
      }
    }
  }

  std::vector<double> costs(cols, 0.0);
  for (std::size_t c = 0; c < n; ++c) costs[c] = program.objective[c];
  set_objective(t, costs, basis);
  if (run_simplex(t, basis, first_artificial, tolerance) == Outcome::unbounded) {
    throw Unbounded("linear program is unbounded");
  }

  Solution sol;
  sol.x.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) sol.x[basis[r]] = std::max(0.0, t.rhs(r));
  }
  sol.objective = 0.0;
  for (std::size_t c = 0; c < n; ++c) sol.objective += program.objective[c] * sol.x[c];
  return sol;
}

}  // namespace fss::lp
