#pragma once

#include <vector>

#include "fss/error.hpp"

namespace fss::lp {

enum class Relation { less_equal, greater_equal, equal };

struct Constraint {
  std::vector<double> coefficients;
  Relation relation = Relation::less_equal;
  double rhs = 0.0;
};

// maximize objective . x subject to constraints, x >= 0
struct Program {
  std::vector<double> objective;
  std::vector<Constraint> constraints;
};

struct Solution {
  double objective = 0.0;
  std::vector<double> x;
};

class Infeasible : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class Unbounded : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

// Two-phase dense tableau simplex. Entering and leaving variables follow
// Bland's smallest-index rule, so degenerate programs cannot cycle and the
// pivot sequence is fully deterministic.
Solution solve(const Program& program, double tolerance = 1e-9);

}  // namespace fss::lp
