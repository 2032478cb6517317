#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

namespace logicert {

enum class Relation { LessEq, GreaterEq, Equal };

struct LinearConstraint {
  std::vector<std::pair<int, double>> terms;  // (variable, coefficient)
  Relation rel = Relation::LessEq;
  double rhs = 0.0;
};

struct Objective {
  std::vector<std::pair<int, double>> terms;
  bool maximize = false;
};

// Mixed 0-1 / continuous linear problem. Bounds may be +-infinity; binary
// variables must have bounds inside [0,1].
struct IlpProblem {
  int num_vars = 0;
  std::vector<double> lower, upper;
  std::vector<uint8_t> binary;
  std::vector<LinearConstraint> constraints;
  std::optional<Objective> objective;

  // Returns the new variable's index.
  int add_var(double lo, double hi, bool is_binary = false);
  int add_binary() { return add_var(0.0, 1.0, true); }
  void add_constraint(std::vector<std::pair<int, double>> terms, Relation rel, double rhs);
  void validate() const;
};

enum class SolveStatus { Optimal, Feasible, Infeasible, Unbounded, Timeout };

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<double> assignment;  // full length on Optimal/Feasible
  double objective_value = 0.0;
  long pivots = 0;
  long nodes = 0;
};

// Feasibility slack allowed when re-checking a returned assignment.
inline constexpr double kFeasTol = 1e-7;
// Distance from an integer at which a relaxation value counts as integral.
inline constexpr double kIntTol = 1e-6;

// Solves the continuous relaxation (binary markers ignored). Without an
// objective the result is Feasible/Infeasible; with one it is
// Optimal/Infeasible/Unbounded. Simplex failure (iteration cap) maps to
// Timeout.
SolveResult solve_lp(const IlpProblem& p);

// Depth-first branch and bound on the binary variables, feasibility only
// (an objective, if present, is ignored). Branches on the most fractional
// binary (ties: lowest index), child order fixes 0 before 1. The deadline
// is checked between node expansions.
SolveResult solve_ilp(const IlpProblem& p, std::chrono::milliseconds timeout);

// True when the assignment satisfies every constraint with slack >= -kFeasTol
// and respects bounds (and integrality for binary variables).
bool assignment_feasible(const IlpProblem& p, const std::vector<double>& x);

}  // namespace logicert
