#include "logicert/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace logicert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivTol = 1e-9;
constexpr double kPhase1Tol = 1e-7;

}  // namespace

int IlpProblem::add_var(double lo, double hi, bool is_binary) {
  lower.push_back(lo);
  upper.push_back(hi);
  binary.push_back(is_binary ? 1 : 0);
  return num_vars++;
}

void IlpProblem::add_constraint(std::vector<std::pair<int, double>> terms, Relation rel,
                                double rhs) {
  constraints.push_back(LinearConstraint{std::move(terms), rel, rhs});
}

void IlpProblem::validate() const {
  if (static_cast<int>(lower.size()) != num_vars || static_cast<int>(upper.size()) != num_vars ||
      static_cast<int>(binary.size()) != num_vars)
    throw std::invalid_argument("ilp: bounds/binary arrays must match num_vars");
  for (int i = 0; i < num_vars; ++i) {
    if (std::isnan(lower[i]) || std::isnan(upper[i]))
      throw std::invalid_argument("ilp: NaN bound");
    if (lower[i] > upper[i]) throw std::invalid_argument("ilp: crossed bounds");
    if (binary[i] && (lower[i] < -kIntTol || upper[i] > 1.0 + kIntTol))
      throw std::invalid_argument("ilp: binary variable bounds outside [0,1]");
  }
  for (const LinearConstraint& c : constraints) {
    if (!std::isfinite(c.rhs)) throw std::invalid_argument("ilp: non-finite rhs");
    for (auto [v, a] : c.terms) {
      if (v < 0 || v >= num_vars) throw std::invalid_argument("ilp: term variable out of range");
      if (!std::isfinite(a)) throw std::invalid_argument("ilp: non-finite coefficient");
    }
  }
}

namespace {

// ---------------------------------------------------------------------------
// Bounded-variable two-phase simplex on a dense tableau. Internal columns
// live in [0, span] (span may be infinite); the standardizer below maps the
// caller's variables onto that form.

enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit };

struct Simplex {
  int m = 0, n = 0;
  std::vector<double> T;        // m x n, B^-1 A
  std::vector<double> xB;       // values of basic variables
  std::vector<int> basis;       // column basic in each row
  std::vector<double> span;     // column upper bound (lower is 0)
  std::vector<uint8_t> at_upper;
  std::vector<uint8_t> in_basis;
  std::vector<uint8_t> frozen;  // never eligible to enter (retired artificials)
  std::vector<double> d;        // reduced costs of the running phase
  long pivots = 0;
  bool bland = false;
  int degen_run = 0;

  double nb_value(int j) const { return at_upper[j] ? span[j] : 0.0; }

  void reduced_costs_from(const std::vector<double>& cost) {
    d = cost;
    for (int i = 0; i < m; ++i) {
      double cb = cost[basis[i]];
      if (cb == 0.0) continue;
      const double* row = &T[size_t(i) * n];
      for (int j = 0; j < n; ++j) d[j] -= cb * row[j];
    }
  }

  double objective(const std::vector<double>& cost) const {
    double v = 0.0;
    for (int i = 0; i < m; ++i) v += cost[basis[i]] * xB[i];
    for (int j = 0; j < n; ++j)
      if (!in_basis[j] && at_upper[j]) v += cost[j] * span[j];
    return v;
  }

  // Algebraic pivot; basic values must already be consistent.
  void pivot_rows(int row, int col) {
    double* prow = &T[size_t(row) * n];
    double piv = prow[col];
    for (int j = 0; j < n; ++j) prow[j] /= piv;
    prow[col] = 1.0;
    for (int i = 0; i < m; ++i) {
      if (i == row) continue;
      double* r = &T[size_t(i) * n];
      double f = r[col];
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) r[j] -= f * prow[j];
      r[col] = 0.0;
    }
    double f = d[col];
    if (f != 0.0) {
      for (int j = 0; j < n; ++j) d[j] -= f * prow[j];
      d[col] = 0.0;
    }
    ++pivots;
  }

  LpStatus iterate(long max_iters) {
    for (long it = 0; it < max_iters; ++it) {
      // Pricing: Dantzig with lowest-index ties, Bland once degeneracy bites.
      int enter = -1;
      double best = kPivTol;
      for (int j = 0; j < n; ++j) {
        if (in_basis[j] || frozen[j]) continue;
        double gain;
        if (!at_upper[j] && d[j] < -kPivTol) gain = -d[j];
        else if (at_upper[j] && d[j] > kPivTol) gain = d[j];
        else continue;
        if (bland) { enter = j; break; }
        if (gain > best) { best = gain; enter = j; }
      }
      if (enter < 0) return LpStatus::Optimal;

      int dir = at_upper[enter] ? -1 : 1;
      double limit = span[enter];  // own-bound flip distance
      int leave_row = -1;
      bool leave_to_upper = false;
      for (int i = 0; i < m; ++i) {
        double g = -dir * T[size_t(i) * n + enter];
        double r;
        bool to_upper;
        if (g < -kPivTol) {
          r = std::max(xB[i], 0.0) / -g;
          to_upper = false;
        } else if (g > kPivTol && std::isfinite(span[basis[i]])) {
          r = std::max(span[basis[i]] - xB[i], 0.0) / g;
          to_upper = true;
        } else {
          continue;
        }
        if (r < limit - 1e-12 ||
            (r < limit + 1e-12 && leave_row >= 0 && basis[i] < basis[leave_row])) {
          limit = r;
          leave_row = i;
          leave_to_upper = to_upper;
        }
      }
      if (leave_row < 0 && !std::isfinite(limit)) return LpStatus::Unbounded;

      double delta = limit;
      for (int i = 0; i < m; ++i) {
        double g = -dir * T[size_t(i) * n + enter];
        if (g != 0.0) xB[i] += g * delta;
      }
      if (leave_row < 0) {
        at_upper[enter] = at_upper[enter] ? 0 : 1;  // bound flip
        ++pivots;
      } else {
        double enter_val = nb_value(enter) + dir * delta;
        int leaving = basis[leave_row];
        in_basis[leaving] = 0;
        at_upper[leaving] = leave_to_upper ? 1 : 0;
        at_upper[enter] = 0;
        in_basis[enter] = 1;
        basis[leave_row] = enter;
        xB[leave_row] = enter_val;
        pivot_rows(leave_row, enter);
      }
      if (delta <= 1e-12) {
        if (++degen_run > 50) bland = true;
      } else {
        degen_run = 0;
      }
    }
    return LpStatus::IterLimit;
  }

  void drop_row(int row) {
    T.erase(T.begin() + size_t(row) * n, T.begin() + size_t(row + 1) * n);
    xB.erase(xB.begin() + row);
    basis.erase(basis.begin() + row);
    --m;
  }
};

// Maps caller variables onto [0, span] columns: finite-lower variables shift,
// upper-only variables mirror, free variables split, fixed variables fold
// into row constants.
struct Standardizer {
  enum class Kind { Shift, Mirror, Split, Fixed };
  struct VarMap {
    Kind kind = Kind::Fixed;
    double base = 0.0;
    int col = -1, col2 = -1;
  };

  const IlpProblem& p;
  const std::vector<double>& lo;
  const std::vector<double>& hi;
  std::vector<VarMap> maps;
  int n_struct = 0;
  bool trivially_infeasible = false;

  struct Row {
    std::vector<double> a;
    Relation rel;
    double rhs;
  };
  std::vector<Row> rows;

  int first_art = 0;
  std::vector<double> phase1_cost;

  Standardizer(const IlpProblem& prob, const std::vector<double>& l, const std::vector<double>& h)
      : p(prob), lo(l), hi(h) {
    maps.resize(p.num_vars);
    for (int i = 0; i < p.num_vars; ++i) {
      VarMap& vm = maps[i];
      if (lo[i] == hi[i]) {
        vm.kind = Kind::Fixed;
        vm.base = lo[i];
      } else if (std::isfinite(lo[i])) {
        vm.kind = Kind::Shift;
        vm.base = lo[i];
        vm.col = n_struct++;
      } else if (std::isfinite(hi[i])) {
        vm.kind = Kind::Mirror;
        vm.base = hi[i];
        vm.col = n_struct++;
      } else {
        vm.kind = Kind::Split;
        vm.col = n_struct++;
        vm.col2 = n_struct++;
      }
    }
    std::vector<double> scratch(n_struct, 0.0);
    for (const LinearConstraint& c : p.constraints) {
      std::fill(scratch.begin(), scratch.end(), 0.0);
      double rhs = c.rhs;
      for (auto [v, a] : c.terms) {
        const VarMap& vm = maps[v];
        switch (vm.kind) {
          case Kind::Fixed: rhs -= a * vm.base; break;
          case Kind::Shift:
            scratch[vm.col] += a;
            rhs -= a * vm.base;
            break;
          case Kind::Mirror:
            scratch[vm.col] -= a;
            rhs -= a * vm.base;
            break;
          case Kind::Split:
            scratch[vm.col] += a;
            scratch[vm.col2] -= a;
            break;
        }
      }
      bool all_zero = true;
      for (double v : scratch)
        if (v != 0.0) { all_zero = false; break; }
      if (all_zero) {
        bool ok = c.rel == Relation::LessEq      ? rhs >= -kFeasTol
                  : c.rel == Relation::GreaterEq ? rhs <= kFeasTol
                                                 : std::fabs(rhs) <= kFeasTol;
        if (!ok) trivially_infeasible = true;
        continue;
      }
      Row row;
      row.a = scratch;
      row.rhs = rhs;
      row.rel = c.rel;
      if (row.rel == Relation::GreaterEq) {
        for (double& v : row.a) v = -v;
        row.rhs = -row.rhs;
        row.rel = Relation::LessEq;
      }
      rows.push_back(std::move(row));
    }
  }

  // Builds the simplex primed for phase 1 and the structural phase-2 costs.
  void build(Simplex& sx, std::vector<double>& cost2, const Objective* obj) {
    int m = static_cast<int>(rows.size());
    std::vector<int> slack_col(m, -1), art_col(m, -1);
    int next = n_struct;
    for (int i = 0; i < m; ++i)
      if (rows[i].rel == Relation::LessEq) slack_col[i] = next++;
    first_art = next;
    for (int i = 0; i < m; ++i)
      if (rows[i].rel == Relation::Equal || rows[i].rhs < 0.0) art_col[i] = next++;
    int n = next;

    sx.m = m;
    sx.n = n;
    sx.T.assign(size_t(m) * n, 0.0);
    sx.xB.assign(m, 0.0);
    sx.basis.assign(m, -1);
    sx.span.assign(n, kInf);
    sx.at_upper.assign(n, 0);
    sx.in_basis.assign(n, 0);
    sx.frozen.assign(n, 0);
    for (int i = 0; i < p.num_vars; ++i) {
      const VarMap& vm = maps[i];
      if (vm.kind == Kind::Shift) sx.span[vm.col] = hi[i] - lo[i];
    }

    phase1_cost.assign(n, 0.0);
    for (int i = 0; i < m; ++i) {
      const Row& r = rows[i];
      double sign = r.rhs < 0.0 ? -1.0 : 1.0;
      double* row = &sx.T[size_t(i) * n];
      for (int j = 0; j < n_struct; ++j) row[j] = sign * r.a[j];
      if (slack_col[i] >= 0) row[slack_col[i]] = sign;
      sx.xB[i] = sign * r.rhs;
      if (art_col[i] >= 0) {
        row[art_col[i]] = 1.0;
        sx.basis[i] = art_col[i];
        phase1_cost[art_col[i]] = 1.0;
      } else {
        sx.basis[i] = slack_col[i];
      }
      sx.in_basis[sx.basis[i]] = 1;
    }
    sx.reduced_costs_from(phase1_cost);

    cost2.assign(n, 0.0);
    if (obj) {
      double s = obj->maximize ? -1.0 : 1.0;
      for (auto [v, a] : obj->terms) {
        const VarMap& vm = maps[v];
        switch (vm.kind) {
          case Kind::Fixed: break;
          case Kind::Shift: cost2[vm.col] += s * a; break;
          case Kind::Mirror: cost2[vm.col] -= s * a; break;
          case Kind::Split:
            cost2[vm.col] += s * a;
            cost2[vm.col2] -= s * a;
            break;
        }
      }
    }
  }

  void extract(const Simplex& sx, std::vector<double>& x) const {
    std::vector<double> col_val(sx.n, 0.0);
    for (int j = 0; j < sx.n; ++j)
      if (!sx.in_basis[j] && sx.at_upper[j]) col_val[j] = sx.span[j];
    for (int i = 0; i < sx.m; ++i) col_val[sx.basis[i]] = sx.xB[i];
    x.assign(p.num_vars, 0.0);
    for (int i = 0; i < p.num_vars; ++i) {
      const VarMap& vm = maps[i];
      switch (vm.kind) {
        case Kind::Fixed: x[i] = vm.base; break;
        case Kind::Shift: x[i] = vm.base + col_val[vm.col]; break;
        case Kind::Mirror: x[i] = vm.base - col_val[vm.col]; break;
        case Kind::Split: x[i] = col_val[vm.col] - col_val[vm.col2]; break;
      }
    }
  }
};

SolveResult lp_solve_impl(const IlpProblem& p, const std::vector<double>& lo,
                          const std::vector<double>& hi, const Objective* obj) {
  SolveResult res;
  for (int i = 0; i < p.num_vars; ++i)
    if (lo[i] > hi[i]) {
      res.status = SolveStatus::Infeasible;
      return res;
    }
  Standardizer sf(p, lo, hi);
  if (sf.trivially_infeasible) {
    res.status = SolveStatus::Infeasible;
    return res;
  }
  Simplex sx;
  std::vector<double> cost2;
  sf.build(sx, cost2, obj);
  long max_iters = 10 * long(sx.m + sx.n) + 500;

  bool need_phase1 = false;
  for (int i = 0; i < sx.m; ++i)
    if (sx.basis[i] >= sf.first_art) { need_phase1 = true; break; }
  if (need_phase1) {
    LpStatus st = sx.iterate(max_iters);
    res.pivots = sx.pivots;
    if (st != LpStatus::Optimal) {
      res.status = SolveStatus::Timeout;  // phase 1 cannot be unbounded: numerics
      return res;
    }
    if (sx.objective(sf.phase1_cost) > kPhase1Tol) {
      res.status = SolveStatus::Infeasible;
      return res;
    }
    // Retire artificials: pivot basic ones onto a real column or drop the
    // (dependent) row.
    for (int i = sx.m - 1; i >= 0; --i) {
      if (sx.basis[i] < sf.first_art) continue;
      int enter = -1;
      double best = 1e-7;
      const double* row = &sx.T[size_t(i) * sx.n];
      for (int j = 0; j < sf.first_art; ++j) {
        if (sx.in_basis[j]) continue;
        if (std::fabs(row[j]) > best) { best = std::fabs(row[j]); enter = j; }
      }
      if (enter < 0) {
        sx.drop_row(i);
        continue;
      }
      int art = sx.basis[i];
      sx.in_basis[art] = 0;
      sx.at_upper[art] = 0;
      sx.basis[i] = enter;
      sx.xB[i] = sx.nb_value(enter);
      sx.at_upper[enter] = 0;
      sx.in_basis[enter] = 1;
      sx.pivot_rows(i, enter);
    }
  }
  for (int j = sf.first_art; j < sx.n; ++j) sx.frozen[j] = 1;

  if (obj) {
    sx.bland = false;
    sx.degen_run = 0;
    sx.reduced_costs_from(cost2);
    LpStatus st = sx.iterate(max_iters);
    res.pivots = sx.pivots;
    if (st == LpStatus::IterLimit) {
      res.status = SolveStatus::Timeout;
      return res;
    }
    if (st == LpStatus::Unbounded) {
      res.status = SolveStatus::Unbounded;
      return res;
    }
    sf.extract(sx, res.assignment);
    double value = 0.0;
    for (auto [v, a] : obj->terms) value += a * res.assignment[v];
    res.objective_value = value;
    res.status = SolveStatus::Optimal;
    return res;
  }
  res.pivots = sx.pivots;
  sf.extract(sx, res.assignment);
  res.status = SolveStatus::Feasible;
  return res;
}

// Interval propagation over the constraints; binary variables snap to {0,1}.
// Sound: only non-solutions are cut. Returns false on a proven contradiction.
bool propagate_bounds(const IlpProblem& p, std::vector<double>& lo, std::vector<double>& hi) {
  auto tighten_leq = [&](const std::vector<std::pair<int, double>>& terms, double rhs) -> int {
    double min_act = 0.0;
    int inf_terms = 0;
    for (auto [v, a] : terms) {
      if (a == 0.0) continue;
      double c = a > 0 ? a * lo[v] : a * hi[v];
      if (std::isinf(c)) { ++inf_terms; continue; }
      min_act += c;
    }
    if (inf_terms == 0 && min_act > rhs + kFeasTol) return -1;
    if (inf_terms >= 2) return 0;
    int changed = 0;
    for (auto [v, a] : terms) {
      if (a == 0.0) continue;
      double own = a > 0 ? a * lo[v] : a * hi[v];
      double rest;
      if (inf_terms == 0) rest = min_act - own;
      else if (std::isinf(own)) rest = min_act;
      else continue;
      double cap = (rhs + kFeasTol - rest) / a;
      if (a > 0) {
        if (p.binary[v] && cap < 1.0 - kIntTol) cap = 0.0;
        if (cap < hi[v] - 1e-9) {
          hi[v] = std::max(cap, lo[v]);
          changed = 1;
          if (cap < lo[v] - kFeasTol) return -1;
        }
      } else {
        if (p.binary[v] && cap > kIntTol) cap = 1.0;
        if (cap > lo[v] + 1e-9) {
          lo[v] = std::min(cap, hi[v]);
          changed = 1;
          if (cap > hi[v] + kFeasTol) return -1;
        }
      }
    }
    return changed;
  };

  std::vector<std::pair<int, double>> negated;
  for (int round = 0; round < 30; ++round) {
    bool changed = false;
    for (const LinearConstraint& c : p.constraints) {
      if (c.rel != Relation::GreaterEq) {
        int r = tighten_leq(c.terms, c.rhs);
        if (r < 0) return false;
        changed |= r > 0;
      }
      if (c.rel != Relation::LessEq) {
        negated = c.terms;
        for (auto& t : negated) t.second = -t.second;
        int r = tighten_leq(negated, -c.rhs);
        if (r < 0) return false;
        changed |= r > 0;
      }
    }
    if (!changed) break;
  }
  return true;
}

}  // namespace

SolveResult solve_lp(const IlpProblem& p) {
  p.validate();
  return lp_solve_impl(p, p.lower, p.upper, p.objective ? &*p.objective : nullptr);
}

bool assignment_feasible(const IlpProblem& p, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != p.num_vars) return false;
  for (int i = 0; i < p.num_vars; ++i) {
    if (x[i] < p.lower[i] - kFeasTol || x[i] > p.upper[i] + kFeasTol) return false;
    if (p.binary[i] && std::fabs(x[i] - std::round(x[i])) > kIntTol) return false;
  }
  for (const LinearConstraint& c : p.constraints) {
    double lhs = 0.0;
    for (auto [v, a] : c.terms) lhs += a * x[v];
    switch (c.rel) {
      case Relation::LessEq:
        if (lhs > c.rhs + kFeasTol) return false;
        break;
      case Relation::GreaterEq:
        if (lhs < c.rhs - kFeasTol) return false;
        break;
      case Relation::Equal:
        if (std::fabs(lhs - c.rhs) > kFeasTol) return false;
        break;
    }
  }
  return true;
}

SolveResult solve_ilp(const IlpProblem& p, std::chrono::milliseconds timeout) {
  p.validate();
  auto deadline = std::chrono::steady_clock::now() + timeout;
  SolveResult out;

  std::vector<double> root_lo = p.lower, root_hi = p.upper;
  for (int i = 0; i < p.num_vars; ++i)
    if (p.binary[i]) {
      root_lo[i] = std::max(root_lo[i], 0.0);
      root_hi[i] = std::min(root_hi[i], 1.0);
    }

  struct Node {
    std::vector<std::pair<int, double>> fixes;
  };
  std::vector<Node> stack;
  stack.push_back(Node{});

  while (!stack.empty()) {
    if (std::chrono::steady_clock::now() >= deadline) {
      out.status = SolveStatus::Timeout;
      return out;
    }
    Node node = std::move(stack.back());
    stack.pop_back();

    std::vector<double> lo = root_lo, hi = root_hi;
    for (auto [v, val] : node.fixes) lo[v] = hi[v] = val;
    if (!propagate_bounds(p, lo, hi)) {
      ++out.nodes;
      continue;
    }

    SolveResult lp = lp_solve_impl(p, lo, hi, nullptr);
    ++out.nodes;
    out.pivots += lp.pivots;
    if (lp.status == SolveStatus::Infeasible) continue;
    if (lp.status != SolveStatus::Feasible) {
      out.status = SolveStatus::Timeout;  // simplex gave up; nothing to trust
      return out;
    }

    int branch = -1;
    double worst = kIntTol;
    for (int i = 0; i < p.num_vars; ++i) {
      if (!p.binary[i]) continue;
      double f = std::fabs(lp.assignment[i] - std::round(lp.assignment[i]));
      if (f > worst) { worst = f; branch = i; }
    }
    if (branch < 0) {
      std::vector<double> rounded = lp.assignment;
      for (int i = 0; i < p.num_vars; ++i)
        if (p.binary[i]) rounded[i] = std::round(rounded[i]);
      if (assignment_feasible(p, rounded)) {
        out.status = SolveStatus::Feasible;
        out.assignment = std::move(rounded);
        return out;
      }
      // Rounding broke a tight row; branch on the least integral variable.
      worst = 1e-12;
      for (int i = 0; i < p.num_vars; ++i) {
        if (!p.binary[i]) continue;
        double f = std::fabs(lp.assignment[i] - std::round(lp.assignment[i]));
        if (f > worst) { worst = f; branch = i; }
      }
      if (branch < 0) continue;  // exactly integral yet rejected: numerics, prune
    }
    Node one = node, zero = std::move(node);
    one.fixes.emplace_back(branch, 1.0);
    zero.fixes.emplace_back(branch, 0.0);
    stack.push_back(std::move(one));
    stack.push_back(std::move(zero));  // popped first: 0 before 1
  }
  out.status = SolveStatus::Infeasible;
  return out;
}

}  // namespace logicert
