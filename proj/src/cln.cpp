#include "logicert/cln.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "logicert/solver.hpp"

namespace logicert {

int num_params(const LogicEnsemble& m) {
  int n = 0;
  for (const Clause& c : m.clauses) n += 2 * static_cast<int>(c.atoms.size());
  return n + m.num_clauses();
}

int activation_offset(const LogicEnsemble& m) {
  return num_params(m) - m.num_clauses();
}

std::vector<double> get_params(const LogicEnsemble& m) {
  std::vector<double> p;
  p.reserve(num_params(m));
  for (const Clause& c : m.clauses)
    for (const Atom& a : c.atoms) {
      p.push_back(a.coeff);
      p.push_back(a.threshold);
    }
  for (const Clause& c : m.clauses) p.push_back(c.activation);
  return p;
}

void set_params(LogicEnsemble& m, std::span<const double> p) {
  if (static_cast<int>(p.size()) != num_params(m))
    throw std::invalid_argument("set_params: wrong parameter count");
  size_t k = 0;
  for (Clause& c : m.clauses)
    for (Atom& a : c.atoms) {
      a.coeff = p[k++];
      a.threshold = p[k++];
    }
  for (Clause& c : m.clauses) c.activation = p[k++];
}

double smooth_atom(const Atom& a, std::span<const double> x, const SmoothConfig& cfg) {
  return sigmoid((a.threshold - a.coeff * x[a.feature] - cfg.shift) / cfg.temperature);
}

double smooth_clause(const Clause& c, std::span<const double> x, const SmoothConfig& cfg) {
  double t = 1.0;
  for (const Atom& a : c.atoms) t *= smooth_atom(a, x, cfg);
  return t;
}

double smooth_score(const LogicEnsemble& m, std::span<const double> x, const SmoothConfig& cfg) {
  double s = 0.0;
  for (const Clause& c : m.clauses) s += c.activation * smooth_clause(c, x, cfg);
  return s;
}

namespace {

// -ln sigmoid(s), stable for both signs.
double softplus_neg(double s) {
  if (s >= 0.0) return std::log1p(std::exp(-s));
  return -s + std::log1p(std::exp(s));
}

}  // namespace

double batch_loss(const LogicEnsemble& m, const Dataset& data, std::span<const int> batch,
                  const SmoothConfig& cfg, std::vector<double>* grad,
                  const std::vector<uint8_t>* frozen_clause) {
  if (batch.empty()) throw std::invalid_argument("batch_loss: empty batch");
  if (grad && static_cast<int>(grad->size()) != num_params(m))
    throw std::invalid_argument("batch_loss: grad buffer size mismatch");
  int act_off = activation_offset(m);
  double total = 0.0;
  std::vector<double> values;   // atom smooth values of one clause
  std::vector<double> suffix;
  for (int row : batch) {
    std::span<const double> x = data.rows[row];
    int y = data.labels[row];
    double w = y == 1 ? cfg.malicious_weight : 1.0;

    double s = smooth_score(m, x, cfg);
    // loss = w * (-y ln p - (1-y) ln(1-p)), p = sigmoid(s)
    total += w * (y == 1 ? softplus_neg(s) : softplus_neg(-s));
    if (!grad) continue;

    double dls = w * (sigmoid(s) - y) / double(batch.size());
    int par = 0;
    for (int k = 0; k < m.num_clauses(); ++k) {
      const Clause& c = m.clauses[k];
      bool frozen = frozen_clause && (*frozen_clause)[k];
      int na = static_cast<int>(c.atoms.size());
      values.resize(na);
      for (int i = 0; i < na; ++i) values[i] = smooth_atom(c.atoms[i], x, cfg);
      double truth = 1.0;
      suffix.assign(na + 1, 1.0);
      for (int i = na - 1; i >= 0; --i) suffix[i] = suffix[i + 1] * values[i];
      truth = suffix[0];
      if (!frozen) {
        double prefix = 1.0;
        for (int i = 0; i < na; ++i) {
          double others = prefix * suffix[i + 1];
          double dv = values[i] * (1.0 - values[i]) / cfg.temperature;
          double common = dls * c.activation * others * dv;
          // d/d(coeff) of sigmoid((th - coeff x - shift)/tau)
          (*grad)[par + 2 * i] += common * -x[c.atoms[i].feature];
          (*grad)[par + 2 * i + 1] += common;
          prefix *= values[i];
        }
        (*grad)[act_off + k] += dls * truth;
      }
      par += 2 * na;
    }
  }
  return total / double(batch.size());
}

AdamState make_adam_state(int n) {
  AdamState st;
  st.m.assign(n, 0.0);
  st.v.assign(n, 0.0);
  return st;
}

void adam_step(AdamState& st, std::span<double> params, std::span<const double> grad, double lr,
               const SmoothConfig& cfg) {
  if (params.size() != grad.size() || params.size() != st.m.size())
    throw std::invalid_argument("adam_step: size mismatch");
  ++st.t;
  double bc1 = 1.0 - std::pow(cfg.beta1, double(st.t));
  double bc2 = 1.0 - std::pow(cfg.beta2, double(st.t));
  for (size_t i = 0; i < params.size(); ++i) {
    st.m[i] = cfg.beta1 * st.m[i] + (1.0 - cfg.beta1) * grad[i];
    st.v[i] = cfg.beta2 * st.v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
    double mhat = st.m[i] / bc1;
    double vhat = st.v[i] / bc2;
    params[i] -= lr * mhat / (std::sqrt(vhat) + cfg.adam_eps);
  }
}

std::vector<double> project_activations(std::vector<double> r,
                                        std::span<const ActivationConstraint> constraints,
                                        double tol, int max_sweeps,
                                        const std::vector<uint8_t>* frozen_clause) {
  int nc = static_cast<int>(constraints.size());
  if (nc == 0) return r;
  auto movable = [&](int k) { return !frozen_clause || !(*frozen_clause)[k]; };

  // Precompute free-coordinate norms; frozen coordinates act as constants.
  std::vector<double> norm2(nc, 0.0);
  for (int c = 0; c < nc; ++c)
    for (auto [k, a] : constraints[c].terms)
      if (movable(k)) norm2[c] += a * a;

  std::vector<std::vector<double>> corr(nc);  // Dykstra increments, free coords
  for (int c = 0; c < nc; ++c) corr[c].assign(constraints[c].terms.size(), 0.0);

  // The iterate turns feasible well before it reaches the nearest point, so
  // convergence needs the corrections to stabilize too: stop only when a full
  // sweep both satisfies every constraint and barely moves the iterate.
  double move_tol = tol * 1e-3;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double moved = 0.0;
    for (int c = 0; c < nc; ++c) {
      const ActivationConstraint& ac = constraints[c];
      if (norm2[c] == 0.0) continue;  // constant constraint; feasibility is checked elsewhere
      // u = z + correction on this constraint's support
      double dot = 0.0;
      for (size_t i = 0; i < ac.terms.size(); ++i) {
        auto [k, a] = ac.terms[i];
        double u = r[k] + (movable(k) ? corr[c][i] : 0.0);
        dot += a * u;
      }
      double viol = dot - ac.rhs;
      double step = viol > 0.0 ? viol / norm2[c] : 0.0;
      for (size_t i = 0; i < ac.terms.size(); ++i) {
        auto [k, a] = ac.terms[i];
        if (!movable(k)) continue;
        double u = r[k] + corr[c][i];
        double y = u - step * a;
        corr[c][i] = u - y;
        moved = std::max(moved, std::abs(y - r[k]));
        r[k] = y;
      }
    }
    double worst = 0.0;
    for (int c = 0; c < nc; ++c) {
      if (norm2[c] == 0.0) continue;
      double dot = 0.0;
      for (auto [k, a] : constraints[c].terms) dot += a * r[k];
      worst = std::max(worst, dot - constraints[c].rhs);
    }
    if (worst <= tol && moved <= move_tol) break;
  }
  return r;
}

bool constraints_feasible(std::span<const ActivationConstraint> constraints, int num_clauses,
                          const std::vector<double>* frozen_values,
                          const std::vector<uint8_t>* frozen_clause) {
  double inf = std::numeric_limits<double>::infinity();
  IlpProblem p;
  for (int k = 0; k < num_clauses; ++k) {
    if (frozen_clause && (*frozen_clause)[k]) {
      double v = frozen_values ? (*frozen_values)[k] : 0.0;
      p.add_var(v, v);
    } else {
      p.add_var(-inf, inf);
    }
  }
  for (const ActivationConstraint& c : constraints) {
    std::vector<std::pair<int, double>> terms(c.terms.begin(), c.terms.end());
    p.add_constraint(std::move(terms), Relation::LessEq, c.rhs);
  }
  return solve_lp(p).status == SolveStatus::Feasible;
}

double train_epoch(LogicEnsemble& m, const Dataset& train,
                   std::span<const ActivationConstraint> constraints, const SmoothConfig& cfg,
                   AdamState& st, const std::vector<uint8_t>* frozen_clause) {
  if (train.size() == 0) throw std::invalid_argument("train_epoch: empty dataset");
  int np = num_params(m);
  if (static_cast<int>(st.m.size()) != np)
    throw std::invalid_argument("train_epoch: optimizer state does not match model");
  int act_off = activation_offset(m);
  double lr = cfg.learning_rate * std::pow(cfg.lr_decay, double(st.epochs_done));
  std::vector<int> perm = seeded_permutation(train.size(), cfg.seed);

  std::vector<double> params = get_params(m);
  std::vector<double> grad(np);
  double loss_sum = 0.0;
  long seen = 0;
  for (int start = 0; start < train.size(); start += cfg.batch_size) {
    int end = std::min(train.size(), start + cfg.batch_size);
    std::span<const int> batch(perm.data() + start, size_t(end - start));
    std::fill(grad.begin(), grad.end(), 0.0);
    double loss = batch_loss(m, train, batch, cfg, &grad, frozen_clause);
    loss_sum += loss * double(end - start);
    seen += end - start;
    adam_step(st, params, grad, lr, cfg);
    // Projection of the activations keeps every ledger constraint satisfied
    // after each update.
    std::vector<double> r(params.begin() + act_off, params.end());
    r = project_activations(std::move(r), constraints, 1e-9, 10000, frozen_clause);
    std::copy(r.begin(), r.end(), params.begin() + act_off);
    set_params(m, params);
  }
  ++st.epochs_done;
  return loss_sum / double(seen);
}

}  // namespace logicert
