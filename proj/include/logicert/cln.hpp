#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "logicert/data.hpp"
#include "logicert/model.hpp"

namespace logicert {

struct SmoothConfig {
  double temperature = 1.0 / 500.0;
  double shift = 0.01;
  double learning_rate = 0.001;
  double lr_decay = 0.95;  // multiplicative per epoch
  double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;
  int batch_size = 1024;
  double malicious_weight = 1.0;  // loss weight on label-1 rows
  uint64_t seed = 1;
};

// Halfspace over clause activations: sum coeff * R[clause] <= rhs.
struct ActivationConstraint {
  std::vector<std::pair<int, double>> terms;
  double rhs = 0.0;
};

// Flat parameter order: per clause, each atom's (coeff, threshold); then all
// activations.
int num_params(const LogicEnsemble& m);
int activation_offset(const LogicEnsemble& m);
std::vector<double> get_params(const LogicEnsemble& m);
void set_params(LogicEnsemble& m, std::span<const double> p);

// Smooth truth value sigmoid((threshold - coeff*x - shift) / temperature);
// 0.5 sits `shift` inside the satisfied side, so a boundary point counts
// as unsatisfied.
double smooth_atom(const Atom& a, std::span<const double> x, const SmoothConfig& cfg);
// Product t-norm over atoms; empty body gives 1.
double smooth_clause(const Clause& c, std::span<const double> x, const SmoothConfig& cfg);
// Sum of activation * smooth truth over clauses.
double smooth_score(const LogicEnsemble& m, std::span<const double> x, const SmoothConfig& cfg);

// Weighted binary cross-entropy of the smooth score, averaged over the
// batch; accumulates d(loss)/d(params) into grad when non-null (grad must be
// zero-initialized to num_params). frozen_clause marks clauses whose
// parameters stay fixed (their gradient entries stay zero).
double batch_loss(const LogicEnsemble& m, const Dataset& data, std::span<const int> batch,
                  const SmoothConfig& cfg, std::vector<double>* grad = nullptr,
                  const std::vector<uint8_t>* frozen_clause = nullptr);

struct AdamState {
  std::vector<double> m, v;
  long t = 0;
  int epochs_done = 0;
};

AdamState make_adam_state(int n);
void adam_step(AdamState& st, std::span<double> params, std::span<const double> grad, double lr,
               const SmoothConfig& cfg);

// Euclidean projection of activations onto the constraint intersection via
// Dykstra's alternating projections (halfspaces, cyclic, deterministic).
// Frozen coordinates are treated as constants. Converged when a sweep leaves
// every constraint within tol and moves the iterate by at most tol/1000.
std::vector<double> project_activations(std::vector<double> r,
                                        std::span<const ActivationConstraint> constraints,
                                        double tol = 1e-9, int max_sweeps = 10000,
                                        const std::vector<uint8_t>* frozen_clause = nullptr);

// Whether the constraint set admits any assignment of the free coordinates
// (frozen ones fixed at their current values). Exact LP check.
bool constraints_feasible(std::span<const ActivationConstraint> constraints, int num_clauses,
                          const std::vector<double>* frozen_values = nullptr,
                          const std::vector<uint8_t>* frozen_clause = nullptr);

// One pass over the data in a seed-fixed order (same order every epoch):
// per mini-batch, Adam on all parameters then projection of the activations.
// Returns the mean training loss. The learning rate decays per completed
// epoch recorded in st.epochs_done.
double train_epoch(LogicEnsemble& m, const Dataset& train,
                   std::span<const ActivationConstraint> constraints, const SmoothConfig& cfg,
                   AdamState& st, const std::vector<uint8_t>* frozen_clause = nullptr);

}  // namespace logicert
