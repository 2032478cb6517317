#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "logicert/booster.hpp"
#include "logicert/cln.hpp"
#include "logicert/data.hpp"
#include "logicert/verifier.hpp"

namespace logicert {

// One activation-space constraint with its provenance: which property and
// counterexample produced it, and when.
struct LedgerEntry {
  ActivationConstraint constraint;
  std::string property;     // property tag for reports
  int property_index = 0;   // into the property list fix() was given
  std::vector<double> x, xprime;
  int cex_id = 0;
  int cegis_iter = 0;
  int boost_round = 0;
};

// Append-only set of constraints gathered across CEGIS iterations and
// boosting rounds. Entries may only reference clauses that exist at the time
// they are added; indices stay valid later because clauses only ever append.
class ConstraintLedger {
 public:
  void add(LedgerEntry e, int num_clauses);
  bool contains(const ActivationConstraint& c) const;  // exact terms + rhs
  std::vector<ActivationConstraint> constraints() const;
  const std::vector<LedgerEntry>& entries() const { return entries_; }
  int size() const { return static_cast<int>(entries_.size()); }

 private:
  std::vector<LedgerEntry> entries_;
};

// Halfspaces over clause activations that make the counterexample's
// activation pattern compliant: terms cover the symmetric difference of the
// two active sets (+1 on clauses only x reaches, -1 on clauses only xprime
// reaches). Two rows for the absolute-valued properties, one otherwise.
// Throws std::logic_error when the active sets coincide.
std::vector<ActivationConstraint> gen_constraint(const LogicEnsemble& m,
                                                 const PropertySpec& prop,
                                                 std::span<const double> x,
                                                 std::span<const double> xprime,
                                                 double epsilon_strict = 1e-6);

// Receives single-line JSON progress records.
using ProgressSink = std::function<void(const std::string&)>;

struct FixerConfig {
  int max_cegis_iters = 20;
  double timeout_base_seconds = 30.0;
  double timeout_growth = 2.0;  // applied when verification stalls on timeouts
  SmoothConfig smooth;
  EncodeOptions encode;
  enum class ValidationMetric { AUC } validation_metric = ValidationMetric::AUC;
};

// What fix() trains and verifies. Clauses before first_trainable_clause are
// frozen. With local_mono_stability set, monotonicity and stability are
// checked on the trainable suffix alone (stability budget scaled by
// stability_scale); the remaining properties always see the full model.
struct FixScope {
  int first_trainable_clause = 0;
  bool local_mono_stability = false;
  double stability_scale = 1.0;
};

enum class FixStatus { Fixed, Failure };

struct FixResult {
  FixStatus status = FixStatus::Failure;
  int iterations = 0;
  std::string failure_reason;
  SolveStats stats;
};

// Counterexample-guided repair loop: verify each property, turn refutations
// into ledger constraints, re-check stored pairs against the drifting model,
// run one constrained training epoch per iteration, grow the timeout when
// verification stalls on Unknown(timeout) without progress. Fixed when every
// property verifies; Failure on infeasible constraints, a spurious witness
// with no other progress, or the iteration cap.
FixResult fix(LogicEnsemble& m, const std::vector<PropertySpec>& props, const Dataset& train,
              const FixerConfig& cfg, ConstraintLedger& ledger, AdamState& adam,
              const FixScope& scope = {}, int boost_round_id = 0,
              const ProgressSink& sink = {});

struct TrainConfig {
  int rounds = 4;
  BoostConfig boost;
  FixerConfig fixer;
  // Verify monotonicity/stability per round on the new round's clauses with
  // stability budget c/rounds, freezing earlier rounds; the per-round bounds
  // then compose into the full-model property.
  bool property_boosting = true;
  // Optional per-round schedules, cycled when shorter than rounds. Empty
  // inner lists are not allowed; empty outer lists mean no schedule.
  std::vector<std::vector<int>> feature_masks;   // schema feature indices
  std::vector<std::vector<int>> property_masks;  // indices into props
  double validation_fraction = 0.2;
  uint64_t split_seed = 17;
};

struct RoundDiagnostic {
  int round = 0;
  bool fix_succeeded = false;
  bool fully_verified = false;
  std::string detail;
  std::optional<double> validation_auc;
};

struct TrainResult {
  bool success = false;
  LogicEnsemble model;  // best fully verified checkpoint; last state on failure
  int best_round = -1;
  double best_metric = 0.0;
  std::vector<RoundDiagnostic> rounds;
  ConstraintLedger ledger;
};

// Boost-then-fix training: each round appends one tree, runs fix() under the
// configured scope, and checkpoints the model when the full property list
// verifies on the whole model. The checkpoint with the best validation AUC
// wins; no verified checkpoint means failure, with per-round diagnostics.
TrainResult train_full(const Dataset& data, const std::vector<PropertySpec>& props,
                       const TrainConfig& cfg, const ProgressSink& sink = {});

}  // namespace logicert
