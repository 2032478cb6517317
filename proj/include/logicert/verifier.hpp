#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "logicert/model.hpp"
#include "logicert/solver.hpp"

namespace logicert {

// ---------------------------------------------------------------------------
// Global robustness properties.
//
// All properties quantify over pairs (x, x') of points in the feature box.
// "Tied outside S" means x_j == x'_j for every feature j not in S.

// Score never decreases (increasing) / never increases (decreasing) as the
// feature grows, everything else tied.
struct Monotonicity {
  int feature = 0;
  bool increasing = true;
};

// Perturbing any single listed feature moves the score by at most c.
struct Stability {
  std::vector<int> features;
  double c = 0.0;
};

// If the model is at least delta confident malicious, no rewrite of any one
// listed subset can flip the label to benign.
struct HighConfidence {
  double delta = 0.5;
  std::vector<std::vector<int>> subsets;
};

// Rewriting any one listed subset decreases the score by at most logit(delta).
// Sufficient for HighConfidence at the same delta; this is the form the
// trainer enforces.
struct MaxScoreDecrease {
  double delta = 0.5;
  std::vector<std::vector<int>> subsets;
};

// For each instantiation (a list of disjoint feature groups), the model stays
// delta-confident even when all groups but one are rewritten. One ILP disjunct
// per (instantiation, untouched group).
struct Redundancy {
  double delta = 0.5;
  std::vector<std::vector<std::vector<int>>> instantiations;
};

// Any perturbation with |x_j - x'_j| <= sigma_j * epsilon for all j moves the
// score by at most epsilon * c.
struct SmallNeighborhood {
  double epsilon = 0.0;
  double c = 0.0;
  std::vector<double> sigma;  // one entry per schema feature
};

using PropertySpec = std::variant<Monotonicity, Stability, HighConfidence,
                                  MaxScoreDecrease, Redundancy, SmallNeighborhood>;

std::string property_name(const PropertySpec& p);

// Parses a properties file: {"properties": [...]}. Feature references are by
// schema name; monotonicity entries may omit direction to take it from the
// schema, and "features"/"subsets" accept the shorthands "monotone",
// "low_cost_singletons", and "groups" documented in the README.
std::vector<PropertySpec> properties_from_json(const std::string& text,
                                               const FeatureSchema& schema);
std::string properties_to_json(const std::vector<PropertySpec>& props,
                               const FeatureSchema& schema, int indent = 2);

// ---------------------------------------------------------------------------
// Model encoding over canonical predicates.

struct EncodeOptions {
  // Adds sum_{k in round} l_k = 1 per boosting round and copy. Valid only for
  // models whose rounds are exact partitions (freshly boosted trees); gradient
  // updates on atom parameters break it, so it is off by default.
  bool assume_round_partitions = false;
  // Margin standing in for strict inequalities in violation encodings.
  double epsilon_strict = 1e-6;
};

struct EncLiteral {
  int pred = 0;   // index into ModelEncoding predicate table
  bool negated = false;
};

struct EncClause {
  bool const_false = false;
  std::vector<EncLiteral> lits;  // empty and !const_false: always active
  double activation = 0.0;
};

// Canonical predicate table plus clause bodies rewritten over it. Predicates
// are x_j < eta, grouped by feature, etas strictly ascending inside a group,
// constants (eta outside the declared bounds) folded away.
struct ModelEncoding {
  FeatureSchema schema;
  std::vector<double> activation;            // per clause
  std::vector<EncClause> clauses;            // aligned with model clauses
  std::vector<std::vector<int>> round_groups;  // clause ids per boosting round
  std::vector<std::vector<double>> thresholds;  // per feature, ascending
  std::vector<int> feature_base;             // predicate id of first threshold
  int num_preds = 0;

  int pred_feature(int pred) const;
  double pred_eta(int pred) const;
  // Exact lookup, -1 when absent.
  int find_pred(int feature, double eta) const;
};

ModelEncoding encode_model(const LogicEnsemble& m);

// ---------------------------------------------------------------------------
// Violation problems.

// How the two copies of a feature relate, used both for encoding and for
// witness reconstruction.
enum class Pairing { Tied, Free, Neighbor };

struct ViolationProblem {
  IlpProblem ilp;
  std::string tag;                 // stable disjunct id for reports
  std::vector<Pairing> pairing;    // per feature
  std::vector<double> radius;      // per feature, Neighbor only
  bool monotone_pair = false;      // reconstruction must keep x <= x' on free feature
  // Variable maps: predicate var per copy (tied features share), clause
  // indicator base per copy.
  std::vector<int> pvar0, pvar1;
  int lbase0 = -1, lbase1 = -1;
};

// Deterministic disjunct list for one property. Verifying the property means
// solving them in order; the property is violated iff any one is feasible.
std::vector<ViolationProblem> encode_violation(const ModelEncoding& enc,
                                               const PropertySpec& prop,
                                               const EncodeOptions& opt = {});

// ---------------------------------------------------------------------------
// Verification.

struct Counterexample {
  std::vector<double> x, xprime;
  std::string tag;  // disjunct the witness came from
};

enum class Verdict { Verified, Refuted, Unknown };

struct SolveStats {
  int problems = 0;
  long long pivots = 0;
  long long nodes = 0;
  double seconds = 0.0;
};

struct VerifyResult {
  Verdict verdict = Verdict::Unknown;
  std::string reason;  // "timeout" or "spurious-witness" when Unknown
  std::optional<Counterexample> cex;
  SolveStats stats;
};

struct VerifyOptions {
  double timeout_seconds = 30.0;
  EncodeOptions encode;
};

// Solves the disjuncts in order. First feasible one is decoded to a witness
// pair and validated concretely against the model; a valid witness refutes the
// property. All infeasible verifies it. Timeouts are skipped and reported as
// Unknown("timeout") only when nothing was refuted; a witness that fails
// concrete validation gives Unknown("spurious-witness").
VerifyResult verify(const LogicEnsemble& m, const PropertySpec& prop,
                    const VerifyOptions& opt = {});

// Concrete semantics of "(x, xprime) violates prop", shared by witness
// validation, the CEGIS fixer's ledger re-checks, and the test oracles.
bool witness_violates(const LogicEnsemble& m, const PropertySpec& prop,
                      std::span<const double> x, std::span<const double> xprime);

// ---------------------------------------------------------------------------
// Evasion attacks: one-copy feasibility queries.

struct AttackTerm {
  int feature = 0;
  double eta = 0.0;
  bool negated = false;
  double coeff = 1.0;
};

// sum coeff * [pred] (rel) rhs over predicate indicator values.
struct AttackConstraint {
  std::vector<AttackTerm> terms;
  Relation rel = Relation::LessEq;
  double rhs = 0.0;
};

struct AttackSpec {
  // Per-feature allowed interval, intersected with the schema bounds.
  std::vector<std::optional<std::pair<double, double>>> box;
  std::vector<AttackConstraint> constraints;
  bool require_misclassified = true;  // score(x) < 0
};

struct AttackResult {
  enum class Status { Found, None, Unknown } status = Status::Unknown;
  std::vector<double> x;
  SolveStats stats;
};

AttackResult find_evasion(const LogicEnsemble& m, const AttackSpec& attack,
                          const VerifyOptions& opt = {});

}  // namespace logicert
