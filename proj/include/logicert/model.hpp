#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace logicert {

enum class FeatureKind { Continuous, Integer };
enum class MonotoneDir { None, Increasing, Decreasing };

struct Feature {
  std::string name;
  FeatureKind kind = FeatureKind::Continuous;
  std::optional<double> lower_bound;
  std::optional<double> upper_bound;
  bool low_cost = false;
  MonotoneDir monotone = MonotoneDir::None;
  std::optional<std::string> group;
};

struct FeatureSchema {
  std::vector<Feature> features;

  int size() const { return static_cast<int>(features.size()); }
  // -1 if no feature has that name.
  int index_of(const std::string& name) const;
  // Throws std::invalid_argument on duplicate names or inverted bounds.
  void validate() const;
};

// Atom coeff * x[feature] < threshold, strict.
struct Atom {
  double coeff = 1.0;
  int feature = 0;
  double threshold = 0.0;
};

// Canonical predicate x[feature] < eta, possibly negated.
struct Predicate {
  int feature = 0;
  double eta = 0.0;
  bool negated = false;
};

// Result of canonicalizing one atom: a predicate, or a constant when coeff == 0.
struct CanonicalAtom {
  bool is_constant = false;
  bool constant_value = false;
  Predicate pred;
};

struct Clause {
  std::vector<Atom> atoms;  // conjunction; empty body is always satisfied
  double activation = 0.0;
};

// Conjunction-of-atoms rules with additive activations. Boosted tree
// ensembles map onto this with one clause per leaf; round_boundaries are
// cumulative clause counts, one entry per boosting round.
struct LogicEnsemble {
  FeatureSchema schema;
  std::vector<Clause> clauses;
  std::vector<int> round_boundaries;

  int num_clauses() const { return static_cast<int>(clauses.size()); }
  int num_rounds() const { return static_cast<int>(round_boundaries.size()); }
  // [begin, end) clause range of round r.
  std::pair<int, int> round_range(int r) const;
  // Throws std::invalid_argument if structure is inconsistent (bad feature
  // indices, non-finite numbers, broken round boundaries).
  void validate() const;
};

bool eval_atom(const Atom& a, std::span<const double> x);
bool eval_clause(const Clause& c, std::span<const double> x);

// Sum of activations over satisfied clauses, in clause order.
double score(const LogicEnsemble& m, std::span<const double> x);
// 1 iff score >= 0.
int predict_label(const LogicEnsemble& m, std::span<const double> x);
double sigmoid(double v);
// Inverse sigmoid; throws std::domain_error unless delta in (0,1).
double logit(double delta);
double predict_proba(const LogicEnsemble& m, std::span<const double> x);
// Indices of satisfied clauses, ascending.
std::vector<int> active_clause_set(const LogicEnsemble& m, std::span<const double> x);

// Rewrites an atom as x_j < eta / !(x_j < eta) / constant. Integer features
// are tightened exactly: x < t becomes x < ceil(t) for fractional t, and
// x > t becomes !(x < floor(t)+1).
CanonicalAtom canonicalize_atom(const Atom& a, const FeatureSchema& schema);

// JSON (de)serialization. Round-trips are lossless: doubles render with
// shortest round-trip precision, key order is fixed, so equal models give
// byte-identical text.
std::string schema_to_json(const FeatureSchema& s, int indent = 2);
FeatureSchema schema_from_json(const std::string& text);
std::string model_to_json(const LogicEnsemble& m, int indent = 2);
LogicEnsemble model_from_json(const std::string& text);

void save_model(const LogicEnsemble& m, const std::string& path);
LogicEnsemble load_model(const std::string& path);
FeatureSchema load_schema(const std::string& path);

}  // namespace logicert
