#include "logicert/model.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace logicert {

using nlohmann::json;
using nlohmann::ordered_json;

int FeatureSchema::index_of(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (features[i].name == name) return i;
  return -1;
}

void FeatureSchema::validate() const {
  std::set<std::string> seen;
  for (const Feature& f : features) {
    if (f.name.empty()) throw std::invalid_argument("schema: empty feature name");
    if (!seen.insert(f.name).second)
      throw std::invalid_argument("schema: duplicate feature name '" + f.name + "'");
    if (f.lower_bound && !std::isfinite(*f.lower_bound))
      throw std::invalid_argument("schema: non-finite lower bound on '" + f.name + "'");
    if (f.upper_bound && !std::isfinite(*f.upper_bound))
      throw std::invalid_argument("schema: non-finite upper bound on '" + f.name + "'");
    if (f.lower_bound && f.upper_bound && *f.lower_bound > *f.upper_bound)
      throw std::invalid_argument("schema: lower bound above upper bound on '" + f.name + "'");
  }
}

std::pair<int, int> LogicEnsemble::round_range(int r) const {
  if (r < 0 || r >= num_rounds()) throw std::out_of_range("round index");
  int begin = r == 0 ? 0 : round_boundaries[r - 1];
  return {begin, round_boundaries[r]};
}

void LogicEnsemble::validate() const {
  schema.validate();
  for (const Clause& c : clauses) {
    if (!std::isfinite(c.activation))
      throw std::invalid_argument("model: non-finite activation");
    for (const Atom& a : c.atoms) {
      if (a.feature < 0 || a.feature >= schema.size())
        throw std::invalid_argument("model: atom feature index out of range");
      if (!std::isfinite(a.coeff) || !std::isfinite(a.threshold))
        throw std::invalid_argument("model: non-finite atom parameter");
    }
  }
  int prev = 0;
  for (int b : round_boundaries) {
    if (b <= prev) throw std::invalid_argument("model: round boundaries not strictly increasing");
    prev = b;
  }
  if (!round_boundaries.empty() && round_boundaries.back() != num_clauses())
    throw std::invalid_argument("model: last round boundary must equal clause count");
  if (round_boundaries.empty() && !clauses.empty())
    throw std::invalid_argument("model: clauses present but no round boundary");
}

bool eval_atom(const Atom& a, std::span<const double> x) {
  return a.coeff * x[a.feature] < a.threshold;
}

bool eval_clause(const Clause& c, std::span<const double> x) {
  for (const Atom& a : c.atoms)
    if (!eval_atom(a, x)) return false;
  return true;
}

double score(const LogicEnsemble& m, std::span<const double> x) {
  double s = 0.0;
  for (const Clause& c : m.clauses)
    if (eval_clause(c, x)) s += c.activation;
  return s;
}

int predict_label(const LogicEnsemble& m, std::span<const double> x) {
  return score(m, x) >= 0.0 ? 1 : 0;
}

double sigmoid(double v) {
  if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
  double e = std::exp(v);
  return e / (1.0 + e);
}

double logit(double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::domain_error("logit: argument must be in (0,1)");
  return std::log(delta / (1.0 - delta));
}

double predict_proba(const LogicEnsemble& m, std::span<const double> x) {
  return sigmoid(score(m, x));
}

std::vector<int> active_clause_set(const LogicEnsemble& m, std::span<const double> x) {
  std::vector<int> active;
  for (int k = 0; k < m.num_clauses(); ++k)
    if (eval_clause(m.clauses[k], x)) active.push_back(k);
  return active;
}

CanonicalAtom canonicalize_atom(const Atom& a, const FeatureSchema& schema) {
  CanonicalAtom out;
  if (a.feature < 0 || a.feature >= schema.size())
    throw std::invalid_argument("canonicalize_atom: feature index out of range");
  bool integer = schema.features[a.feature].kind == FeatureKind::Integer;
  if (a.coeff == 0.0) {
    out.is_constant = true;
    out.constant_value = 0.0 < a.threshold;
    return out;
  }
  double eta = a.threshold / a.coeff;
  out.pred.feature = a.feature;
  if (a.coeff > 0.0) {
    // x < eta; integers: x < ceil(eta) when eta is fractional.
    out.pred.negated = false;
    out.pred.eta = integer && eta != std::floor(eta) ? std::ceil(eta) : eta;
  } else {
    // x > eta; integers: exactly !(x < floor(eta)+1). Continuous keeps the
    // open/closed boundary discrepancy of !(x < eta), a measure-zero set.
    out.pred.negated = true;
    out.pred.eta = integer ? std::floor(eta) + 1.0 : eta;
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

const char* kind_name(FeatureKind k) {
  return k == FeatureKind::Integer ? "integer" : "continuous";
}

FeatureKind kind_from_name(const std::string& s) {
  if (s == "integer") return FeatureKind::Integer;
  if (s == "continuous") return FeatureKind::Continuous;
  throw std::invalid_argument("schema: unknown feature kind '" + s + "'");
}

const char* monotone_name(MonotoneDir d) {
  switch (d) {
    case MonotoneDir::Increasing: return "increasing";
    case MonotoneDir::Decreasing: return "decreasing";
    default: return "none";
  }
}

MonotoneDir monotone_from_name(const std::string& s) {
  if (s == "increasing") return MonotoneDir::Increasing;
  if (s == "decreasing") return MonotoneDir::Decreasing;
  if (s == "none") return MonotoneDir::None;
  throw std::invalid_argument("schema: unknown monotone direction '" + s + "'");
}

ordered_json schema_to_ojson(const FeatureSchema& s) {
  ordered_json features = ordered_json::array();
  for (const Feature& f : s.features) {
    ordered_json j;
    j["name"] = f.name;
    j["kind"] = kind_name(f.kind);
    if (f.lower_bound) j["lower_bound"] = *f.lower_bound;
    if (f.upper_bound) j["upper_bound"] = *f.upper_bound;
    if (f.low_cost) j["low_cost"] = true;
    if (f.monotone != MonotoneDir::None) j["monotone"] = monotone_name(f.monotone);
    if (f.group) j["group"] = *f.group;
    features.push_back(std::move(j));
  }
  return ordered_json{{"features", std::move(features)}};
}

double finite_number(const json& j, const char* what) {
  if (!j.is_number()) throw std::invalid_argument(std::string(what) + ": expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite number");
  return v;
}

FeatureSchema schema_from_ojson(const json& j) {
  FeatureSchema s;
  if (!j.is_object() || !j.contains("features") || !j["features"].is_array())
    throw std::invalid_argument("schema: expected object with a 'features' array");
  for (const json& fj : j["features"]) {
    Feature f;
    f.name = fj.at("name").get<std::string>();
    f.kind = kind_from_name(fj.at("kind").get<std::string>());
    if (fj.contains("lower_bound")) f.lower_bound = finite_number(fj["lower_bound"], "schema lower_bound");
    if (fj.contains("upper_bound")) f.upper_bound = finite_number(fj["upper_bound"], "schema upper_bound");
    if (fj.contains("low_cost")) f.low_cost = fj["low_cost"].get<bool>();
    if (fj.contains("monotone")) f.monotone = monotone_from_name(fj["monotone"].get<std::string>());
    if (fj.contains("group") && !fj["group"].is_null()) f.group = fj["group"].get<std::string>();
    s.features.push_back(std::move(f));
  }
  s.validate();
  return s;
}

}  // namespace

std::string schema_to_json(const FeatureSchema& s, int indent) {
  return schema_to_ojson(s).dump(indent);
}

FeatureSchema schema_from_json(const std::string& text) {
  return schema_from_ojson(json::parse(text));
}

std::string model_to_json(const LogicEnsemble& m, int indent) {
  ordered_json j;
  j["schema"] = schema_to_ojson(m.schema);
  ordered_json clauses = ordered_json::array();
  for (const Clause& c : m.clauses) {
    ordered_json atoms = ordered_json::array();
    for (const Atom& a : c.atoms)
      atoms.push_back(ordered_json{{"feature", a.feature}, {"coeff", a.coeff}, {"threshold", a.threshold}});
    clauses.push_back(ordered_json{{"atoms", std::move(atoms)}, {"activation", c.activation}});
  }
  j["clauses"] = std::move(clauses);
  j["round_boundaries"] = m.round_boundaries;
  return j.dump(indent);
}

LogicEnsemble model_from_json(const std::string& text) {
  json j = json::parse(text);
  LogicEnsemble m;
  m.schema = schema_from_ojson(j.at("schema"));
  for (const json& cj : j.at("clauses")) {
    Clause c;
    c.activation = finite_number(cj.at("activation"), "model activation");
    for (const json& aj : cj.at("atoms")) {
      Atom a;
      a.feature = aj.at("feature").get<int>();
      a.coeff = finite_number(aj.at("coeff"), "model atom coeff");
      a.threshold = finite_number(aj.at("threshold"), "model atom threshold");
      c.atoms.push_back(a);
    }
    m.clauses.push_back(std::move(c));
  }
  m.round_boundaries = j.at("round_boundaries").get<std::vector<int>>();
  m.validate();
  return m;
}

void save_model(const LogicEnsemble& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << model_to_json(m) << '\n';
}

namespace {
std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

LogicEnsemble load_model(const std::string& path) { return model_from_json(read_file(path)); }
FeatureSchema load_schema(const std::string& path) { return schema_from_json(read_file(path)); }

}  // namespace logicert
