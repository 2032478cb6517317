#include "logicert/verifier.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace logicert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string join_names(const FeatureSchema& s, const std::vector<int>& ids) {
  std::string out;
  for (size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ",";
    out += s.features[ids[i]].name;
  }
  return out;
}

void check_feature_index(const FeatureSchema& s, int f, const char* what) {
  if (f < 0 || f >= s.size())
    throw std::invalid_argument(std::string(what) + ": feature index out of range");
}

}  // namespace

std::string property_name(const PropertySpec& p) {
  struct V {
    std::string operator()(const Monotonicity&) const { return "monotonicity"; }
    std::string operator()(const Stability&) const { return "stability"; }
    std::string operator()(const HighConfidence&) const { return "high-confidence"; }
    std::string operator()(const MaxScoreDecrease&) const { return "max-score-decrease"; }
    std::string operator()(const Redundancy&) const { return "redundancy"; }
    std::string operator()(const SmallNeighborhood&) const { return "small-neighborhood"; }
  };
  return std::visit(V{}, p);
}

// ---------------------------------------------------------------------------
// Properties JSON

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

int resolve_feature(const FeatureSchema& s, const json& v, const char* ctx) {
  if (!v.is_string())
    throw std::invalid_argument(std::string(ctx) + ": feature references must be names");
  int idx = s.index_of(v.get<std::string>());
  if (idx < 0)
    throw std::invalid_argument(std::string(ctx) + ": unknown feature '" +
                                v.get<std::string>() + "'");
  return idx;
}

std::vector<int> resolve_feature_list(const FeatureSchema& s, const json& v, const char* ctx) {
  if (!v.is_array())
    throw std::invalid_argument(std::string(ctx) + ": expected an array of feature names");
  std::vector<int> out;
  for (const auto& e : v) out.push_back(resolve_feature(s, e, ctx));
  if (out.empty()) throw std::invalid_argument(std::string(ctx) + ": empty feature list");
  return out;
}

std::vector<std::vector<int>> resolve_subsets(const FeatureSchema& s, const json& v,
                                              const char* ctx) {
  if (v.is_string()) {
    if (v.get<std::string>() != "low_cost_singletons")
      throw std::invalid_argument(std::string(ctx) + ": unknown subsets shorthand '" +
                                  v.get<std::string>() + "'");
    std::vector<std::vector<int>> out;
    for (int i = 0; i < s.size(); ++i)
      if (s.features[i].low_cost) out.push_back({i});
    if (out.empty())
      throw std::invalid_argument(std::string(ctx) +
                                  ": low_cost_singletons but no low-cost features in schema");
    return out;
  }
  if (!v.is_array() || v.empty())
    throw std::invalid_argument(std::string(ctx) + ": expected non-empty subsets array");
  std::vector<std::vector<int>> out;
  for (const auto& sub : v) out.push_back(resolve_feature_list(s, sub, ctx));
  return out;
}

// Group ids in schema order of first appearance.
std::vector<std::vector<int>> schema_groups(const FeatureSchema& s) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<int>> by_name;
  for (int i = 0; i < s.size(); ++i) {
    if (!s.features[i].group) continue;
    const std::string& g = *s.features[i].group;
    if (!by_name.count(g)) order.push_back(g);
    by_name[g].push_back(i);
  }
  std::vector<std::vector<int>> out;
  for (const auto& g : order) out.push_back(by_name[g]);
  return out;
}

double require_number(const json& o, const char* key, const char* ctx) {
  if (!o.contains(key) || !o.at(key).is_number())
    throw std::invalid_argument(std::string(ctx) + ": missing numeric '" + key + "'");
  return o.at(key).get<double>();
}

}  // namespace

std::vector<PropertySpec> properties_from_json(const std::string& text,
                                               const FeatureSchema& schema) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("properties: invalid JSON: ") + e.what());
  }
  if (!root.is_object() || !root.contains("properties") || !root["properties"].is_array())
    throw std::invalid_argument("properties: expected {\"properties\": [...]}");

  std::vector<PropertySpec> out;
  for (const auto& e : root["properties"]) {
    if (!e.is_object() || !e.contains("type") || !e["type"].is_string())
      throw std::invalid_argument("properties: each entry needs a string 'type'");
    std::string type = e["type"].get<std::string>();
    if (type == "monotonicity") {
      if (e.contains("features")) {
        if (!e["features"].is_string() || e["features"].get<std::string>() != "monotone")
          throw std::invalid_argument("monotonicity: 'features' only accepts \"monotone\"");
        bool any = false;
        for (int i = 0; i < schema.size(); ++i) {
          if (schema.features[i].monotone == MonotoneDir::None) continue;
          out.push_back(Monotonicity{
              i, schema.features[i].monotone == MonotoneDir::Increasing});
          any = true;
        }
        if (!any)
          throw std::invalid_argument("monotonicity: schema declares no monotone features");
        continue;
      }
      int f = resolve_feature(schema, e.at("feature"), "monotonicity");
      bool inc;
      if (e.contains("direction")) {
        std::string d = e["direction"].get<std::string>();
        if (d != "increasing" && d != "decreasing")
          throw std::invalid_argument("monotonicity: direction must be increasing/decreasing");
        inc = d == "increasing";
      } else {
        MonotoneDir md = schema.features[f].monotone;
        if (md == MonotoneDir::None)
          throw std::invalid_argument(
              "monotonicity: no direction given and schema declares none for '" +
              schema.features[f].name + "'");
        inc = md == MonotoneDir::Increasing;
      }
      out.push_back(Monotonicity{f, inc});
    } else if (type == "stability") {
      Stability st;
      st.c = require_number(e, "c", "stability");
      if (!(st.c >= 0.0))
        throw std::invalid_argument("stability: c must be nonnegative");
      if (e.contains("features") && e["features"].is_string()) {
        if (e["features"].get<std::string>() != "all")
          throw std::invalid_argument("stability: 'features' shorthand only accepts \"all\"");
        for (int i = 0; i < schema.size(); ++i) st.features.push_back(i);
      } else {
        st.features = resolve_feature_list(schema, e.at("features"), "stability");
      }
      out.push_back(st);
    } else if (type == "high_confidence" || type == "max_score_decrease") {
      double delta = require_number(e, "delta", type.c_str());
      if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument(type + ": delta must lie strictly in (0,1)");
      auto subsets = resolve_subsets(schema, e.at("subsets"), type.c_str());
      if (type == "high_confidence")
        out.push_back(HighConfidence{delta, subsets});
      else
        out.push_back(MaxScoreDecrease{delta, subsets});
    } else if (type == "redundancy") {
      Redundancy r;
      r.delta = require_number(e, "delta", "redundancy");
      if (!(r.delta > 0.0 && r.delta < 1.0))
        throw std::invalid_argument("redundancy: delta must lie strictly in (0,1)");
      const auto& inst = e.at("instantiations");
      if (inst.is_string()) {
        if (inst.get<std::string>() != "groups")
          throw std::invalid_argument("redundancy: unknown shorthand '" +
                                      inst.get<std::string>() + "'");
        auto groups = schema_groups(schema);
        if (groups.size() < 2)
          throw std::invalid_argument("redundancy: schema has fewer than two groups");
        r.instantiations.push_back(groups);
      } else {
        if (!inst.is_array() || inst.empty())
          throw std::invalid_argument("redundancy: expected non-empty instantiations array");
        for (const auto& one : inst) {
          if (!one.is_array() || one.size() < 2)
            throw std::invalid_argument("redundancy: each instantiation needs >= 2 groups");
          std::vector<std::vector<int>> groups;
          for (const auto& g : one)
            groups.push_back(resolve_feature_list(schema, g, "redundancy"));
          r.instantiations.push_back(groups);
        }
      }
      out.push_back(r);
    } else if (type == "small_neighborhood") {
      SmallNeighborhood sn;
      sn.epsilon = require_number(e, "epsilon", "small_neighborhood");
      sn.c = require_number(e, "c", "small_neighborhood");
      if (!(sn.epsilon >= 0.0) || !(sn.c >= 0.0))
        throw std::invalid_argument("small_neighborhood: epsilon and c must be nonnegative");
      if (!e.contains("sigma"))
        throw std::invalid_argument("small_neighborhood: missing 'sigma'");
      const auto& sg = e["sigma"];
      sn.sigma.assign(schema.size(), 0.0);
      if (sg.is_number()) {
        std::fill(sn.sigma.begin(), sn.sigma.end(), sg.get<double>());
      } else if (sg.is_object()) {
        for (int i = 0; i < schema.size(); ++i) {
          const std::string& name = schema.features[i].name;
          if (!sg.contains(name))
            throw std::invalid_argument("small_neighborhood: sigma missing feature '" + name +
                                        "'");
          sn.sigma[i] = sg.at(name).get<double>();
        }
      } else {
        throw std::invalid_argument("small_neighborhood: sigma must be a number or object");
      }
      for (double sd : sn.sigma)
        if (!(sd >= 0.0))
          throw std::invalid_argument("small_neighborhood: sigma entries must be nonnegative");
      out.push_back(sn);
    } else {
      throw std::invalid_argument("properties: unknown type '" + type + "'");
    }
  }
  return out;
}

std::string properties_to_json(const std::vector<PropertySpec>& props,
                               const FeatureSchema& schema, int indent) {
  ordered_json arr = ordered_json::array();
  auto names = [&](const std::vector<int>& ids) {
    ordered_json a = ordered_json::array();
    for (int id : ids) a.push_back(schema.features[id].name);
    return a;
  };
  for (const auto& p : props) {
    ordered_json e;
    if (const auto* m = std::get_if<Monotonicity>(&p)) {
      e["type"] = "monotonicity";
      e["feature"] = schema.features[m->feature].name;
      e["direction"] = m->increasing ? "increasing" : "decreasing";
    } else if (const auto* st = std::get_if<Stability>(&p)) {
      e["type"] = "stability";
      e["features"] = names(st->features);
      e["c"] = st->c;
    } else if (const auto* h = std::get_if<HighConfidence>(&p)) {
      e["type"] = "high_confidence";
      e["delta"] = h->delta;
      ordered_json subs = ordered_json::array();
      for (const auto& s : h->subsets) subs.push_back(names(s));
      e["subsets"] = subs;
    } else if (const auto* ms = std::get_if<MaxScoreDecrease>(&p)) {
      e["type"] = "max_score_decrease";
      e["delta"] = ms->delta;
      ordered_json subs = ordered_json::array();
      for (const auto& s : ms->subsets) subs.push_back(names(s));
      e["subsets"] = subs;
    } else if (const auto* r = std::get_if<Redundancy>(&p)) {
      e["type"] = "redundancy";
      e["delta"] = r->delta;
      ordered_json insts = ordered_json::array();
      for (const auto& inst : r->instantiations) {
        ordered_json groups = ordered_json::array();
        for (const auto& g : inst) groups.push_back(names(g));
        insts.push_back(groups);
      }
      e["instantiations"] = insts;
    } else if (const auto* sn = std::get_if<SmallNeighborhood>(&p)) {
      e["type"] = "small_neighborhood";
      e["epsilon"] = sn->epsilon;
      e["c"] = sn->c;
      ordered_json sg;
      for (int i = 0; i < schema.size(); ++i) sg[schema.features[i].name] = sn->sigma[i];
      e["sigma"] = sg;
    }
    arr.push_back(e);
  }
  ordered_json root;
  root["properties"] = arr;
  return root.dump(indent) + "\n";
}

// ---------------------------------------------------------------------------
// Model encoding

int ModelEncoding::pred_feature(int pred) const {
  for (int f = 0; f < schema.size(); ++f)
    if (pred < feature_base[f] + static_cast<int>(thresholds[f].size())) return f;
  throw std::logic_error("pred_feature: index out of range");
}

double ModelEncoding::pred_eta(int pred) const {
  int f = pred_feature(pred);
  return thresholds[f][pred - feature_base[f]];
}

int ModelEncoding::find_pred(int feature, double eta) const {
  const auto& t = thresholds[feature];
  auto it = std::lower_bound(t.begin(), t.end(), eta);
  if (it == t.end() || *it != eta) return -1;
  return feature_base[feature] + static_cast<int>(it - t.begin());
}

namespace {

// Effective integer-aware bounds used for constant folding and reconstruction.
struct FoldBounds {
  double lo = -kInf, hi = kInf;
};

FoldBounds fold_bounds(const Feature& ft) {
  FoldBounds b;
  if (ft.lower_bound) b.lo = *ft.lower_bound;
  if (ft.upper_bound) b.hi = *ft.upper_bound;
  if (ft.kind == FeatureKind::Integer) {
    if (b.lo != -kInf) b.lo = std::ceil(b.lo - 1e-9);
    if (b.hi != kInf) b.hi = std::floor(b.hi + 1e-9);
  }
  return b;
}

// x < eta against the feature box: folds to a constant when decided.
std::optional<bool> fold_pred(const FoldBounds& b, double eta) {
  if (eta <= b.lo) return false;
  if (eta > b.hi) return true;
  return std::nullopt;
}

// For integer features x < eta is equivalent to x < ceil(eta) when eta is
// fractional; canonical thresholds are always integral there.
double tighten_eta(const Feature& ft, double eta) {
  if (ft.kind == FeatureKind::Integer && eta != std::floor(eta)) return std::ceil(eta);
  return eta;
}

ModelEncoding encode_model_impl(const LogicEnsemble& m,
                                const std::vector<std::pair<int, double>>& extra) {
  ModelEncoding enc;
  enc.schema = m.schema;
  const int F = enc.schema.size();

  std::vector<FoldBounds> bounds(F);
  for (int f = 0; f < F; ++f) bounds[f] = fold_bounds(enc.schema.features[f]);

  struct RawLit {
    bool is_const = false;
    bool value = false;
    int feature = 0;
    double eta = 0.0;
    bool negated = false;
  };
  std::vector<std::vector<RawLit>> raw(m.num_clauses());
  std::vector<std::vector<double>> cand(F);

  for (int k = 0; k < m.num_clauses(); ++k) {
    for (const Atom& a : m.clauses[k].atoms) {
      CanonicalAtom ca = canonicalize_atom(a, enc.schema);
      RawLit lit;
      if (ca.is_constant) {
        lit.is_const = true;
        lit.value = ca.constant_value;
      } else if (auto c = fold_pred(bounds[ca.pred.feature], ca.pred.eta)) {
        lit.is_const = true;
        lit.value = ca.pred.negated ? !*c : *c;
      } else {
        lit.feature = ca.pred.feature;
        lit.eta = ca.pred.eta;
        lit.negated = ca.pred.negated;
        cand[ca.pred.feature].push_back(ca.pred.eta);
      }
      raw[k].push_back(lit);
    }
  }
  for (const auto& [f, raw_eta] : extra) {
    check_feature_index(enc.schema, f, "encode");
    double eta = tighten_eta(enc.schema.features[f], raw_eta);
    if (!fold_pred(bounds[f], eta)) cand[f].push_back(eta);
  }

  enc.thresholds.resize(F);
  enc.feature_base.resize(F);
  int base = 0;
  for (int f = 0; f < F; ++f) {
    auto& t = cand[f];
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    enc.thresholds[f] = t;
    enc.feature_base[f] = base;
    base += static_cast<int>(t.size());
  }
  enc.num_preds = base;

  enc.activation.reserve(m.num_clauses());
  enc.clauses.resize(m.num_clauses());
  for (int k = 0; k < m.num_clauses(); ++k) {
    enc.activation.push_back(m.clauses[k].activation);
    EncClause& ec = enc.clauses[k];
    ec.activation = m.clauses[k].activation;
    for (const RawLit& lit : raw[k]) {
      if (lit.is_const) {
        if (!lit.value) {
          ec.const_false = true;
          break;
        }
        continue;  // constant-true atoms drop out
      }
      int pid = enc.find_pred(lit.feature, lit.eta);
      if (pid < 0) throw std::logic_error("encode: lost predicate");
      ec.lits.push_back({pid, lit.negated});
    }
    if (ec.const_false) {
      ec.lits.clear();
      continue;
    }
    std::sort(ec.lits.begin(), ec.lits.end(), [](const EncLiteral& a, const EncLiteral& b) {
      return a.pred != b.pred ? a.pred < b.pred : a.negated < b.negated;
    });
    ec.lits.erase(std::unique(ec.lits.begin(), ec.lits.end(),
                              [](const EncLiteral& a, const EncLiteral& b) {
                                return a.pred == b.pred && a.negated == b.negated;
                              }),
                  ec.lits.end());
    for (size_t i = 0; i + 1 < ec.lits.size(); ++i) {
      if (ec.lits[i].pred == ec.lits[i + 1].pred) {
        // x < eta and its negation in one body
        ec.const_false = true;
        ec.lits.clear();
        break;
      }
    }
  }

  for (int r = 0; r < m.num_rounds(); ++r) {
    auto [b, e] = m.round_range(r);
    std::vector<int> group;
    for (int k = b; k < e; ++k) group.push_back(k);
    enc.round_groups.push_back(std::move(group));
  }
  return enc;
}

}  // namespace

ModelEncoding encode_model(const LogicEnsemble& m) { return encode_model_impl(m, {}); }

// ---------------------------------------------------------------------------
// Violation problem construction

namespace {

std::vector<int> add_pred_vars(IlpProblem& p, const ModelEncoding& enc) {
  std::vector<int> v(enc.num_preds);
  for (int i = 0; i < enc.num_preds; ++i) v[i] = p.add_binary();
  return v;
}

int add_clause_vars(IlpProblem& p, const ModelEncoding& enc) {
  int base = p.num_vars;
  for (const EncClause& ec : enc.clauses) {
    if (ec.const_false)
      p.add_var(0.0, 0.0, true);
    else if (ec.lits.empty())
      p.add_var(1.0, 1.0, true);
    else
      p.add_binary();
  }
  return base;
}

void add_chain_rows(IlpProblem& p, const ModelEncoding& enc, const std::vector<int>& pv) {
  for (int f = 0; f < enc.schema.size(); ++f) {
    int base = enc.feature_base[f];
    int n = static_cast<int>(enc.thresholds[f].size());
    for (int i = 0; i + 1 < n; ++i)
      p.add_constraint({{pv[base + i], 1.0}, {pv[base + i + 1], -1.0}}, Relation::LessEq, 0.0);
  }
}

void add_linking_rows(IlpProblem& p, const ModelEncoding& enc, const std::vector<int>& pv,
                      int lbase) {
  for (int k = 0; k < static_cast<int>(enc.clauses.size()); ++k) {
    const EncClause& ec = enc.clauses[k];
    if (ec.const_false || ec.lits.empty()) continue;  // var fixed by bounds
    int lv = lbase + k;
    int neg = 0;
    std::vector<std::pair<int, double>> low;
    for (const EncLiteral& lit : ec.lits) {
      if (lit.negated) {
        p.add_constraint({{lv, 1.0}, {pv[lit.pred], 1.0}}, Relation::LessEq, 1.0);
        low.emplace_back(pv[lit.pred], -1.0);
        ++neg;
      } else {
        p.add_constraint({{lv, 1.0}, {pv[lit.pred], -1.0}}, Relation::LessEq, 0.0);
        low.emplace_back(pv[lit.pred], 1.0);
      }
    }
    low.emplace_back(lv, -1.0);
    p.add_constraint(std::move(low), Relation::LessEq,
                     static_cast<double>(ec.lits.size()) - 1.0 - neg);
  }
}

void add_round_cut_rows(IlpProblem& p, const ModelEncoding& enc, int lbase) {
  for (const auto& group : enc.round_groups) {
    std::vector<std::pair<int, double>> terms;
    for (int k : group) terms.emplace_back(lbase + k, 1.0);
    p.add_constraint(std::move(terms), Relation::Equal, 1.0);
  }
}

// Neighborhood linking: for thresholds b <= c of one feature far enough apart
// that no pair within the radius can straddle both (x < b while x' >= c), the
// cell pair is forbidden outright: [x < b] <= [x' < c] and symmetrically.
// Exact for integer and continuous features; needs no auxiliary variables.
void add_neighbor_rows(IlpProblem& p, const ModelEncoding& enc, int f, double radius,
                       const std::vector<int>& pv0, const std::vector<int>& pv1) {
  const auto& t = enc.thresholds[f];
  int base = enc.feature_base[f];
  bool integer = enc.schema.features[f].kind == FeatureKind::Integer;
  for (int i = 0; i < static_cast<int>(t.size()); ++i) {
    double cut = integer ? t[i] + std::floor(radius + 1e-9) : t[i] + radius;
    auto it = std::lower_bound(t.begin(), t.end(), cut);
    if (it == t.end()) continue;
    int j = base + static_cast<int>(it - t.begin());
    p.add_constraint({{pv0[base + i], 1.0}, {pv1[j], -1.0}}, Relation::LessEq, 0.0);
    p.add_constraint({{pv1[base + i], 1.0}, {pv0[j], -1.0}}, Relation::LessEq, 0.0);
  }
}

struct PairBuilder {
  const ModelEncoding& enc;
  const EncodeOptions& opt;
  ViolationProblem vp;

  PairBuilder(const ModelEncoding& e, const EncodeOptions& o, std::vector<Pairing> pairing,
              std::vector<double> radius, std::string tag)
      : enc(e), opt(o) {
    vp.tag = std::move(tag);
    vp.pairing = std::move(pairing);
    vp.radius = std::move(radius);
    if (vp.radius.empty()) vp.radius.assign(enc.schema.size(), 0.0);

    vp.pvar0 = add_pred_vars(vp.ilp, enc);
    vp.pvar1.resize(enc.num_preds);
    for (int f = 0; f < enc.schema.size(); ++f) {
      int base = enc.feature_base[f];
      int n = static_cast<int>(enc.thresholds[f].size());
      for (int i = 0; i < n; ++i) {
        vp.pvar1[base + i] =
            vp.pairing[f] == Pairing::Tied ? vp.pvar0[base + i] : vp.ilp.add_binary();
      }
    }
    vp.lbase0 = add_clause_vars(vp.ilp, enc);
    vp.lbase1 = add_clause_vars(vp.ilp, enc);

    add_chain_rows(vp.ilp, enc, vp.pvar0);
    // Tied features share columns; a second chain there would be identical.
    for (int f = 0; f < enc.schema.size(); ++f) {
      if (vp.pairing[f] == Pairing::Tied) continue;
      int base = enc.feature_base[f];
      int n = static_cast<int>(enc.thresholds[f].size());
      for (int i = 0; i + 1 < n; ++i)
        vp.ilp.add_constraint({{vp.pvar1[base + i], 1.0}, {vp.pvar1[base + i + 1], -1.0}},
                              Relation::LessEq, 0.0);
    }
    add_linking_rows(vp.ilp, enc, vp.pvar0, vp.lbase0);
    add_linking_rows(vp.ilp, enc, vp.pvar1, vp.lbase1);
    if (opt.assume_round_partitions) {
      add_round_cut_rows(vp.ilp, enc, vp.lbase0);
      add_round_cut_rows(vp.ilp, enc, vp.lbase1);
    }
    for (int f = 0; f < enc.schema.size(); ++f)
      if (vp.pairing[f] == Pairing::Neighbor)
        add_neighbor_rows(vp.ilp, enc, f, vp.radius[f], vp.pvar0, vp.pvar1);
  }

  // x <= x' on feature f: [x' < eta] <= [x < eta] for each of its predicates.
  void add_monotone_rows(int f) {
    vp.monotone_pair = true;
    int base = enc.feature_base[f];
    int n = static_cast<int>(enc.thresholds[f].size());
    for (int i = 0; i < n; ++i)
      vp.ilp.add_constraint({{vp.pvar1[base + i], 1.0}, {vp.pvar0[base + i], -1.0}},
                            Relation::LessEq, 0.0);
  }

  // Difference indicators on feature f's predicates: d_i can be 1 only where
  // the copies disagree, and at least one must. Prunes the x == x' diagonal.
  void add_difference_rows(int f) {
    int base = enc.feature_base[f];
    int n = static_cast<int>(enc.thresholds[f].size());
    std::vector<std::pair<int, double>> sum;
    for (int i = 0; i < n; ++i) {
      int d = vp.ilp.add_binary();
      int a = vp.pvar0[base + i], b = vp.pvar1[base + i];
      vp.ilp.add_constraint({{d, 1.0}, {a, -1.0}, {b, -1.0}}, Relation::LessEq, 0.0);
      vp.ilp.add_constraint({{d, 1.0}, {a, 1.0}, {b, 1.0}}, Relation::LessEq, 2.0);
      sum.emplace_back(d, 1.0);
    }
    vp.ilp.add_constraint(std::move(sum), Relation::GreaterEq, 1.0);
  }

  void score_terms(int copy, double sign, std::vector<std::pair<int, double>>* terms) const {
    int lbase = copy ? vp.lbase1 : vp.lbase0;
    for (int k = 0; k < static_cast<int>(enc.clauses.size()); ++k) {
      if (enc.clauses[k].const_false) continue;
      terms->emplace_back(lbase + k, sign * enc.activation[k]);
    }
  }

  // F(copy a) - F(copy b) >= rhs
  void add_diff_ge(int a, int b, double rhs) {
    std::vector<std::pair<int, double>> terms;
    score_terms(a, 1.0, &terms);
    score_terms(b, -1.0, &terms);
    vp.ilp.add_constraint(std::move(terms), Relation::GreaterEq, rhs);
  }

  void add_score_bound(int copy, Relation rel, double rhs) {
    std::vector<std::pair<int, double>> terms;
    score_terms(copy, 1.0, &terms);
    vp.ilp.add_constraint(std::move(terms), rel, rhs);
  }
};

void check_subsets(const FeatureSchema& s, const std::vector<std::vector<int>>& subsets,
                   const char* what) {
  if (subsets.empty()) throw std::invalid_argument(std::string(what) + ": no subsets");
  for (const auto& sub : subsets) {
    if (sub.empty()) throw std::invalid_argument(std::string(what) + ": empty subset");
    for (int f : sub) check_feature_index(s, f, what);
  }
}

}  // namespace

std::vector<ViolationProblem> encode_violation(const ModelEncoding& enc,
                                               const PropertySpec& prop,
                                               const EncodeOptions& opt) {
  const FeatureSchema& s = enc.schema;
  const double eps = opt.epsilon_strict;
  std::vector<ViolationProblem> out;

  if (const auto* m = std::get_if<Monotonicity>(&prop)) {
    check_feature_index(s, m->feature, "monotonicity");
    std::vector<Pairing> pairing(s.size(), Pairing::Tied);
    pairing[m->feature] = Pairing::Free;
    PairBuilder b(enc, opt, pairing, {},
                  "monotonicity:" + s.features[m->feature].name +
                      (m->increasing ? ":increasing" : ":decreasing"));
    b.add_monotone_rows(m->feature);
    // Violation: the score moves the wrong way while x <= x'.
    if (m->increasing)
      b.add_diff_ge(0, 1, eps);
    else
      b.add_diff_ge(1, 0, eps);
    out.push_back(std::move(b.vp));
  } else if (const auto* st = std::get_if<Stability>(&prop)) {
    if (st->features.empty()) throw std::invalid_argument("stability: no features");
    if (st->c < 0.0) throw std::invalid_argument("stability: negative c");
    for (int f : st->features) {
      check_feature_index(s, f, "stability");
      for (int sign = 0; sign < 2; ++sign) {
        std::vector<Pairing> pairing(s.size(), Pairing::Tied);
        pairing[f] = Pairing::Free;
        PairBuilder b(enc, opt, pairing, {},
                      "stability:" + s.features[f].name + (sign ? ":-" : ":+"));
        b.add_difference_rows(f);
        if (sign == 0)
          b.add_diff_ge(0, 1, st->c + eps);
        else
          b.add_diff_ge(1, 0, st->c + eps);
        out.push_back(std::move(b.vp));
      }
    }
  } else if (const auto* h = std::get_if<HighConfidence>(&prop)) {
    check_subsets(s, h->subsets, "high-confidence");
    double bar = logit(h->delta);
    for (const auto& sub : h->subsets) {
      std::vector<Pairing> pairing(s.size(), Pairing::Tied);
      for (int f : sub) pairing[f] = Pairing::Free;
      PairBuilder b(enc, opt, pairing, {}, "high-confidence:{" + join_names(s, sub) + "}");
      b.add_score_bound(0, Relation::GreaterEq, bar);
      b.add_score_bound(1, Relation::LessEq, -eps);
      out.push_back(std::move(b.vp));
    }
  } else if (const auto* ms = std::get_if<MaxScoreDecrease>(&prop)) {
    check_subsets(s, ms->subsets, "max-score-decrease");
    double bar = logit(ms->delta);
    for (const auto& sub : ms->subsets) {
      std::vector<Pairing> pairing(s.size(), Pairing::Tied);
      for (int f : sub) pairing[f] = Pairing::Free;
      PairBuilder b(enc, opt, pairing, {},
                    "max-score-decrease:{" + join_names(s, sub) + "}");
      b.add_diff_ge(0, 1, bar + eps);
      out.push_back(std::move(b.vp));
    }
  } else if (const auto* r = std::get_if<Redundancy>(&prop)) {
    if (r->instantiations.empty()) throw std::invalid_argument("redundancy: no instantiations");
    double bar = logit(r->delta);
    for (size_t i = 0; i < r->instantiations.size(); ++i) {
      const auto& inst = r->instantiations[i];
      if (inst.size() < 2)
        throw std::invalid_argument("redundancy: instantiation needs >= 2 groups");
      check_subsets(s, inst, "redundancy");
      for (size_t g = 0; g < inst.size(); ++g) {
        // Attacker rewrites every group but inst[g].
        std::vector<Pairing> pairing(s.size(), Pairing::Tied);
        for (size_t o = 0; o < inst.size(); ++o) {
          if (o == g) continue;
          for (int f : inst[o]) pairing[f] = Pairing::Free;
        }
        for (int f : inst[g]) pairing[f] = Pairing::Tied;
        PairBuilder b(enc, opt, pairing, {},
                      "redundancy:inst" + std::to_string(i) + ":keep{" +
                          join_names(s, inst[g]) + "}");
        b.add_score_bound(0, Relation::GreaterEq, bar);
        b.add_score_bound(1, Relation::LessEq, -eps);
        out.push_back(std::move(b.vp));
      }
    }
  } else if (const auto* sn = std::get_if<SmallNeighborhood>(&prop)) {
    if (static_cast<int>(sn->sigma.size()) != s.size())
      throw std::invalid_argument("small-neighborhood: sigma size mismatch");
    if (sn->epsilon < 0.0 || sn->c < 0.0)
      throw std::invalid_argument("small-neighborhood: negative epsilon or c");
    std::vector<Pairing> pairing(s.size(), Pairing::Tied);
    std::vector<double> radius(s.size(), 0.0);
    for (int f = 0; f < s.size(); ++f) {
      if (sn->sigma[f] < 0.0)
        throw std::invalid_argument("small-neighborhood: negative sigma");
      double r = sn->sigma[f] * sn->epsilon;
      bool integer = s.features[f].kind == FeatureKind::Integer;
      if (r > 0.0 && (!integer || std::floor(r + 1e-9) >= 1.0)) {
        pairing[f] = Pairing::Neighbor;
        radius[f] = r;
      }
      // Integer features with radius < 1 cannot move at all: tied.
    }
    for (int sign = 0; sign < 2; ++sign) {
      PairBuilder b(enc, opt, pairing, radius,
                    std::string("small-neighborhood:") + (sign ? "-" : "+"));
      if (sign == 0)
        b.add_diff_ge(0, 1, sn->epsilon * sn->c + eps);
      else
        b.add_diff_ge(1, 0, sn->epsilon * sn->c + eps);
      out.push_back(std::move(b.vp));
    }
  } else {
    throw std::logic_error("encode_violation: unhandled property");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Witness reconstruction

namespace {

// One copy's feasible interval for a feature: lo is attainable, hi only when
// not open. Derived from the predicate truth values plus the declared box.
struct Interval {
  double lo = -kInf;
  double hi = kInf;
  bool hi_open = false;
};

Interval feature_interval(const ModelEncoding& enc, const std::vector<int>& pv, int f,
                          const std::vector<double>& a) {
  FoldBounds fb = fold_bounds(enc.schema.features[f]);
  Interval iv{fb.lo, fb.hi, false};
  int base = enc.feature_base[f];
  const auto& t = enc.thresholds[f];
  for (int i = 0; i < static_cast<int>(t.size()); ++i) {
    bool truth = a[pv[base + i]] > 0.5;
    if (truth) {
      if (t[i] < iv.hi || (t[i] == iv.hi && !iv.hi_open)) {
        iv.hi = t[i];
        iv.hi_open = true;
      }
    } else if (t[i] > iv.lo) {
      iv.lo = t[i];
    }
  }
  return iv;
}

// Integerized inclusive endpoints; ok=false when the interval holds no integer.
struct IntRange {
  double lo = 0.0, hi = 0.0;
  bool lo_inf = false, hi_inf = false;
  bool ok = true;
};

IntRange int_range(const Interval& iv) {
  IntRange r;
  r.lo_inf = iv.lo == -kInf;
  r.hi_inf = iv.hi == kInf;
  if (!r.lo_inf) r.lo = std::ceil(iv.lo - 1e-9);
  if (!r.hi_inf) r.hi = iv.hi_open ? iv.hi - 1.0 : std::floor(iv.hi + 1e-9);
  if (!r.lo_inf && !r.hi_inf && r.lo > r.hi) r.ok = false;
  return r;
}

bool interval_empty(const Interval& iv, bool integer) {
  if (integer) return !int_range(iv).ok;
  if (iv.lo > iv.hi) return true;
  return iv.lo == iv.hi && iv.hi_open;
}

double pick_point(const Interval& iv, bool integer) {
  if (integer) {
    IntRange r = int_range(iv);
    if (r.lo_inf && r.hi_inf) return 0.0;
    if (r.lo_inf) return r.hi;   // threshold - 1 for open tops
    if (r.hi_inf) return r.lo + 1.0;
    double mid = std::floor((r.lo + r.hi) / 2.0 + 0.5);
    return std::min(std::max(mid, r.lo), r.hi);
  }
  bool lo_inf = iv.lo == -kInf, hi_inf = iv.hi == kInf;
  if (lo_inf && hi_inf) return 0.0;
  if (lo_inf) return iv.hi_open ? iv.hi - 1.0 : iv.hi;
  if (hi_inf) return iv.lo + 1.0;
  if (iv.lo == iv.hi) return iv.lo;
  return (iv.lo + iv.hi) / 2.0;
}

Interval intersect(const Interval& a, const Interval& b) {
  Interval j;
  j.lo = std::max(a.lo, b.lo);
  if (a.hi < b.hi) {
    j.hi = a.hi;
    j.hi_open = a.hi_open;
  } else if (b.hi < a.hi) {
    j.hi = b.hi;
    j.hi_open = b.hi_open;
  } else {
    j.hi = a.hi;
    j.hi_open = a.hi_open || b.hi_open;
  }
  return j;
}

// Closest admissible pair of one feature's two intervals under |x - x'| <= r.
// The neighborhood linking rows guarantee the gap between disjoint intervals
// never exceeds the radius, so endpoint picks always land within it.
std::optional<std::pair<double, double>> pick_neighbor_pair(const Interval& iv0,
                                                            const Interval& iv1, double r,
                                                            bool integer) {
  Interval j = intersect(iv0, iv1);
  if (!interval_empty(j, integer)) {
    double v = pick_point(j, integer);
    return std::make_pair(v, v);
  }
  double step = integer ? std::floor(r + 1e-9) : r;
  auto below = [](const Interval& a, const Interval& b) {
    return a.hi != kInf && b.lo != -kInf && a.hi <= b.lo;
  };
  if (below(iv0, iv1)) {
    double c = integer ? std::ceil(iv1.lo - 1e-9) : iv1.lo;
    double lo0 = iv0.lo == -kInf ? c - step : (integer ? std::ceil(iv0.lo - 1e-9) : iv0.lo);
    return std::make_pair(std::max(lo0, c - step), c);
  }
  if (below(iv1, iv0)) {
    double a = integer ? std::ceil(iv0.lo - 1e-9) : iv0.lo;
    double lo1 = iv1.lo == -kInf ? a - step : (integer ? std::ceil(iv1.lo - 1e-9) : iv1.lo);
    return std::make_pair(a, std::max(lo1, a - step));
  }
  return std::nullopt;  // inconsistent assignment
}

std::optional<Counterexample> reconstruct_witness(const ModelEncoding& enc,
                                                  const ViolationProblem& vp,
                                                  const std::vector<double>& a) {
  const int F = enc.schema.size();
  Counterexample cex;
  cex.tag = vp.tag;
  cex.x.resize(F);
  cex.xprime.resize(F);
  for (int f = 0; f < F; ++f) {
    bool integer = enc.schema.features[f].kind == FeatureKind::Integer;
    Interval iv0 = feature_interval(enc, vp.pvar0, f, a);
    if (vp.pairing[f] == Pairing::Tied) {
      double v = pick_point(iv0, integer);
      cex.x[f] = cex.xprime[f] = v;
      continue;
    }
    Interval iv1 = feature_interval(enc, vp.pvar1, f, a);
    if (vp.pairing[f] == Pairing::Neighbor) {
      auto pair = pick_neighbor_pair(iv0, iv1, vp.radius[f], integer);
      if (!pair) return std::nullopt;
      cex.x[f] = pair->first;
      cex.xprime[f] = pair->second;
      continue;
    }
    // Free: identical predicate rows mean the copies may and should coincide.
    int base = enc.feature_base[f];
    int n = static_cast<int>(enc.thresholds[f].size());
    bool same = true;
    for (int i = 0; i < n && same; ++i)
      same = (a[vp.pvar0[base + i]] > 0.5) == (a[vp.pvar1[base + i]] > 0.5);
    if (same) {
      double v = pick_point(iv0, integer);
      cex.x[f] = cex.xprime[f] = v;
    } else {
      cex.x[f] = pick_point(iv0, integer);
      cex.xprime[f] = pick_point(iv1, integer);
    }
  }
  return cex;
}

bool point_in_schema(const FeatureSchema& s, std::span<const double> x) {
  if (static_cast<int>(x.size()) != s.size()) return false;
  for (int f = 0; f < s.size(); ++f) {
    const Feature& ft = s.features[f];
    if (!std::isfinite(x[f])) return false;
    if (ft.lower_bound && x[f] < *ft.lower_bound - 1e-9) return false;
    if (ft.upper_bound && x[f] > *ft.upper_bound + 1e-9) return false;
    if (ft.kind == FeatureKind::Integer && x[f] != std::floor(x[f])) return false;
  }
  return true;
}

// Features where the two points differ.
std::vector<int> diff_features(std::span<const double> x, std::span<const double> xp) {
  std::vector<int> out;
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i] != xp[i]) out.push_back(static_cast<int>(i));
  return out;
}

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
  for (int v : a)
    if (std::find(b.begin(), b.end(), v) == b.end()) return false;
  return true;
}

}  // namespace

bool witness_violates(const LogicEnsemble& m, const PropertySpec& prop,
                      std::span<const double> x, std::span<const double> xp) {
  if (x.size() != xp.size() || static_cast<int>(x.size()) != m.schema.size()) return false;
  auto diffs = diff_features(x, xp);

  if (const auto* mo = std::get_if<Monotonicity>(&prop)) {
    if (!subset_of(diffs, {mo->feature})) return false;
    if (x[mo->feature] > xp[mo->feature]) return false;
    double d = score(m, x) - score(m, xp);
    return mo->increasing ? d > 0.0 : d < 0.0;
  }
  if (const auto* st = std::get_if<Stability>(&prop)) {
    if (diffs.size() != 1) return false;
    if (std::find(st->features.begin(), st->features.end(), diffs[0]) == st->features.end())
      return false;
    return std::fabs(score(m, x) - score(m, xp)) > st->c;
  }
  if (const auto* h = std::get_if<HighConfidence>(&prop)) {
    bool covered = false;
    for (const auto& sub : h->subsets) covered = covered || subset_of(diffs, sub);
    if (!covered) return false;
    // The confidence threshold is closed; allow solver-level slack on it.
    return score(m, x) >= logit(h->delta) - 1e-9 && score(m, xp) < 0.0;
  }
  if (const auto* ms = std::get_if<MaxScoreDecrease>(&prop)) {
    bool covered = false;
    for (const auto& sub : ms->subsets) covered = covered || subset_of(diffs, sub);
    if (!covered) return false;
    return score(m, x) - score(m, xp) > logit(ms->delta);
  }
  if (const auto* r = std::get_if<Redundancy>(&prop)) {
    bool covered = false;
    for (const auto& inst : r->instantiations) {
      for (size_t g = 0; g < inst.size() && !covered; ++g) {
        std::vector<int> touchable;
        for (size_t o = 0; o < inst.size(); ++o)
          if (o != g) touchable.insert(touchable.end(), inst[o].begin(), inst[o].end());
        // Untouched group wins over other groups listing the same feature.
        std::vector<int> allowed;
        for (int f : touchable)
          if (std::find(inst[g].begin(), inst[g].end(), f) == inst[g].end())
            allowed.push_back(f);
        covered = subset_of(diffs, allowed);
      }
      if (covered) break;
    }
    if (!covered) return false;
    return score(m, x) >= logit(r->delta) - 1e-9 && score(m, xp) < 0.0;
  }
  if (const auto* sn = std::get_if<SmallNeighborhood>(&prop)) {
    if (sn->sigma.size() != x.size()) return false;
    for (size_t f = 0; f < x.size(); ++f)
      if (std::fabs(x[f] - xp[f]) > sn->sigma[f] * sn->epsilon + 1e-9) return false;
    return std::fabs(score(m, x) - score(m, xp)) > sn->epsilon * sn->c;
  }
  return false;
}

// ---------------------------------------------------------------------------
// verify

VerifyResult verify(const LogicEnsemble& m, const PropertySpec& prop,
                    const VerifyOptions& opt) {
  m.validate();
  ModelEncoding enc = encode_model(m);
  auto disjuncts = encode_violation(enc, prop, opt.encode);

  auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  VerifyResult res;
  bool timed_out = false;
  for (const ViolationProblem& vp : disjuncts) {
    res.stats.problems++;
    double remain = opt.timeout_seconds - elapsed();
    if (remain <= 0.0) {
      timed_out = true;
      continue;
    }
    SolveResult sr = solve_ilp(
        vp.ilp, std::chrono::milliseconds(static_cast<long long>(remain * 1000.0) + 1));
    res.stats.pivots += sr.pivots;
    res.stats.nodes += sr.nodes;
    if (sr.status == SolveStatus::Feasible) {
      auto cex = reconstruct_witness(enc, vp, sr.assignment);
      bool ok = cex && point_in_schema(m.schema, cex->x) &&
                point_in_schema(m.schema, cex->xprime) &&
                witness_violates(m, prop, cex->x, cex->xprime);
      res.stats.seconds = elapsed();
      if (ok) {
        res.verdict = Verdict::Refuted;
        res.cex = std::move(cex);
      } else {
        res.verdict = Verdict::Unknown;
        res.reason = "spurious-witness";
      }
      return res;
    }
    if (sr.status != SolveStatus::Infeasible) timed_out = true;
  }
  res.stats.seconds = elapsed();
  if (timed_out) {
    res.verdict = Verdict::Unknown;
    res.reason = "timeout";
  } else {
    res.verdict = Verdict::Verified;
  }
  return res;
}

// ---------------------------------------------------------------------------
// find_evasion

AttackResult find_evasion(const LogicEnsemble& m, const AttackSpec& attack,
                          const VerifyOptions& opt) {
  m.validate();
  AttackResult res;
  if (!attack.box.empty() && static_cast<int>(attack.box.size()) != m.schema.size())
    throw std::invalid_argument("attack: box size mismatch");

  LogicEnsemble eff = m;
  for (int f = 0; f < m.schema.size(); ++f) {
    if (attack.box.empty() || !attack.box[f]) continue;
    auto [blo, bhi] = *attack.box[f];
    Feature& ft = eff.schema.features[f];
    ft.lower_bound = ft.lower_bound ? std::max(*ft.lower_bound, blo) : blo;
    ft.upper_bound = ft.upper_bound ? std::min(*ft.upper_bound, bhi) : bhi;
  }
  for (int f = 0; f < m.schema.size(); ++f) {
    FoldBounds fb = fold_bounds(eff.schema.features[f]);
    if (fb.lo > fb.hi) {
      res.status = AttackResult::Status::None;  // empty box: nothing to find
      return res;
    }
  }

  std::vector<std::pair<int, double>> extra;
  for (const AttackConstraint& c : attack.constraints) {
    for (const AttackTerm& t : c.terms) {
      check_feature_index(eff.schema, t.feature, "attack");
      extra.emplace_back(t.feature, t.eta);
    }
  }
  ModelEncoding enc = encode_model_impl(eff, extra);

  ViolationProblem vp;
  vp.tag = "attack";
  vp.pairing.assign(enc.schema.size(), Pairing::Free);
  vp.radius.assign(enc.schema.size(), 0.0);
  vp.pvar0 = add_pred_vars(vp.ilp, enc);
  vp.lbase0 = add_clause_vars(vp.ilp, enc);
  add_chain_rows(vp.ilp, enc, vp.pvar0);
  add_linking_rows(vp.ilp, enc, vp.pvar0, vp.lbase0);
  if (opt.encode.assume_round_partitions) add_round_cut_rows(vp.ilp, enc, vp.lbase0);

  for (const AttackConstraint& c : attack.constraints) {
    std::vector<std::pair<int, double>> terms;
    double rhs = c.rhs;
    for (const AttackTerm& t : c.terms) {
      const Feature& ft = enc.schema.features[t.feature];
      double eta = tighten_eta(ft, t.eta);
      double truth_coeff = t.negated ? -t.coeff : t.coeff;
      if (t.negated) rhs -= t.coeff;  // coeff * (1 - p)
      if (auto cv = fold_pred(fold_bounds(ft), eta)) {
        if (*cv) rhs -= truth_coeff;
        continue;
      }
      int pid = enc.find_pred(t.feature, eta);
      if (pid < 0) throw std::logic_error("attack: lost predicate");
      terms.emplace_back(vp.pvar0[pid], truth_coeff);
    }
    vp.ilp.add_constraint(std::move(terms), c.rel, rhs);
  }
  if (attack.require_misclassified) {
    std::vector<std::pair<int, double>> terms;
    for (int k = 0; k < static_cast<int>(enc.clauses.size()); ++k) {
      if (enc.clauses[k].const_false) continue;
      terms.emplace_back(vp.lbase0 + k, enc.activation[k]);
    }
    vp.ilp.add_constraint(std::move(terms), Relation::LessEq, -opt.encode.epsilon_strict);
  }

  res.stats.problems = 1;
  if (opt.timeout_seconds <= 0.0) {
    res.status = AttackResult::Status::Unknown;  // budget exhausted before solving
    return res;
  }
  SolveResult sr = solve_ilp(
      vp.ilp,
      std::chrono::milliseconds(static_cast<long long>(opt.timeout_seconds * 1000.0) + 1));
  res.stats.pivots = sr.pivots;
  res.stats.nodes = sr.nodes;
  if (sr.status == SolveStatus::Infeasible) {
    res.status = AttackResult::Status::None;
    return res;
  }
  if (sr.status != SolveStatus::Feasible) {
    res.status = AttackResult::Status::Unknown;
    return res;
  }

  std::vector<double> x(enc.schema.size());
  for (int f = 0; f < enc.schema.size(); ++f) {
    Interval iv = feature_interval(enc, vp.pvar0, f, sr.assignment);
    bool integer = enc.schema.features[f].kind == FeatureKind::Integer;
    x[f] = pick_point(iv, integer);
  }

  bool ok = point_in_schema(eff.schema, x);
  if (ok && attack.require_misclassified) ok = score(m, x) < 0.0;
  for (const AttackConstraint& c : attack.constraints) {
    if (!ok) break;
    double lhs = 0.0;
    for (const AttackTerm& t : c.terms) {
      double eta = tighten_eta(enc.schema.features[t.feature], t.eta);
      bool p = x[t.feature] < eta;
      lhs += t.coeff * (t.negated ? !p : p);
    }
    if (c.rel == Relation::LessEq) ok = lhs <= c.rhs + 1e-9;
    else if (c.rel == Relation::GreaterEq) ok = lhs >= c.rhs - 1e-9;
    else ok = std::fabs(lhs - c.rhs) <= 1e-9;
  }
  if (!ok) {
    res.status = AttackResult::Status::Unknown;
    return res;
  }
  res.status = AttackResult::Status::Found;
  res.x = std::move(x);
  return res;
}

}  // namespace logicert
