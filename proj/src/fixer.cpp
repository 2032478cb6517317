#include "logicert/fixer.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace logicert {

using nlohmann::ordered_json;

namespace {

void emit(const ProgressSink& sink, const ordered_json& rec) {
  if (sink) sink(rec.dump());
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Verified: return "verified";
    case Verdict::Refuted: return "refuted";
    default: return "unknown";
  }
}

bool is_local_kind(const PropertySpec& p) {
  return std::holds_alternative<Monotonicity>(p) || std::holds_alternative<Stability>(p);
}

}  // namespace

void ConstraintLedger::add(LedgerEntry e, int num_clauses) {
  if (e.constraint.terms.empty())
    throw std::invalid_argument("ledger: empty constraint");
  for (auto [k, coeff] : e.constraint.terms) {
    (void)coeff;
    if (k < 0 || k >= num_clauses)
      throw std::invalid_argument("ledger: constraint references missing clause");
  }
  entries_.push_back(std::move(e));
}

bool ConstraintLedger::contains(const ActivationConstraint& c) const {
  for (const LedgerEntry& e : entries_)
    if (e.constraint.rhs == c.rhs && e.constraint.terms == c.terms) return true;
  return false;
}

std::vector<ActivationConstraint> ConstraintLedger::constraints() const {
  std::vector<ActivationConstraint> out;
  out.reserve(entries_.size());
  for (const LedgerEntry& e : entries_) out.push_back(e.constraint);
  return out;
}

std::vector<ActivationConstraint> gen_constraint(const LogicEnsemble& m,
                                                 const PropertySpec& prop,
                                                 std::span<const double> x,
                                                 std::span<const double> xprime,
                                                 double epsilon_strict) {
  std::vector<int> sx = active_clause_set(m, x);
  std::vector<int> sp = active_clause_set(m, xprime);
  std::vector<int> only_x, only_xp;
  std::set_difference(sx.begin(), sx.end(), sp.begin(), sp.end(), std::back_inserter(only_x));
  std::set_difference(sp.begin(), sp.end(), sx.begin(), sx.end(), std::back_inserter(only_xp));
  if (only_x.empty() && only_xp.empty())
    throw std::logic_error("gen_constraint: counterexample pair activates identical clauses");

  // Forward difference F(x) - F(xprime) restricted to the symmetric difference.
  ActivationConstraint fwd;
  for (int k : only_x) fwd.terms.emplace_back(k, 1.0);
  for (int k : only_xp) fwd.terms.emplace_back(k, -1.0);
  ActivationConstraint bwd;
  for (auto [k, c] : fwd.terms) bwd.terms.emplace_back(k, -c);

  if (const auto* mo = std::get_if<Monotonicity>(&prop)) {
    // Keep the score from moving the wrong way across this pattern.
    ActivationConstraint row = mo->increasing ? fwd : bwd;
    row.rhs = 0.0;
    return {row};
  }
  if (const auto* st = std::get_if<Stability>(&prop)) {
    fwd.rhs = st->c;
    bwd.rhs = st->c;
    return {fwd, bwd};
  }
  if (const auto* h = std::get_if<HighConfidence>(&prop)) {
    fwd.rhs = logit(h->delta) - epsilon_strict;
    return {fwd};
  }
  if (const auto* ms = std::get_if<MaxScoreDecrease>(&prop)) {
    fwd.rhs = logit(ms->delta) - epsilon_strict;
    return {fwd};
  }
  if (const auto* r = std::get_if<Redundancy>(&prop)) {
    fwd.rhs = logit(r->delta) - epsilon_strict;
    return {fwd};
  }
  const auto& sn = std::get<SmallNeighborhood>(prop);
  fwd.rhs = sn.epsilon * sn.c;
  bwd.rhs = sn.epsilon * sn.c;
  return {fwd, bwd};
}

namespace {

LogicEnsemble suffix_model(const LogicEnsemble& m, int first) {
  LogicEnsemble sub;
  sub.schema = m.schema;
  sub.clauses.assign(m.clauses.begin() + first, m.clauses.end());
  if (!sub.clauses.empty()) sub.round_boundaries = {static_cast<int>(sub.clauses.size())};
  return sub;
}

PropertySpec scaled_property(const PropertySpec& p, double scale) {
  if (const auto* st = std::get_if<Stability>(&p)) {
    Stability s = *st;
    s.c *= scale;
    return s;
  }
  return p;
}

}  // namespace

FixResult fix(LogicEnsemble& m, const std::vector<PropertySpec>& props, const Dataset& train,
              const FixerConfig& cfg, ConstraintLedger& ledger, AdamState& adam,
              const FixScope& scope, int boost_round_id, const ProgressSink& sink) {
  m.validate();
  if (cfg.max_cegis_iters < 1) throw std::invalid_argument("fix: max_cegis_iters < 1");
  if (scope.first_trainable_clause < 0 || scope.first_trainable_clause > m.num_clauses())
    throw std::invalid_argument("fix: first_trainable_clause out of range");

  FixResult out;
  const int nc = m.num_clauses();
  std::vector<uint8_t> frozen(nc, 0);
  for (int k = 0; k < scope.first_trainable_clause; ++k) frozen[k] = 1;

  double timeout = cfg.timeout_base_seconds;
  int next_cex_id = 0;
  for (const LedgerEntry& e : ledger.entries()) next_cex_id = std::max(next_cex_id, e.cex_id + 1);
  const double eps = cfg.encode.epsilon_strict;

  for (int iter = 1; iter <= cfg.max_cegis_iters; ++iter) {
    out.iterations = iter;
    int added = 0;

    // Ledger monotonicity: gradient drift can re-activate an old pair through
    // a new clause pattern; re-deriving its constraint keeps it suppressed.
    const int stored = ledger.size();
    for (int i = 0; i < stored; ++i) {
      const LedgerEntry e = ledger.entries()[i];
      if (e.property_index < 0 || e.property_index >= static_cast<int>(props.size())) continue;
      if (!witness_violates(m, props[e.property_index], e.x, e.xprime)) continue;
      for (ActivationConstraint& row :
           gen_constraint(m, props[e.property_index], e.x, e.xprime, eps)) {
        if (ledger.contains(row)) continue;
        LedgerEntry ne = e;
        ne.constraint = std::move(row);
        ne.cegis_iter = iter;
        ne.boost_round = boost_round_id;
        ledger.add(std::move(ne), nc);
        ++added;
        emit(sink, {{"event", "constraint"},
                    {"round", boost_round_id},
                    {"iter", iter},
                    {"cex_id", e.cex_id},
                    {"source", "recheck"},
                    {"property", e.property}});
      }
    }

    bool all_ok = true, refuted_any = false, timed_out = false, spurious = false;
    for (size_t pi = 0; pi < props.size(); ++pi) {
      const PropertySpec& prop = props[pi];
      bool local = scope.local_mono_stability && is_local_kind(prop) &&
                   scope.first_trainable_clause > 0;
      VerifyOptions vo;
      vo.timeout_seconds = timeout;
      vo.encode = cfg.encode;

      VerifyResult vr;
      std::vector<ActivationConstraint> rows;
      std::string tag;
      if (local) {
        LogicEnsemble sub = suffix_model(m, scope.first_trainable_clause);
        PropertySpec lp = scaled_property(prop, scope.stability_scale);
        vr = verify(sub, lp, vo);
        if (vr.verdict == Verdict::Refuted) {
          rows = gen_constraint(sub, lp, vr.cex->x, vr.cex->xprime, eps);
          for (ActivationConstraint& row : rows)
            for (auto& [k, c] : row.terms) k += scope.first_trainable_clause;
          tag = vr.cex->tag + ":round-local";
        }
      } else {
        vr = verify(m, prop, vo);
        if (vr.verdict == Verdict::Refuted)
          rows = gen_constraint(m, prop, vr.cex->x, vr.cex->xprime, eps);
        if (vr.cex) tag = vr.cex->tag;
      }
      out.stats.problems += vr.stats.problems;
      out.stats.pivots += vr.stats.pivots;
      out.stats.nodes += vr.stats.nodes;
      out.stats.seconds += vr.stats.seconds;
      emit(sink, {{"event", "verify"},
                  {"round", boost_round_id},
                  {"iter", iter},
                  {"property", property_name(prop)},
                  {"scope", local ? "round" : "full"},
                  {"verdict", verdict_name(vr.verdict)},
                  {"reason", vr.reason},
                  {"seconds", vr.stats.seconds},
                  {"nodes", vr.stats.nodes}});

      if (vr.verdict == Verdict::Verified) continue;
      all_ok = false;
      if (vr.verdict == Verdict::Unknown) {
        if (vr.reason == "timeout") timed_out = true;
        else spurious = true;
        continue;
      }

      refuted_any = true;
      int id = next_cex_id++;
      emit(sink, {{"event", "counterexample"},
                  {"round", boost_round_id},
                  {"iter", iter},
                  {"property", property_name(prop)},
                  {"tag", tag},
                  {"cex_id", id},
                  {"x", vr.cex->x},
                  {"xprime", vr.cex->xprime}});
      for (ActivationConstraint& row : rows) {
        if (ledger.contains(row)) continue;
        LedgerEntry e;
        e.constraint = std::move(row);
        e.property = tag;
        e.property_index = static_cast<int>(pi);
        e.x = vr.cex->x;
        e.xprime = vr.cex->xprime;
        e.cex_id = id;
        e.cegis_iter = iter;
        e.boost_round = boost_round_id;
        ledger.add(std::move(e), nc);
        ++added;
        emit(sink, {{"event", "constraint"},
                    {"round", boost_round_id},
                    {"iter", iter},
                    {"cex_id", id},
                    {"source", "verify"},
                    {"property", tag}});
      }
    }

    if (all_ok) {
      out.status = FixStatus::Fixed;
      emit(sink, {{"event", "fix_done"},
                  {"round", boost_round_id},
                  {"status", "fixed"},
                  {"iterations", iter}});
      return out;
    }

    bool trained = false;
    if (added > 0 || refuted_any) {
      std::vector<double> acts(nc);
      for (int k = 0; k < nc; ++k) acts[k] = m.clauses[k].activation;
      if (!constraints_feasible(ledger.constraints(), nc, &acts, &frozen)) {
        out.failure_reason = "constraint set infeasible for trainable activations";
        emit(sink, {{"event", "fix_done"},
                    {"round", boost_round_id},
                    {"status", "failure"},
                    {"reason", out.failure_reason},
                    {"iterations", iter}});
        return out;
      }
      double loss = train_epoch(m, train, ledger.constraints(), cfg.smooth, adam, &frozen);
      trained = true;
      emit(sink, {{"event", "epoch"},
                  {"round", boost_round_id},
                  {"iter", iter},
                  {"loss", loss},
                  {"constraints", ledger.size()}});
    }

    bool progress = added > 0 || trained;
    if (timed_out && !progress) {
      timeout *= cfg.timeout_growth;
      emit(sink, {{"event", "timeout_growth"},
                  {"round", boost_round_id},
                  {"iter", iter},
                  {"timeout_seconds", timeout}});
    } else if (spurious && !progress) {
      out.failure_reason = "no progress: spurious witness";
      emit(sink, {{"event", "fix_done"},
                  {"round", boost_round_id},
                  {"status", "failure"},
                  {"reason", out.failure_reason},
                  {"iterations", iter}});
      return out;
    }
  }

  out.failure_reason = "CEGIS iteration cap reached";
  emit(sink, {{"event", "fix_done"},
              {"round", boost_round_id},
              {"status", "failure"},
              {"reason", out.failure_reason},
              {"iterations", out.iterations}});
  return out;
}

TrainResult train_full(const Dataset& data, const std::vector<PropertySpec>& props,
                       const TrainConfig& cfg, const ProgressSink& sink) {
  data.validate();
  if (cfg.rounds < 1) throw std::invalid_argument("train: rounds < 1");
  if (cfg.validation_fraction < 0.0 || cfg.validation_fraction >= 1.0)
    throw std::invalid_argument("train: validation_fraction outside [0,1)");
  for (const auto& mask : cfg.feature_masks)
    if (mask.empty()) throw std::invalid_argument("train: empty feature mask");
  for (const auto& mask : cfg.property_masks) {
    if (mask.empty()) throw std::invalid_argument("train: empty property mask");
    for (int pi : mask)
      if (pi < 0 || pi >= static_cast<int>(props.size()))
        throw std::invalid_argument("train: property mask index out of range");
  }

  SplitResult split = split_dataset(
      data, {1.0 - cfg.validation_fraction, cfg.validation_fraction, 0.0}, cfg.split_seed);
  const Dataset& train = split.train;
  const Dataset& valid = cfg.validation_fraction > 0.0 ? split.valid : split.train;

  TrainResult out;
  LogicEnsemble model;
  model.schema = data.schema;
  double best = -1.0;

  for (int r = 0; r < cfg.rounds; ++r) {
    int first_new = model.num_clauses();
    const std::vector<int>* fmask =
        cfg.feature_masks.empty() ? nullptr
                                  : &cfg.feature_masks[r % cfg.feature_masks.size()];
    boost_round(model, train, cfg.boost, fmask);
    Metrics tm = evaluate(model, train);
    emit(sink, {{"event", "boost_round"},
                {"round", r},
                {"clauses", model.num_clauses()},
                {"train_accuracy", tm.accuracy}});

    std::vector<PropertySpec> round_props;
    if (cfg.property_masks.empty()) {
      round_props = props;
    } else {
      for (int pi : cfg.property_masks[r % cfg.property_masks.size()])
        round_props.push_back(props[pi]);
    }

    FixScope scope;
    if (cfg.property_boosting) {
      scope.first_trainable_clause = first_new;
      scope.local_mono_stability = true;
      scope.stability_scale = 1.0 / cfg.rounds;
    }

    AdamState adam = make_adam_state(num_params(model));
    FixResult fr =
        fix(model, round_props, train, cfg.fixer, out.ledger, adam, scope, r, sink);

    RoundDiagnostic diag;
    diag.round = r;
    diag.fix_succeeded = fr.status == FixStatus::Fixed;
    diag.detail = fr.failure_reason;

    if (diag.fix_succeeded) {
      // Checkpoint gate: the whole property list on the whole model.
      bool all = true;
      std::string why;
      for (const PropertySpec& p : props) {
        VerifyOptions vo;
        vo.timeout_seconds = cfg.fixer.timeout_base_seconds;
        vo.encode = cfg.fixer.encode;
        VerifyResult vr = verify(model, p, vo);
        if (vr.verdict != Verdict::Verified) {
          all = false;
          why = property_name(p) + " " + verdict_name(vr.verdict) +
                (vr.reason.empty() ? "" : " (" + vr.reason + ")");
          break;
        }
      }
      diag.fully_verified = all;
      if (!all) diag.detail = "checkpoint gate: " + why;
      if (all) {
        Metrics vm = evaluate(model, valid);
        double metric = vm.auc ? *vm.auc : vm.accuracy;
        diag.validation_auc = metric;
        emit(sink, {{"event", "checkpoint"},
                    {"round", r},
                    {"validation_metric", metric},
                    {"best_so_far", best}});
        if (metric > best) {
          best = metric;
          out.model = model;
          out.best_round = r;
          out.best_metric = metric;
          out.success = true;
        }
      }
    }
    out.rounds.push_back(std::move(diag));
  }

  if (!out.success) out.model = std::move(model);
  emit(sink, {{"event", "train_done"},
              {"success", out.success},
              {"best_round", out.best_round},
              {"constraints", out.ledger.size()}});
  return out;
}

}  // namespace logicert
