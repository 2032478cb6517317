#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "logicert/data.hpp"
#include "logicert/fixer.hpp"
#include "logicert/model.hpp"
#include "logicert/verifier.hpp"

using nlohmann::ordered_json;
using namespace logicert;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double default_timeout() {
  if (const char* env = std::getenv("LOGICERT_TIMEOUT")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end && *end == '\0' && v > 0.0) return v;
    std::cerr << "ignoring invalid LOGICERT_TIMEOUT=" << env << "\n";
  }
  return 30.0;
}

ordered_json named_point(const FeatureSchema& s, const std::vector<double>& x) {
  ordered_json o = ordered_json::object();
  for (size_t j = 0; j < s.features.size(); ++j) o[s.features[j].name] = x[j];
  return o;
}

ordered_json property_record(const PropertySpec& p, const VerifyResult& vr,
                             const FeatureSchema& schema) {
  ordered_json rec{{"record", "property"},
                   {"property", property_name(p)},
                   {"verdict", vr.verdict == Verdict::Verified   ? "verified"
                               : vr.verdict == Verdict::Refuted ? "refuted"
                                                                : "unknown"}};
  if (!vr.reason.empty()) rec["reason"] = vr.reason;
  if (vr.cex) {
    rec["counterexample"] = {{"tag", vr.cex->tag},
                             {"x", named_point(schema, vr.cex->x)},
                             {"xprime", named_point(schema, vr.cex->xprime)}};
  }
  rec["seconds"] = vr.stats.seconds;
  rec["nodes"] = vr.stats.nodes;
  return rec;
}

// Small-neighborhood entries may omit sigma; the training data supplies it.
std::string fill_sigma_from_data(const std::string& props_text, const Dataset& data) {
  ordered_json root = ordered_json::parse(props_text);
  if (!root.is_object() || !root.contains("properties") || !root["properties"].is_array())
    return props_text;
  bool changed = false;
  for (auto& p : root["properties"]) {
    if (!p.is_object() || p.value("type", "") != "small_neighborhood" || p.contains("sigma"))
      continue;
    std::vector<double> sd = feature_std(data);
    ordered_json sigma = ordered_json::object();
    for (size_t j = 0; j < data.schema.features.size(); ++j)
      sigma[data.schema.features[j].name] = sd[j];
    p["sigma"] = sigma;
    changed = true;
  }
  return changed ? root.dump() : props_text;
}

AttackSpec parse_attack(const std::string& text, const FeatureSchema& schema) {
  ordered_json j = ordered_json::parse(text);
  if (!j.is_object()) throw std::runtime_error("attack file: expected an object");
  AttackSpec spec;
  spec.box.assign(schema.features.size(), std::nullopt);
  if (j.contains("box")) {
    for (auto& [name, range] : j.at("box").items()) {
      int idx = schema.index_of(name);
      if (idx < 0) throw std::runtime_error("attack box: unknown feature " + name);
      if (!range.is_array() || range.size() != 2)
        throw std::runtime_error("attack box: " + name + " must be [lo, hi]");
      spec.box[idx] = std::make_pair(range[0].get<double>(), range[1].get<double>());
    }
  }
  spec.require_misclassified = j.value("require_misclassified", true);
  for (const auto& c : j.value("constraints", ordered_json::array())) {
    AttackConstraint ac;
    for (const auto& t : c.at("terms")) {
      AttackTerm term;
      term.feature = schema.index_of(t.at("feature").get<std::string>());
      if (term.feature < 0)
        throw std::runtime_error("attack constraint: unknown feature " +
                                 t.at("feature").get<std::string>());
      term.eta = t.at("eta").get<double>();
      term.negated = t.value("negated", false);
      term.coeff = t.value("coeff", 1.0);
      ac.terms.push_back(term);
    }
    std::string rel = c.value("rel", "<=");
    if (rel == "<=") ac.rel = Relation::LessEq;
    else if (rel == ">=") ac.rel = Relation::GreaterEq;
    else if (rel == "==") ac.rel = Relation::Equal;
    else throw std::runtime_error("attack constraint: rel must be <=, >= or ==");
    ac.rhs = c.at("rhs").get<double>();
    spec.constraints.push_back(std::move(ac));
  }
  return spec;
}

struct TrainArgs {
  std::string data, schema, properties, out, log;
  int rounds = 4, max_depth = 4, max_cegis = 20, seed = 17, batch_size = 1024;
  double lambda = 1.0, malicious_weight = 1.0, validation_fraction = 0.2;
  double learning_rate = 0.001, timeout = 30.0;
  bool no_property_boosting = false, assume_round_partitions = false;
};

int cmd_train(const TrainArgs& a) {
  if (a.rounds < 1) {
    std::cerr << "error: --rounds must be >= 1\n";
    return 1;
  }
  FeatureSchema schema = load_schema(a.schema);
  Dataset data = load_csv(a.data, schema);
  std::string props_text = fill_sigma_from_data(read_file(a.properties), data);
  std::vector<PropertySpec> props = properties_from_json(props_text, schema);

  TrainConfig cfg;
  cfg.rounds = a.rounds;
  cfg.boost.max_depth = a.max_depth;
  cfg.boost.lambda = a.lambda;
  cfg.boost.malicious_weight = a.malicious_weight;
  cfg.fixer.max_cegis_iters = a.max_cegis;
  cfg.fixer.timeout_base_seconds = a.timeout;
  cfg.fixer.encode.assume_round_partitions = a.assume_round_partitions;
  cfg.fixer.smooth.learning_rate = a.learning_rate;
  cfg.fixer.smooth.malicious_weight = a.malicious_weight;
  cfg.fixer.smooth.batch_size = a.batch_size;
  cfg.fixer.smooth.seed = a.seed;
  cfg.property_boosting = !a.no_property_boosting;
  cfg.validation_fraction = a.validation_fraction;
  cfg.split_seed = a.seed;

  std::ofstream log_file;
  std::string log_path = a.log.empty() ? a.out + ".log" : a.log;
  log_file.open(log_path, std::ios::binary);
  if (!log_file) throw std::runtime_error("cannot write " + log_path);
  ProgressSink sink = [&log_file](const std::string& line) { log_file << line << "\n"; };

  TrainResult tr = train_full(data, props, cfg, sink);
  save_model(tr.model, a.out);

  for (const PropertySpec& p : props) {
    VerifyOptions vo;
    vo.timeout_seconds = a.timeout;
    vo.encode = cfg.fixer.encode;
    VerifyResult vr = verify(tr.model, p, vo);
    std::cout << property_record(p, vr, schema).dump() << "\n";
  }
  ordered_json summary{{"record", "train"},
                       {"success", tr.success},
                       {"best_round", tr.best_round},
                       {"clauses", tr.model.num_clauses()},
                       {"constraints", tr.ledger.size()},
                       {"model", a.out}};
  if (tr.success) summary["validation_metric"] = tr.best_metric;
  ordered_json rounds = ordered_json::array();
  for (const RoundDiagnostic& d : tr.rounds) {
    ordered_json rd{{"round", d.round},
                    {"fix_succeeded", d.fix_succeeded},
                    {"fully_verified", d.fully_verified}};
    if (!d.detail.empty()) rd["detail"] = d.detail;
    if (d.validation_auc) rd["validation_metric"] = *d.validation_auc;
    rounds.push_back(std::move(rd));
  }
  summary["rounds"] = std::move(rounds);
  std::cout << summary.dump() << "\n";
  return tr.success ? 0 : 4;
}

int cmd_verify(const std::string& model_path, const std::string& props_path, double timeout,
               bool round_partitions) {
  LogicEnsemble m = load_model(model_path);
  std::vector<PropertySpec> props = properties_from_json(read_file(props_path), m.schema);
  int refuted = 0, unknown = 0;
  for (const PropertySpec& p : props) {
    VerifyOptions vo;
    vo.timeout_seconds = timeout;
    vo.encode.assume_round_partitions = round_partitions;
    VerifyResult vr = verify(m, p, vo);
    if (vr.verdict == Verdict::Refuted) ++refuted;
    if (vr.verdict == Verdict::Unknown) ++unknown;
    std::cout << property_record(p, vr, m.schema).dump() << "\n";
  }
  ordered_json summary{{"record", "summary"},
                       {"properties", props.size()},
                       {"verified", props.size() - refuted - unknown},
                       {"refuted", refuted},
                       {"unknown", unknown}};
  std::cout << summary.dump() << "\n";
  if (refuted > 0) return 2;
  if (unknown > 0) return 3;
  return 0;
}

int cmd_attack(const std::string& model_path, const std::string& spec_path, double timeout) {
  LogicEnsemble m = load_model(model_path);
  AttackSpec spec = parse_attack(read_file(spec_path), m.schema);
  VerifyOptions vo;
  vo.timeout_seconds = timeout;
  AttackResult ar = find_evasion(m, spec, vo);
  if (ar.status == AttackResult::Status::Found) {
    ordered_json rec{{"record", "evasion"},
                     {"status", "found"},
                     {"x", named_point(m.schema, ar.x)},
                     {"score", score(m, ar.x)}};
    std::cout << rec.dump() << "\n";
    return 0;
  }
  if (ar.status == AttackResult::Status::None) {
    std::cout << "none\n";
    return 0;
  }
  std::cout << ordered_json{{"record", "evasion"}, {"status", "unknown"}}.dump() << "\n";
  return 3;
}

int cmd_eval(const std::string& model_path, const std::string& data_path) {
  LogicEnsemble m = load_model(model_path);
  Dataset d = load_csv(data_path, m.schema);
  if (d.rows.empty()) {
    std::cerr << "error: empty dataset " << data_path << "\n";
    return 1;
  }
  Metrics met = evaluate(m, d);
  ordered_json rec{{"record", "metrics"},
                   {"tpr", met.tpr},
                   {"fpr", met.fpr},
                   {"accuracy", met.accuracy}};
  if (met.auc) rec["auc"] = *met.auc;
  rec["f1"] = met.f1;
  std::cout << rec.dump() << "\n";
  return 0;
}

int cmd_inspect(const std::string& model_path) {
  LogicEnsemble m = load_model(model_path);
  ordered_json features = ordered_json::array();
  for (const Feature& f : m.schema.features) features.push_back(f.name);
  std::cout << ordered_json{{"record", "model"},
                            {"features", features},
                            {"clauses", m.num_clauses()},
                            {"rounds", m.num_rounds()}}
                   .dump()
            << "\n";
  for (int k = 0; k < m.num_clauses(); ++k) {
    const Clause& c = m.clauses[k];
    ordered_json atoms = ordered_json::array();
    for (const Atom& at : c.atoms) {
      std::ostringstream ss;
      if (at.coeff != 1.0) ss << at.coeff << "*";
      ss << m.schema.features[at.feature].name << " < " << at.threshold;
      atoms.push_back(ss.str());
    }
    std::cout << ordered_json{{"record", "clause"},
                              {"index", k},
                              {"activation", c.activation},
                              {"atoms", atoms}}
                     .dump()
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"logic-ensemble training, robustness verification and evasion attacks"};
  app.require_subcommand(1);
  double timeout = default_timeout();

  TrainArgs ta;
  ta.timeout = timeout;
  CLI::App* train = app.add_subcommand("train", "train a verified classifier");
  train->add_option("--data", ta.data, "training CSV")->required();
  train->add_option("--schema", ta.schema, "feature schema JSON")->required();
  train->add_option("--properties", ta.properties, "property list JSON")->required();
  train->add_option("--out", ta.out, "output model path")->required();
  train->add_option("--log", ta.log, "training log path (default: <out>.log)");
  train->add_option("--rounds", ta.rounds, "boosting rounds");
  train->add_option("--max-depth", ta.max_depth, "tree depth per round");
  train->add_option("--lambda", ta.lambda, "leaf regularization");
  train->add_option("--malicious-weight", ta.malicious_weight, "class weight for label 1");
  train->add_option("--validation-fraction", ta.validation_fraction, "checkpoint holdout");
  train->add_option("--learning-rate", ta.learning_rate, "constrained-epoch step size");
  train->add_option("--batch-size", ta.batch_size, "constrained-epoch batch size");
  train->add_option("--max-cegis-iters", ta.max_cegis, "repair iterations per round");
  train->add_option("--seed", ta.seed, "split and shuffle seed");
  train->add_option("--timeout", ta.timeout, "verification timeout seconds");
  train->add_flag("--no-property-boosting", ta.no_property_boosting,
                  "verify whole model every round instead of the new suffix");

  std::string model_path, props_path, spec_path, data_path;
  bool round_partitions = false;
  CLI::App* verify_cmd = app.add_subcommand("verify", "verify properties of a model");
  verify_cmd->add_option("--model", model_path, "model JSON")->required();
  verify_cmd->add_option("--properties", props_path, "property list JSON")->required();
  verify_cmd->add_option("--timeout", timeout, "per-property timeout seconds");
  verify_cmd->add_flag("--assume-round-partitions", round_partitions,
                       "add one-active-clause-per-round cuts (tree ensembles only)");

  CLI::App* attack_cmd = app.add_subcommand("attack", "search for an evasion instance");
  attack_cmd->add_option("--model", model_path, "model JSON")->required();
  attack_cmd->add_option("--constraints", spec_path, "attack spec JSON")->required();
  attack_cmd->add_option("--timeout", timeout, "solve timeout seconds");

  CLI::App* eval_cmd = app.add_subcommand("eval", "report metrics on a dataset");
  eval_cmd->add_option("--model", model_path, "model JSON")->required();
  eval_cmd->add_option("--data", data_path, "dataset CSV")->required();

  CLI::App* inspect_cmd = app.add_subcommand("inspect", "print model structure");
  inspect_cmd->add_option("--model", model_path, "model JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (train->parsed()) return cmd_train(ta);
    if (verify_cmd->parsed()) return cmd_verify(model_path, props_path, timeout, round_partitions);
    if (attack_cmd->parsed()) return cmd_attack(model_path, spec_path, timeout);
    if (eval_cmd->parsed()) return cmd_eval(model_path, data_path);
    if (inspect_cmd->parsed()) return cmd_inspect(model_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
