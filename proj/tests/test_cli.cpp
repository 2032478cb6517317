#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "logicert/model.hpp"

using namespace logicert;
using nlohmann::json;

namespace {

const std::string& scratch_dir() {
  static const std::string dir = [] {
    char tmpl[] = "/tmp/logicert_cli_XXXXXX";
    char* d = mkdtemp(tmpl);
    REQUIRE(d != nullptr);
    return std::string(d);
  }();
  return dir;
}

std::string path_of(const std::string& name) { return scratch_dir() + "/" + name; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  std::string err_path = path_of("stderr.txt");
  std::string cmd = env_prefix + (env_prefix.empty() ? "" : " ") + LOGICERT_CLI_PATH + " " +
                    args + " 2>" + err_path;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  RunResult r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  REQUIRE(WIFEXITED(status));
  r.code = WEXITSTATUS(status);
  r.err = read_text(err_path);
  return r;
}

std::vector<json> json_lines(const std::string& text) {
  std::vector<json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] == '{') out.push_back(json::parse(line));
  return out;
}

json find_record(const std::vector<json>& lines, const std::string& kind) {
  for (const json& l : lines)
    if (l.value("record", "") == kind) return l;
  std::string msg = "no record of kind " + kind;
  REQUIRE_MESSAGE(false, msg.c_str());
  return {};
}

FeatureSchema single_feature_schema() {
  FeatureSchema s;
  Feature f;
  f.name = "x0";
  f.kind = FeatureKind::Integer;
  f.lower_bound = 0.0;
  f.upper_bound = 9.0;
  s.features = {f};
  return s;
}

// Score rises from 0 to 1 at x0 = 5: monotone increasing.
std::string mono_ok_model() {
  std::string path = path_of("mono_ok.json");
  LogicEnsemble m;
  m.schema = single_feature_schema();
  Clause c;
  c.atoms = {Atom{-1.0, 0, -4.5}};
  c.activation = 1.0;
  m.clauses = {c};
  m.round_boundaries = {1};
  save_model(m, path);
  return path;
}

// Score falls from 1 to 0 at x0 = 5: refutes monotone increasing.
std::string mono_bad_model() {
  std::string path = path_of("mono_bad.json");
  LogicEnsemble m;
  m.schema = single_feature_schema();
  Clause c;
  c.atoms = {Atom{1.0, 0, 4.5}};
  c.activation = 1.0;
  m.clauses = {c};
  m.round_boundaries = {1};
  save_model(m, path);
  return path;
}

// Benign region below 5 (score -1), malicious at or above (score +2).
std::string two_cell_model() {
  std::string path = path_of("two_cell.json");
  LogicEnsemble m;
  m.schema = single_feature_schema();
  Clause lo;
  lo.atoms = {Atom{1.0, 0, 4.5}};
  lo.activation = -1.0;
  Clause hi;
  hi.atoms = {Atom{-1.0, 0, -4.5}};
  hi.activation = 2.0;
  m.clauses = {lo, hi};
  m.round_boundaries = {2};
  save_model(m, path);
  return path;
}

std::string mono_props_file(const std::string& direction) {
  std::string path = path_of("props_" + direction + ".json");
  write_text(path, "{\"properties\":[{\"type\":\"monotonicity\",\"feature\":\"x0\","
                   "\"direction\":\"" + direction + "\"}]}");
  return path;
}

// Two monotone integer features; label 1 iff fa + fb >= 10.
void write_training_fixtures(std::string& schema_path, std::string& csv_path) {
  FeatureSchema s;
  for (const char* name : {"fa", "fb"}) {
    Feature f;
    f.name = name;
    f.kind = FeatureKind::Integer;
    f.lower_bound = 0.0;
    f.upper_bound = 9.0;
    f.monotone = MonotoneDir::Increasing;
    s.features.push_back(std::move(f));
  }
  schema_path = path_of("train_schema.json");
  write_text(schema_path, schema_to_json(s));

  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> d(0, 9);
  std::ostringstream csv;
  csv << "fa,fb,label\n";
  for (int i = 0; i < 240; ++i) {
    int a = d(rng), b = d(rng);
    csv << a << "," << b << "," << (a + b >= 10 ? 1 : 0) << "\n";
  }
  csv_path = path_of("train_data.csv");
  write_text(csv_path, csv.str());
}

}  // namespace

TEST_CASE("verify reports verdicts and exit codes") {
  std::string props = mono_props_file("increasing");

  RunResult ok = run_cli("verify --model " + mono_ok_model() + " --properties " + props);
  CHECK(ok.code == 0);
  auto ok_lines = json_lines(ok.out);
  json prop = find_record(ok_lines, "property");
  CHECK(prop["verdict"] == "verified");
  CHECK(prop["property"] == "monotonicity");
  json summary = find_record(ok_lines, "summary");
  CHECK(summary["verified"] == 1);
  CHECK(summary["refuted"] == 0);

  RunResult bad = run_cli("verify --model " + mono_bad_model() + " --properties " + props);
  CHECK(bad.code == 2);
  auto bad_lines = json_lines(bad.out);
  json refuted = find_record(bad_lines, "property");
  CHECK(refuted["verdict"] == "refuted");
  REQUIRE(refuted.contains("counterexample"));
  double x = refuted["counterexample"]["x"]["x0"].get<double>();
  double xp = refuted["counterexample"]["xprime"]["x0"].get<double>();
  // The witness crosses the threshold in the rising direction.
  CHECK(x < 5.0);
  CHECK(xp >= 5.0);
  CHECK(find_record(bad_lines, "summary")["refuted"] == 1);
}

TEST_CASE("verify exits 3 on timeout") {
  RunResult r = run_cli("verify --model " + mono_bad_model() + " --properties " +
                        mono_props_file("increasing") + " --timeout 0");
  CHECK(r.code == 3);
  json prop = find_record(json_lines(r.out), "property");
  CHECK(prop["verdict"] == "unknown");
  CHECK(prop["reason"] == "timeout");
}

TEST_CASE("attack finds an evasion instance inside the box") {
  std::string spec = path_of("attack_wide.json");
  write_text(spec, "{\"box\":{\"x0\":[0,9]}}");
  RunResult r = run_cli("attack --model " + two_cell_model() + " --constraints " + spec);
  CHECK(r.code == 0);
  json rec = find_record(json_lines(r.out), "evasion");
  CHECK(rec["status"] == "found");
  double x = rec["x"]["x0"].get<double>();
  CHECK(x >= 0.0);
  CHECK(x < 5.0);  // only the low cell is classified benign
  CHECK(rec["score"].get<double>() < 0.0);
}

TEST_CASE("attack prints none when the box is clean") {
  std::string spec = path_of("attack_high.json");
  write_text(spec, "{\"box\":{\"x0\":[6,9]}}");
  RunResult r = run_cli("attack --model " + two_cell_model() + " --constraints " + spec);
  CHECK(r.code == 0);
  CHECK(r.out.substr(0, 5) == "none\n");
}

TEST_CASE("attack respects predicate constraints and timeouts") {
  std::string spec = path_of("attack_pred.json");
  // Force the benign-side predicate off: no evasion remains.
  write_text(spec, "{\"box\":{\"x0\":[0,9]},\"constraints\":[{\"terms\":[{\"feature\":\"x0\","
                   "\"eta\":5}],\"rel\":\"<=\",\"rhs\":0}]}");
  RunResult r = run_cli("attack --model " + two_cell_model() + " --constraints " + spec);
  CHECK(r.code == 0);
  CHECK(r.out.substr(0, 5) == "none\n");

  std::string wide = path_of("attack_wide.json");
  write_text(wide, "{\"box\":{\"x0\":[0,9]}}");
  RunResult t = run_cli("attack --model " + two_cell_model() + " --constraints " + wide +
                        " --timeout 0");
  CHECK(t.code == 3);
  CHECK(find_record(json_lines(t.out), "evasion")["status"] == "unknown");
}

TEST_CASE("train writes a verified model deterministically") {
  std::string schema_path, csv_path;
  write_training_fixtures(schema_path, csv_path);
  std::string props = path_of("train_props.json");
  write_text(props, "{\"properties\":[{\"type\":\"monotonicity\",\"features\":\"monotone\"}]}");

  std::string base = "train --data " + csv_path + " --schema " + schema_path +
                     " --properties " + props + " --rounds 2 --max-depth 2 --seed 7 --out ";
  std::string out_a = path_of("model_a.json"), out_b = path_of("model_b.json");
  RunResult a = run_cli(base + out_a);
  REQUIRE(a.code == 0);
  RunResult b = run_cli(base + out_b);
  REQUIRE(b.code == 0);
  CHECK(read_text(out_a) == read_text(out_b));

  auto lines = json_lines(a.out);
  json rec = find_record(lines, "train");
  CHECK(rec["success"] == true);
  CHECK(rec["rounds"].size() == 2);
  CHECK(rec["constraints"].is_number());
  for (const json& l : lines)
    if (l.value("record", "") == "property") CHECK(l["verdict"] == "verified");

  // The log is line-delimited JSON with event tags.
  std::string log = read_text(out_a + ".log");
  auto events = json_lines(log);
  REQUIRE(!events.empty());
  bool saw_boost = false, saw_done = false;
  for (const json& e : events) {
    REQUIRE(e.contains("event"));
    if (e["event"] == "boost_round") saw_boost = true;
    if (e["event"] == "train_done") saw_done = true;
  }
  CHECK(saw_boost);
  CHECK(saw_done);

  RunResult ev = run_cli("eval --model " + out_a + " --data " + csv_path);
  CHECK(ev.code == 0);
  CHECK(find_record(json_lines(ev.out), "metrics")["accuracy"].get<double>() > 0.9);
}

TEST_CASE("train exits 4 when repair cannot land") {
  std::string schema_path, csv_path;
  write_training_fixtures(schema_path, csv_path);
  std::string props = path_of("train_props_bad.json");
  write_text(props, "{\"properties\":[{\"type\":\"monotonicity\",\"feature\":\"fa\","
                    "\"direction\":\"decreasing\"}]}");
  std::string out = path_of("model_bad.json");
  RunResult r = run_cli("train --data " + csv_path + " --schema " + schema_path +
                        " --properties " + props +
                        " --rounds 1 --max-depth 2 --max-cegis-iters 1 --out " + out);
  CHECK(r.code == 4);
  json rec = find_record(json_lines(r.out), "train");
  CHECK(rec["success"] == false);
  CHECK(rec["rounds"][0]["fix_succeeded"] == false);
}

TEST_CASE("eval reports metric records") {
  std::string csv = path_of("eval_data.csv");
  write_text(csv, "x0,label\n1,0\n2,0\n7,1\n8,1\n");
  RunResult r = run_cli("eval --model " + two_cell_model() + " --data " + csv);
  CHECK(r.code == 0);
  json m = find_record(json_lines(r.out), "metrics");
  CHECK(m["tpr"].get<double>() == doctest::Approx(1.0));
  CHECK(m["fpr"].get<double>() == doctest::Approx(0.0));
  CHECK(m["accuracy"].get<double>() == doctest::Approx(1.0));
  CHECK(m["f1"].get<double>() == doctest::Approx(1.0));
  CHECK(m["auc"].get<double>() == doctest::Approx(1.0));

  std::string one_class = path_of("eval_one_class.csv");
  write_text(one_class, "x0,label\n1,0\n2,0\n3,0\n");
  json m1 = find_record(json_lines(run_cli("eval --model " + two_cell_model() +
                                           " --data " + one_class).out),
                        "metrics");
  CHECK_FALSE(m1.contains("auc"));  // single-class data has no ranking metric
}

TEST_CASE("inspect prints the model structure") {
  RunResult r = run_cli("inspect --model " + two_cell_model());
  CHECK(r.code == 0);
  json rec = find_record(json_lines(r.out), "model");
  CHECK(rec["clauses"] == 2);
  int clause_records = 0;
  for (const json& l : json_lines(r.out))
    if (l.value("record", "") == "clause") ++clause_records;
  CHECK(clause_records == 2);
}

TEST_CASE("usage and file errors exit 1") {
  CHECK(run_cli("").code == 1);                 // subcommand required
  CHECK(run_cli("verify").code == 1);           // missing required options
  CHECK(run_cli("frobnicate --x 1").code == 1); // unknown subcommand

  RunResult missing = run_cli("verify --model " + path_of("no_such.json") +
                              " --properties " + mono_props_file("increasing"));
  CHECK(missing.code == 1);
  CHECK(missing.err.find("error:") != std::string::npos);

  std::string garbled = path_of("garbled.json");
  write_text(garbled, "{not json");
  CHECK(run_cli("inspect --model " + garbled).code == 1);

  std::string empty_csv = path_of("empty.csv");
  write_text(empty_csv, "x0,label\n");
  CHECK(run_cli("eval --model " + two_cell_model() + " --data " + empty_csv).code == 1);

  std::string schema_path, csv_path;
  write_training_fixtures(schema_path, csv_path);
  RunResult rounds = run_cli("train --data " + csv_path + " --schema " + schema_path +
                             " --properties " + mono_props_file("increasing") +
                             " --rounds 0 --out " + path_of("nope.json"));
  CHECK(rounds.code == 1);
  CHECK(rounds.err.find("--rounds") != std::string::npos);
}

TEST_CASE("environment variable sets the default timeout") {
  std::string model = mono_bad_model();
  std::string props = mono_props_file("increasing");

  // A tiny default budget starves verification into unknown.
  RunResult starved = run_cli("verify --model " + model + " --properties " + props,
                              "LOGICERT_TIMEOUT=1e-9");
  CHECK(starved.code == 3);

  // An explicit flag wins over the environment.
  RunResult flag = run_cli("verify --model " + model + " --properties " + props +
                           " --timeout 30", "LOGICERT_TIMEOUT=1e-9");
  CHECK(flag.code == 2);

  // Junk values are ignored with a warning and the default applies.
  RunResult junk = run_cli("verify --model " + model + " --properties " + props,
                           "LOGICERT_TIMEOUT=bogus");
  CHECK(junk.code == 2);
  CHECK(junk.err.find("LOGICERT_TIMEOUT") != std::string::npos);
}
