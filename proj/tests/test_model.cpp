#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "logicert/model.hpp"

using namespace logicert;

namespace {

FeatureSchema two_feature_schema() {
  FeatureSchema s;
  Feature a;
  a.name = "a";
  a.kind = FeatureKind::Continuous;
  a.lower_bound = 0.0;
  a.upper_bound = 10.0;
  Feature b;
  b.name = "b";
  b.kind = FeatureKind::Integer;
  b.lower_bound = 0.0;
  b.upper_bound = 9.0;
  b.low_cost = true;
  b.monotone = MonotoneDir::Increasing;
  b.group = "g1";
  s.features = {a, b};
  return s;
}

LogicEnsemble small_model() {
  LogicEnsemble m;
  m.schema = two_feature_schema();
  Clause c0;
  c0.atoms = {{1.0, 0, 5.0}, {1.0, 1, 3.0}};
  c0.activation = -1.5;
  Clause c1;
  c1.atoms = {{-1.0, 0, -5.0}};
  c1.activation = 2.0;
  Clause c2;  // empty body, always on
  c2.activation = 0.25;
  m.clauses = {c0, c1, c2};
  m.round_boundaries = {2, 3};
  return m;
}

}  // namespace

TEST_CASE("atom evaluation is strict") {
  Atom a{1.0, 0, 5.0};
  CHECK(eval_atom(a, std::vector<double>{4.999}));
  CHECK_FALSE(eval_atom(a, std::vector<double>{5.0}));
  Atom neg{-2.0, 0, -6.0};  // -2x < -6 ie x > 3
  CHECK(eval_atom(neg, std::vector<double>{3.001}));
  CHECK_FALSE(eval_atom(neg, std::vector<double>{3.0}));
}

TEST_CASE("empty clause body is always satisfied") {
  Clause c;
  c.activation = 1.0;
  CHECK(eval_clause(c, std::vector<double>{123.0}));
}

TEST_CASE("score sums active clauses and label thresholds at zero") {
  LogicEnsemble m = small_model();
  std::vector<double> x{2.0, 1.0};  // c0 on, c1 off, c2 on
  CHECK(score(m, x) == doctest::Approx(-1.25));
  CHECK(active_clause_set(m, x) == std::vector<int>{0, 2});
  CHECK(predict_label(m, x) == 0);
  std::vector<double> y{7.0, 1.0};  // c1 + c2
  CHECK(score(m, y) == doctest::Approx(2.25));
  CHECK(predict_label(m, y) == 1);
  // Exactly zero counts as positive.
  LogicEnsemble z;
  z.schema = two_feature_schema();
  z.round_boundaries = {0};
  CHECK(score(z, x) == 0.0);
  CHECK(predict_label(z, x) == 1);
}

TEST_CASE("sigmoid and logit invert each other") {
  for (double d : {0.02, 0.5, 0.98}) CHECK(sigmoid(logit(d)) == doctest::Approx(d));
  CHECK(logit(0.5) == doctest::Approx(0.0));
  CHECK_THROWS_AS((void)logit(0.0), std::domain_error);
  CHECK_THROWS_AS((void)logit(1.0), std::domain_error);
  CHECK_THROWS_AS((void)logit(-0.1), std::domain_error);
  LogicEnsemble m = small_model();
  std::vector<double> x{2.0, 1.0};
  CHECK(predict_proba(m, x) == doctest::Approx(sigmoid(score(m, x))));
}

TEST_CASE("canonicalize_atom normalizes coefficients") {
  FeatureSchema s = two_feature_schema();

  SUBCASE("positive coefficient divides through") {
    CanonicalAtom c = canonicalize_atom({2.0, 0, 7.0}, s);
    CHECK_FALSE(c.is_constant);
    CHECK_FALSE(c.pred.negated);
    CHECK(c.pred.eta == doctest::Approx(3.5));
  }
  SUBCASE("negative coefficient flips into a negation") {
    CanonicalAtom c = canonicalize_atom({-2.0, 0, -7.0}, s);  // x > 3.5
    CHECK(c.pred.negated);
    CHECK(c.pred.eta == doctest::Approx(3.5));
  }
  SUBCASE("integer feature tightens fractional thresholds") {
    CanonicalAtom c = canonicalize_atom({1.0, 1, 2.3}, s);  // x < 2.3 iff x < 3
    CHECK(c.pred.eta == doctest::Approx(3.0));
    CanonicalAtom i = canonicalize_atom({1.0, 1, 2.0}, s);  // already integral
    CHECK(i.pred.eta == doctest::Approx(2.0));
    CanonicalAtom n = canonicalize_atom({-1.0, 1, -2.5}, s);  // x > 2.5 iff !(x < 3)
    CHECK(n.pred.negated);
    CHECK(n.pred.eta == doctest::Approx(3.0));
    CanonicalAtom ni = canonicalize_atom({-1.0, 1, -2.0}, s);  // x > 2 iff !(x < 3)
    CHECK(ni.pred.negated);
    CHECK(ni.pred.eta == doctest::Approx(3.0));
  }
  SUBCASE("zero coefficient folds to a constant") {
    CanonicalAtom t = canonicalize_atom({0.0, 0, 1.0}, s);  // 0 < 1
    CHECK(t.is_constant);
    CHECK(t.constant_value);
    CanonicalAtom f = canonicalize_atom({0.0, 0, 0.0}, s);  // 0 < 0
    CHECK(f.is_constant);
    CHECK_FALSE(f.constant_value);
  }
  SUBCASE("canonical form evaluates like the raw atom on integers") {
    for (double coeff : {1.0, -1.0, 2.0, -2.0, 3.0, -3.0}) {
      for (double thr = -6.0; thr <= 6.0; thr += 0.5) {
        Atom a{coeff, 1, thr};
        CanonicalAtom c = canonicalize_atom(a, s);
        for (int v = 0; v <= 9; ++v) {
          std::vector<double> x{0.0, double(v)};
          bool raw = eval_atom(a, x);
          bool canon = c.is_constant ? c.constant_value
                                     : (c.pred.negated ? !(v < c.pred.eta) : v < c.pred.eta);
          CHECK_MESSAGE(raw == canon, "coeff=", coeff, " thr=", thr, " v=", v);
        }
      }
    }
  }
}

TEST_CASE("round bookkeeping") {
  LogicEnsemble m = small_model();
  CHECK(m.num_clauses() == 3);
  CHECK(m.num_rounds() == 2);
  CHECK(m.round_range(0) == std::pair<int, int>{0, 2});
  CHECK(m.round_range(1) == std::pair<int, int>{2, 3});
}

TEST_CASE("validate rejects inconsistent structure") {
  LogicEnsemble m = small_model();
  m.validate();  // baseline sane

  LogicEnsemble bad_feature = small_model();
  bad_feature.clauses[0].atoms[0].feature = 7;
  CHECK_THROWS_AS(bad_feature.validate(), std::invalid_argument);

  LogicEnsemble bad_act = small_model();
  bad_act.clauses[1].activation = std::nan("");
  CHECK_THROWS_AS(bad_act.validate(), std::invalid_argument);

  LogicEnsemble bad_rounds = small_model();
  bad_rounds.round_boundaries = {2};  // does not cover all clauses
  CHECK_THROWS_AS(bad_rounds.validate(), std::invalid_argument);

  LogicEnsemble decreasing = small_model();
  decreasing.round_boundaries = {3, 2};
  CHECK_THROWS_AS(decreasing.validate(), std::invalid_argument);

  FeatureSchema dup = two_feature_schema();
  dup.features[1].name = "a";
  CHECK_THROWS_AS(dup.validate(), std::invalid_argument);

  FeatureSchema inverted = two_feature_schema();
  inverted.features[0].lower_bound = 11.0;
  CHECK_THROWS_AS(inverted.validate(), std::invalid_argument);
}

TEST_CASE("json round-trips are byte-stable") {
  LogicEnsemble m = small_model();
  std::string text = model_to_json(m);
  LogicEnsemble back = model_from_json(text);
  CHECK(model_to_json(back) == text);
  CHECK(back.num_clauses() == m.num_clauses());
  CHECK(back.schema.features[1].low_cost);
  CHECK(back.schema.features[1].monotone == MonotoneDir::Increasing);
  CHECK(back.schema.features[1].group == std::optional<std::string>{"g1"});
  CHECK(back.clauses[0].atoms[1].threshold == m.clauses[0].atoms[1].threshold);

  std::string stext = schema_to_json(m.schema);
  CHECK(schema_to_json(schema_from_json(stext)) == stext);
}

TEST_CASE("model file io") {
  LogicEnsemble m = small_model();
  const char* path = "test_model_io.json";
  save_model(m, path);
  LogicEnsemble back = load_model(path);
  CHECK(model_to_json(back) == model_to_json(m));
  std::remove(path);
  CHECK_THROWS(load_model("does_not_exist_model.json"));
}

TEST_CASE("index_of finds features by name") {
  FeatureSchema s = two_feature_schema();
  CHECK(s.index_of("a") == 0);
  CHECK(s.index_of("b") == 1);
  CHECK(s.index_of("zz") == -1);
}
