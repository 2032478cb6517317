#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "logicert/booster.hpp"
#include "logicert/verifier.hpp"
#include "oracles.hpp"

using namespace logicert;

namespace {

FeatureSchema int_schema_0_9() {
  FeatureSchema s;
  Feature f;
  f.name = "x0";
  f.kind = FeatureKind::Integer;
  f.lower_bound = 0.0;
  f.upper_bound = 9.0;
  s.features = {f};
  return s;
}

LogicEnsemble one_clause(double activation, FeatureSchema schema = int_schema_0_9()) {
  LogicEnsemble m;
  m.schema = std::move(schema);
  Clause c;
  c.atoms = {{1.0, 0, 5.0}};
  c.activation = activation;
  m.clauses = {c};
  m.round_boundaries = {1};
  return m;
}

}  // namespace

TEST_CASE("property json parses explicit forms and round-trips") {
  FeatureSchema s;
  for (int j = 0; j < 3; ++j) {
    Feature f;
    f.name = "f" + std::to_string(j);
    f.kind = FeatureKind::Integer;
    f.lower_bound = 0.0;
    f.upper_bound = 5.0;
    if (j == 0) {
      f.monotone = MonotoneDir::Increasing;
    }
    if (j == 1) f.low_cost = true;
    f.group = j < 2 ? std::optional<std::string>{"g" + std::to_string(j)} : std::nullopt;
    s.features.push_back(std::move(f));
  }

  std::string text = R"({"properties":[
    {"type":"monotonicity","feature":"f0","direction":"increasing"},
    {"type":"stability","features":["f1","f2"],"c":0.25},
    {"type":"high_confidence","delta":0.98,"subsets":[["f1"],["f1","f2"]]},
    {"type":"max_score_decrease","delta":0.9,"subsets":[["f1"]]},
    {"type":"redundancy","delta":0.95,"instantiations":[[["f0"],["f1"]]]},
    {"type":"small_neighborhood","epsilon":0.2,"c":0.5,"sigma":{"f0":1.0,"f1":2.0,"f2":0.5}}
  ]})";
  std::vector<PropertySpec> props = properties_from_json(text, s);
  REQUIRE(props.size() == 6);
  CHECK(std::get<Monotonicity>(props[0]).feature == 0);
  CHECK(std::get<Monotonicity>(props[0]).increasing);
  CHECK(std::get<Stability>(props[1]).features == std::vector<int>{1, 2});
  CHECK(std::get<Stability>(props[1]).c == doctest::Approx(0.25));
  CHECK(std::get<HighConfidence>(props[2]).subsets ==
        std::vector<std::vector<int>>{{1}, {1, 2}});
  CHECK(std::get<MaxScoreDecrease>(props[3]).delta == doctest::Approx(0.9));
  CHECK(std::get<Redundancy>(props[4]).instantiations ==
        std::vector<std::vector<std::vector<int>>>{{{0}, {1}}});
  CHECK(std::get<SmallNeighborhood>(props[5]).sigma ==
        std::vector<double>{1.0, 2.0, 0.5});

  // Round-trip through the serializer preserves everything.
  std::string dumped = properties_to_json(props, s);
  std::vector<PropertySpec> again = properties_from_json(dumped, s);
  CHECK(properties_to_json(again, s) == dumped);
}

TEST_CASE("property json shorthands expand against the schema") {
  FeatureSchema s;
  for (int j = 0; j < 4; ++j) {
    Feature f;
    f.name = "f" + std::to_string(j);
    f.kind = FeatureKind::Continuous;
    f.lower_bound = 0.0;
    f.upper_bound = 1.0;
    s.features.push_back(std::move(f));
  }
  s.features[0].monotone = MonotoneDir::Increasing;
  s.features[2].monotone = MonotoneDir::Decreasing;
  s.features[1].low_cost = true;
  s.features[3].low_cost = true;
  s.features[1].group = "ga";
  s.features[3].group = "gb";

  std::string text = R"({"properties":[
    {"type":"monotonicity","features":"monotone"},
    {"type":"stability","features":"all","c":1.0},
    {"type":"high_confidence","delta":0.98,"subsets":"low_cost_singletons"},
    {"type":"redundancy","delta":0.98,"instantiations":"groups"}
  ]})";
  std::vector<PropertySpec> props = properties_from_json(text, s);
  REQUIRE(props.size() == 5);  // monotone shorthand expands to two entries
  CHECK(std::get<Monotonicity>(props[0]).feature == 0);
  CHECK(std::get<Monotonicity>(props[0]).increasing);
  CHECK(std::get<Monotonicity>(props[1]).feature == 2);
  CHECK_FALSE(std::get<Monotonicity>(props[1]).increasing);
  CHECK(std::get<Stability>(props[2]).features == std::vector<int>{0, 1, 2, 3});
  CHECK(std::get<HighConfidence>(props[3]).subsets == std::vector<std::vector<int>>{{1}, {3}});
  CHECK(std::get<Redundancy>(props[4]).instantiations ==
        std::vector<std::vector<std::vector<int>>>{{{1}, {3}}});
}

TEST_CASE("property json rejects malformed input") {
  FeatureSchema s = int_schema_0_9();
  CHECK_THROWS_AS(properties_from_json("[1,2]", s), std::invalid_argument);
  CHECK_THROWS_AS(properties_from_json("{\"properties\":[{\"type\":\"nope\"}]}", s),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      properties_from_json(
          "{\"properties\":[{\"type\":\"monotonicity\",\"feature\":\"zz\"}]}", s),
      std::invalid_argument);
  CHECK_THROWS_AS(
      properties_from_json(
          "{\"properties\":[{\"type\":\"high_confidence\",\"delta\":1.5,\"subsets\":[[\"x0\"]]}]}",
          s),
      std::invalid_argument);
  CHECK_THROWS_AS(
      properties_from_json(
          "{\"properties\":[{\"type\":\"stability\",\"features\":[\"x0\"],\"c\":-1}]}", s),
      std::invalid_argument);
  CHECK_THROWS_AS(
      properties_from_json(
          "{\"properties\":[{\"type\":\"small_neighborhood\",\"epsilon\":0.1,\"c\":0.1}]}", s),
      std::invalid_argument);
}

TEST_CASE("encode_model folds bounds and tightens integer thresholds") {
  FeatureSchema s = int_schema_0_9();
  LogicEnsemble m;
  m.schema = s;

  Clause always;  // eta > ub folds the atom to true
  always.atoms = {{1.0, 0, 100.0}};
  always.activation = 1.0;
  Clause never;  // x0 < 0 with lb 0 folds to false
  never.atoms = {{1.0, 0, 0.0}};
  never.activation = 2.0;
  Clause frac;  // x0 < 2.5 tightens to x0 < 3
  frac.atoms = {{1.0, 0, 2.5}};
  frac.activation = 3.0;
  Clause dup;  // duplicate literal collapses
  dup.atoms = {{1.0, 0, 6.0}, {2.0, 0, 12.0}};
  dup.activation = 4.0;
  Clause contra;  // x0 < 6 and x0 > 5 canonicalize to p and !p
  contra.atoms = {{1.0, 0, 6.0}, {-1.0, 0, -5.0}};
  contra.activation = 5.0;
  m.clauses = {always, never, frac, dup, contra};
  m.round_boundaries = {5};

  ModelEncoding enc = encode_model(m);
  CHECK(enc.clauses[0].lits.empty());
  CHECK_FALSE(enc.clauses[0].const_false);
  CHECK(enc.clauses[1].const_false);
  REQUIRE(enc.clauses[2].lits.size() == 1);
  CHECK(enc.pred_eta(enc.clauses[2].lits[0].pred) == doctest::Approx(3.0));
  CHECK(enc.clauses[3].lits.size() == 1);
  CHECK(enc.clauses[4].const_false);
  // Threshold table is ascending and deduplicated: {3, 6}.
  REQUIRE(enc.thresholds[0].size() == 2);
  CHECK(enc.thresholds[0][0] == doctest::Approx(3.0));
  CHECK(enc.thresholds[0][1] == doctest::Approx(6.0));
  CHECK(enc.num_preds == 2);
  CHECK(enc.find_pred(0, 3.0) == 0);
  CHECK(enc.find_pred(0, 6.0) == 1);
  CHECK(enc.find_pred(0, 4.0) == -1);
}

TEST_CASE("encode_violation emits the documented disjunct lists") {
  LogicEnsemble m = one_clause(1.0);
  ModelEncoding enc = encode_model(m);

  Monotonicity mono{0, true};
  auto dm = encode_violation(enc, mono);
  REQUIRE(dm.size() == 1);
  CHECK(dm[0].tag == "monotonicity:x0:increasing");
  CHECK(dm[0].monotone_pair);
  CHECK(dm[0].pairing[0] == Pairing::Free);

  Stability st;
  st.features = {0};
  st.c = 0.5;
  auto ds = encode_violation(enc, st);
  REQUIRE(ds.size() == 2);  // one feature, both signs
  CHECK(ds[0].tag == "stability:x0:+");
  CHECK(ds[1].tag == "stability:x0:-");

  HighConfidence hc;
  hc.delta = 0.98;
  hc.subsets = {{0}};
  auto dh = encode_violation(enc, hc);
  REQUIRE(dh.size() == 1);
  CHECK(dh[0].tag == "high-confidence:{x0}");

  SmallNeighborhood sn;
  sn.epsilon = 1.0;
  sn.c = 0.5;
  sn.sigma = {1.0};
  auto dn = encode_violation(enc, sn);
  REQUIRE(dn.size() == 2);
  CHECK(dn[0].pairing[0] == Pairing::Neighbor);

  // Radius below the integer step ties the feature outright.
  SmallNeighborhood tied = sn;
  tied.epsilon = 0.5;
  auto dt = encode_violation(enc, tied);
  REQUIRE(dt.size() == 2);
  CHECK(dt[0].pairing[0] == Pairing::Tied);
}

TEST_CASE("monotonicity verdicts on one-clause models") {
  VerifyOptions opt;
  LogicEnsemble down = one_clause(-1.0);  // score rises with x0
  LogicEnsemble up = one_clause(1.0);     // score falls past the threshold

  CHECK(verify(down, Monotonicity{0, true}, opt).verdict == Verdict::Verified);
  CHECK(verify(up, Monotonicity{0, false}, opt).verdict == Verdict::Verified);

  VerifyResult r = verify(up, Monotonicity{0, true}, opt);
  REQUIRE(r.verdict == Verdict::Refuted);
  REQUIRE(r.cex.has_value());
  CHECK(witness_violates(up, Monotonicity{0, true}, r.cex->x, r.cex->xprime));
  CHECK(r.cex->x[0] < r.cex->xprime[0]);

  VerifyResult rd = verify(down, Monotonicity{0, false}, opt);
  REQUIRE(rd.verdict == Verdict::Refuted);
  CHECK(witness_violates(down, Monotonicity{0, false}, rd.cex->x, rd.cex->xprime));
}

TEST_CASE("stability thresholds the worst score swing") {
  LogicEnsemble m = one_clause(1.0);
  Stability loose;
  loose.features = {0};
  loose.c = 2.0;
  CHECK(verify(m, loose).verdict == Verdict::Verified);
  Stability exact = loose;
  exact.c = 1.0;  // swing is exactly 1, violation needs strictly more
  CHECK(verify(m, exact).verdict == Verdict::Verified);
  Stability tight = loose;
  tight.c = 0.5;
  VerifyResult r = verify(m, tight);
  REQUIRE(r.verdict == Verdict::Refuted);
  CHECK(witness_violates(m, tight, r.cex->x, r.cex->xprime));
}

TEST_CASE("high confidence needs a reachable benign cell") {
  FeatureSchema s = int_schema_0_9();
  s.features[0].low_cost = true;
  LogicEnsemble m;
  m.schema = s;
  Clause high;  // x0 >= 5 scores 4.0, above logit(0.98) = 3.89
  high.atoms = {{-1.0, 0, -5.0}};
  high.activation = 4.0;
  m.clauses = {high};
  m.round_boundaries = {1};

  HighConfidence hc;
  hc.delta = 0.98;
  hc.subsets = {{0}};
  // Escape only reaches score 0, still classified malicious.
  CHECK(verify(m, hc).verdict == Verdict::Verified);

  Clause low;  // x0 < 5 scores -0.5: now the rewrite flips the label
  low.atoms = {{1.0, 0, 5.0}};
  low.activation = -0.5;
  m.clauses.push_back(low);
  m.round_boundaries = {2};
  VerifyResult r = verify(m, hc);
  REQUIRE(r.verdict == Verdict::Refuted);
  CHECK(witness_violates(m, hc, r.cex->x, r.cex->xprime));
  CHECK(score(m, r.cex->x) >= logit(0.98) - 1e-9);
  CHECK(score(m, r.cex->xprime) < 0.0);

  // Starting confidence out of reach verifies vacuously.
  m.clauses[0].activation = 2.0;
  CHECK(verify(m, hc).verdict == Verdict::Verified);
}

TEST_CASE("max score decrease bounds the drop even without a label flip") {
  FeatureSchema s = int_schema_0_9();
  s.features[0].low_cost = true;
  LogicEnsemble m;
  m.schema = s;
  Clause high;
  high.atoms = {{-1.0, 0, -5.0}};
  high.activation = 4.0;
  Clause low;
  low.atoms = {{1.0, 0, 5.0}};
  low.activation = -0.5;
  m.clauses = {high, low};
  m.round_boundaries = {2};

  MaxScoreDecrease msd;
  msd.delta = 0.98;
  msd.subsets = {{0}};
  VerifyResult r = verify(m, msd);  // drop of 4.5 exceeds logit(0.98)
  REQUIRE(r.verdict == Verdict::Refuted);
  CHECK(witness_violates(m, msd, r.cex->x, r.cex->xprime));

  m.clauses[0].activation = 1.0;  // worst drop now 1.5 < 3.89
  CHECK(verify(m, msd).verdict == Verdict::Verified);
}

TEST_CASE("redundancy keeps each group sufficient on its own") {
  FeatureSchema s;
  for (int j = 0; j < 3; ++j) {
    Feature f;
    f.name = "f" + std::to_string(j);
    f.kind = FeatureKind::Integer;
    f.lower_bound = 0.0;
    f.upper_bound = 9.0;
    s.features.push_back(std::move(f));
  }
  LogicEnsemble m;
  m.schema = s;
  Clause c0;  // f0 >= 3 scores 4.0
  c0.atoms = {{-1.0, 0, -3.0}};
  c0.activation = 4.0;
  m.clauses = {c0};
  m.round_boundaries = {1};

  Redundancy red;
  red.delta = 0.98;
  red.instantiations = {{{0}, {1}}};
  CHECK(verify(m, red).verdict == Verdict::Verified);

  Clause c1;  // f0 < 3 scores -0.5; rewriting f0 while keeping {f1} breaks it
  c1.atoms = {{1.0, 0, 3.0}};
  c1.activation = -0.5;
  m.clauses.push_back(c1);
  m.round_boundaries = {2};
  VerifyResult r = verify(m, red);
  REQUIRE(r.verdict == Verdict::Refuted);
  CHECK(witness_violates(m, red, r.cex->x, r.cex->xprime));
  // The witness only rewrites features inside the union of the instantiation.
  CHECK(r.cex->x[2] == r.cex->xprime[2]);
}

TEST_CASE("small neighborhood bounds local score jumps") {
  FeatureSchema s;
  Feature f;
  f.name = "x0";
  f.kind = FeatureKind::Continuous;
  f.lower_bound = 0.0;
  f.upper_bound = 10.0;
  s.features = {f};
  LogicEnsemble m;
  m.schema = s;
  Clause c;
  c.atoms = {{1.0, 0, 5.0}};
  c.activation = 2.0;
  m.clauses = {c};
  m.round_boundaries = {1};

  SmallNeighborhood sn;
  sn.epsilon = 0.2;
  sn.c = 0.5;
  sn.sigma = {1.0};
  VerifyResult r = verify(m, sn);  // jump of 2.0 across x0=5 within radius 0.2
  REQUIRE(r.verdict == Verdict::Refuted);
  CHECK(witness_violates(m, sn, r.cex->x, r.cex->xprime));
  CHECK(std::abs(r.cex->x[0] - r.cex->xprime[0]) <= 0.2 + 1e-9);

  SmallNeighborhood zero = sn;
  zero.epsilon = 0.0;  // radius zero ties the pair
  CHECK(verify(m, zero).verdict == Verdict::Verified);

  m.clauses[0].activation = 0.05;  // jump below epsilon * c
  CHECK(verify(m, sn).verdict == Verdict::Verified);
}

TEST_CASE("integer small neighborhood respects the step floor") {
  LogicEnsemble m = one_clause(8.0);
  SmallNeighborhood sn;
  sn.epsilon = 0.5;  // radius 0.5 cannot move an integer feature
  sn.c = 0.1;
  sn.sigma = {1.0};
  CHECK(verify(m, sn).verdict == Verdict::Verified);
  sn.epsilon = 1.0;  // radius 1 reaches the adjacent cell
  VerifyResult r = verify(m, sn);
  REQUIRE(r.verdict == Verdict::Refuted);
  CHECK(witness_violates(m, sn, r.cex->x, r.cex->xprime));
  CHECK(std::abs(r.cex->x[0] - r.cex->xprime[0]) <= 1.0 + 1e-9);
}

TEST_CASE("zero timeout reports unknown") {
  LogicEnsemble m = one_clause(1.0);
  VerifyOptions opt;
  opt.timeout_seconds = 0.0;
  VerifyResult r = verify(m, Monotonicity{0, true}, opt);
  CHECK(r.verdict == Verdict::Unknown);
  CHECK(r.reason == "timeout");
}

TEST_CASE("witness_violates implements the pair semantics") {
  LogicEnsemble m = one_clause(1.0);  // F = 1 iff x0 < 5

  SUBCASE("monotonicity wants a drop on the single changed feature") {
    Monotonicity inc{0, true};
    CHECK(witness_violates(m, inc, std::vector<double>{4.0}, std::vector<double>{6.0}));
    CHECK_FALSE(witness_violates(m, inc, std::vector<double>{6.0}, std::vector<double>{4.0}));
    CHECK_FALSE(witness_violates(m, inc, std::vector<double>{4.0}, std::vector<double>{4.0}));
  }
  SUBCASE("stability needs the swing to clear c") {
    Stability st;
    st.features = {0};
    st.c = 0.5;
    CHECK(witness_violates(m, st, std::vector<double>{4.0}, std::vector<double>{6.0}));
    CHECK(witness_violates(m, st, std::vector<double>{6.0}, std::vector<double>{4.0}));
    st.c = 1.0;
    CHECK_FALSE(witness_violates(m, st, std::vector<double>{4.0}, std::vector<double>{6.0}));
  }
  SUBCASE("untouched features must stay tied") {
    FeatureSchema s2 = testutil::small_int_schema(2, 0, 9);
    LogicEnsemble m2;
    m2.schema = s2;
    Clause c;
    c.atoms = {{1.0, 0, 5.0}};
    c.activation = 1.0;
    m2.clauses = {c};
    m2.round_boundaries = {1};
    Monotonicity inc{0, true};
    CHECK_FALSE(witness_violates(m2, inc, std::vector<double>{4.0, 1.0},
                                 std::vector<double>{6.0, 2.0}));
    CHECK(witness_violates(m2, inc, std::vector<double>{4.0, 1.0},
                          std::vector<double>{6.0, 1.0}));
  }
}

TEST_CASE("find_evasion explores only the admissible box") {
  FeatureSchema s;
  Feature f;
  f.name = "x0";
  f.kind = FeatureKind::Continuous;
  f.lower_bound = 0.0;
  f.upper_bound = 10.0;
  s.features = {f};
  LogicEnsemble m;
  m.schema = s;
  Clause neg;
  neg.atoms = {{1.0, 0, 5.0}};
  neg.activation = -1.0;
  Clause pos;
  pos.atoms = {{-1.0, 0, -5.0}};
  pos.activation = 1.0;
  m.clauses = {neg, pos};
  m.round_boundaries = {2};

  AttackSpec wide;
  wide.box = {std::make_pair(0.0, 10.0)};
  AttackResult found = find_evasion(m, wide);
  REQUIRE(found.status == AttackResult::Status::Found);
  CHECK(found.x[0] < 5.0);
  CHECK(score(m, found.x) < 0.0);

  AttackSpec high;
  high.box = {std::make_pair(6.0, 10.0)};
  CHECK(find_evasion(m, high).status == AttackResult::Status::None);

  AttackSpec empty;
  empty.box = {std::make_pair(7.0, 3.0)};  // inverted interval
  CHECK(find_evasion(m, empty).status == AttackResult::Status::None);

  AttackSpec any = high;
  any.require_misclassified = false;  // the positive cell is fine now
  AttackResult r = find_evasion(m, any);
  REQUIRE(r.status == AttackResult::Status::Found);
  CHECK(r.x[0] >= 6.0);
}

TEST_CASE("find_evasion honors predicate constraints") {
  LogicEnsemble m;
  FeatureSchema s;
  Feature f;
  f.name = "x0";
  f.kind = FeatureKind::Continuous;
  f.lower_bound = 0.0;
  f.upper_bound = 10.0;
  s.features = {f};
  m.schema = s;
  Clause neg;
  neg.atoms = {{1.0, 0, 5.0}};
  neg.activation = -1.0;
  Clause pos;
  pos.atoms = {{-1.0, 0, -5.0}};
  pos.activation = 1.0;
  m.clauses = {neg, pos};
  m.round_boundaries = {2};

  // Forbid the x0 < 5 region: the only negative cell becomes unreachable.
  AttackSpec spec;
  spec.box = {std::make_pair(0.0, 10.0)};
  AttackConstraint forbid;
  forbid.terms = {{0, 5.0, false, 1.0}};  // indicator of x0 < 5
  forbid.rel = Relation::LessEq;
  forbid.rhs = 0.0;
  spec.constraints = {forbid};
  CHECK(find_evasion(m, spec).status == AttackResult::Status::None);

  // Require it instead: a witness exists and sits below 5.
  AttackConstraint require = forbid;
  require.rel = Relation::GreaterEq;
  require.rhs = 1.0;
  spec.constraints = {require};
  AttackResult r = find_evasion(m, spec);
  REQUIRE(r.status == AttackResult::Status::Found);
  CHECK(r.x[0] < 5.0);
}

TEST_CASE("random ensembles agree with pair enumeration") {
  testutil::Rng rng(2024);
  VerifyOptions opt;
  opt.timeout_seconds = 60.0;
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    int nf = testutil::rand_int(rng, 1, 3);
    LogicEnsemble m = testutil::random_small_model(rng, nf, 6);
    auto points = testutil::enumerate_points(m.schema);

    std::vector<PropertySpec> props;
    props.push_back(Monotonicity{testutil::rand_int(rng, 0, nf - 1),
                                 testutil::rand_int(rng, 0, 1) == 1});
    Stability st;
    st.features = {testutil::rand_int(rng, 0, nf - 1)};
    st.c = testutil::rand_int(rng, 0, 8) * 0.25;
    props.push_back(st);
    HighConfidence hc;
    hc.delta = 0.98;
    hc.subsets = {{testutil::rand_int(rng, 0, nf - 1)}};
    props.push_back(hc);
    SmallNeighborhood sn;
    sn.epsilon = testutil::rand_int(rng, 0, 2) * 0.75;
    sn.c = testutil::rand_int(rng, 0, 4) * 0.25;
    sn.sigma.assign(nf, 1.0);
    props.push_back(sn);
    if (nf >= 2) {
      Redundancy red;
      red.delta = 0.9;
      red.instantiations = {{{0}, {1}}};
      props.push_back(red);
    }

    for (const PropertySpec& prop : props) {
      VerifyResult got = verify(m, prop, opt);
      REQUIRE(got.verdict != Verdict::Unknown);
      Verdict want = testutil::oracle_verdict(m, prop, points);
      CHECK_MESSAGE(got.verdict == want, "trial=", trial,
                    " property=", property_name(prop));
      if (got.verdict == Verdict::Refuted)
        CHECK(witness_violates(m, prop, got.cex->x, got.cex->xprime));
      ++checked;
    }
  }
  CHECK(checked > 200);
}

TEST_CASE("round partition cuts preserve verdicts on boosted trees") {
  VerifyOptions plain;
  VerifyOptions cuts;
  cuts.encode.assume_round_partitions = true;
  for (int trial = 0; trial < 10; ++trial) {
    Dataset d = testutil::monotone_sum_dataset(80, 3000 + trial, 5);
    LogicEnsemble m;
    m.schema = d.schema;
    BoostConfig cfg;
    cfg.max_depth = 2;
    boost_round(m, d, cfg);
    boost_round(m, d, cfg);
    for (int feat = 0; feat < 2; ++feat) {
      Monotonicity mono{feat, true};
      CHECK(verify(m, mono, plain).verdict == verify(m, mono, cuts).verdict);
      Stability st;
      st.features = {feat};
      st.c = 1.0;
      CHECK(verify(m, st, plain).verdict == verify(m, st, cuts).verdict);
    }
  }
}
