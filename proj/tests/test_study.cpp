#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "medfilter/study.hpp"

using namespace medfilter;

namespace {

MethodResult result(long rep, std::vector<int> selected, bool failed = false) {
  MethodResult r;
  r.method = Method::Filter;
  r.replicate = rep;
  r.selected = std::move(selected);
  r.failed = failed;
  if (failed) r.error = "synthetic failure";
  return r;
}

}  // namespace

TEST_CASE("method names round-trip") {
  CHECK(method_name(Method::Filter) == "filter");
  CHECK(method_name(Method::CMF) == "cmf");
  CHECK(method_name(Method::HIMA) == "hima");
  CHECK(method_from_name("filter") == Method::Filter);
  CHECK(method_from_name("cmf") == Method::CMF);
  CHECK(method_from_name("hima") == Method::HIMA);
  try {
    method_from_name("sem");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("filter") != std::string::npos);
  }
}

TEST_CASE("score counts a single replicate correctly") {
  ScoreTable t = score({result(0, {1, 2})}, {1}, 10);
  REQUIRE(t.power.size() == 1);
  CHECK(t.power[0] == 1.0);
  CHECK(t.fpr == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
  CHECK(t.ppv == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(t.n_scored == 1);
  CHECK(t.n_failed == 0);
  REQUIRE(t.selection_rate.size() == 10);
  CHECK(t.selection_rate[1] == 1.0);
  CHECK(t.selection_rate[2] == 1.0);
  CHECK(t.selection_rate[0] == 0.0);
}

TEST_CASE("perfect selection scores power 1, fpr 0, ppv 1") {
  std::vector<MethodResult> rs = {result(0, {0, 3}), result(1, {0, 3}),
                                  result(2, {0, 3})};
  ScoreTable t = score(rs, {0, 3}, 6);
  CHECK(t.power == std::vector<double>{1.0, 1.0});
  CHECK(t.fpr == 0.0);
  CHECK(t.ppv == 1.0);
}

TEST_CASE("ppv pools counts rather than averaging per-replicate ratios") {
  // Rep 1: TP=1 FP=0 (ppv 1); rep 2: TP=1 FP=2 (ppv 1/3).
  std::vector<MethodResult> rs = {result(0, {1}), result(1, {1, 2, 3})};
  ScoreTable t = score(rs, {1}, 10);
  CHECK(t.ppv == doctest::Approx(0.5).epsilon(1e-12));       // 2 / 4 pooled
  CHECK(t.ppv != doctest::Approx(2.0 / 3.0).epsilon(1e-6));  // not the mean
  CHECK(t.fpr == doctest::Approx((0.0 / 9 + 2.0 / 9) / 2).epsilon(1e-12));
}

TEST_CASE("score is invariant to replicate order") {
  std::vector<MethodResult> rs = {result(0, {1}), result(1, {1, 2, 3}),
                                  result(2, {}), result(3, {0, 1})};
  ScoreTable a = score(rs, {1}, 5);
  std::reverse(rs.begin(), rs.end());
  ScoreTable b = score(rs, {1}, 5);
  CHECK(a.power == b.power);
  CHECK(a.fpr == b.fpr);
  CHECK(a.ppv == b.ppv);
  CHECK(a.selection_rate == b.selection_rate);
}

TEST_CASE("failed replicates are excluded but counted") {
  std::vector<MethodResult> rs = {result(0, {1}), result(1, {}, true),
                                  result(2, {1, 4})};
  ScoreTable t = score(rs, {1}, 6);
  CHECK(t.n_scored == 2);
  CHECK(t.n_failed == 1);
  CHECK(t.power[0] == 1.0);
  CHECK(t.fpr == doctest::Approx((0.0 + 1.0 / 5.0) / 2).epsilon(1e-12));
}

TEST_CASE("scoring nothing raises EmptyResults") {
  CHECK_THROWS_AS(score({}, {0}, 4), EmptyResults);
  CHECK_THROWS_AS(score({result(0, {}, true)}, {0}, 4), EmptyResults);
}

TEST_CASE("no selections anywhere uses the documented ppv convention") {
  std::vector<MethodResult> rs = {result(0, {}), result(1, {})};
  ScoreTable t = score(rs, {2}, 5);
  CHECK(t.power[0] == 0.0);
  CHECK(t.fpr == 0.0);
  CHECK(t.ppv == 1.0);
}

TEST_CASE("empty truth sets score without division by zero") {
  std::vector<MethodResult> rs = {result(0, {1})};
  ScoreTable t = score(rs, {}, 4);
  CHECK(t.power.empty());
  CHECK(t.fpr == doctest::Approx(0.25));
  CHECK(t.ppv == 0.0);  // one selection, zero true positives
}

TEST_CASE("score validates the truth set") {
  CHECK_THROWS_AS(score({result(0, {1})}, {7}, 4), ConfigError);
  CHECK_THROWS_AS(score({result(0, {1})}, {-1}, 4), ConfigError);
}

TEST_CASE("zero replicates produce an empty result list") {
  SimCondition cond = shipped_condition("suppression");
  cond.n_reps = 0;
  MethodConfigs cfgs;
  CHECK(run_condition(cond, {Method::Filter}, cfgs, 1).empty());
}

TEST_CASE("a single filter replicate recovers the first suppression mediator") {
  SimCondition cond = shipped_condition("suppression");
  cond.n_reps = 1;
  MethodConfigs cfgs;
  auto rs = run_condition(cond, {Method::Filter}, cfgs, 7);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].method == Method::Filter);
  CHECK_FALSE(rs[0].failed);
  CHECK(rs[0].selected == std::vector<int>{0});
  CHECK(rs[0].n_used >= 400);
  CHECK(rs[0].n_used <= 600);
}

TEST_CASE("runs are deterministic in the seed") {
  SimCondition cond = shipped_condition("suppression");
  cond.n_reps = 3;
  MethodConfigs cfgs;
  cfgs.cmf.n_starts = 20;  // keep it quick
  auto a = run_condition(cond, {Method::Filter, Method::CMF}, cfgs, 99);
  auto b = run_condition(cond, {Method::Filter, Method::CMF}, cfgs, 99);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].method == b[i].method);
    CHECK(a[i].replicate == b[i].replicate);
    CHECK(a[i].selected == b[i].selected);
    CHECK(a[i].n_used == b[i].n_used);
    CHECK(a[i].failed == b[i].failed);
  }
  auto c = run_condition(cond, {Method::Filter, Method::CMF}, cfgs, 100);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].n_used != c[i].n_used || a[i].selected != c[i].selected)
      any_diff = true;
  CHECK(any_diff);  // a different seed draws different data
}

TEST_CASE("per-method streams are isolated from the method list") {
  SimCondition cond = shipped_condition("suppression");
  cond.n_reps = 2;
  MethodConfigs cfgs;
  cfgs.cmf.n_starts = 10;
  auto only = run_condition(cond, {Method::Filter}, cfgs, 5);
  auto both = run_condition(cond, {Method::Filter, Method::CMF}, cfgs, 5);
  std::vector<MethodResult> filter_rows;
  for (const auto& r : both)
    if (r.method == Method::Filter) filter_rows.push_back(r);
  REQUIRE(only.size() == filter_rows.size());
  for (std::size_t i = 0; i < only.size(); ++i) {
    CHECK(only[i].selected == filter_rows[i].selected);
    CHECK(only[i].n_used == filter_rows[i].n_used);
  }
}

TEST_CASE("data generation failures are recorded per replicate") {
  SimCondition cond = shipped_condition("suppression");
  cond.n_reps = 2;
  cond.n_min = cond.n_max = 4;  // exact sampling needs n > dim + 1 = 5
  MethodConfigs cfgs;
  auto rs = run_condition(cond, {Method::Filter, Method::HIMA}, cfgs, 1);
  REQUIRE(rs.size() == 4);
  for (const auto& r : rs) {
    CHECK(r.failed);
    CHECK(r.selected.empty());
    CHECK(r.error.find("data generation") != std::string::npos);
  }
  ScoreTable t{};
  CHECK_THROWS_AS(t = score(rs, {0}, 3), EmptyResults);
}

TEST_CASE("sample sizes honor the configured range") {
  SimCondition cond = shipped_condition("suppression");
  cond.n_reps = 6;
  cond.n_min = 410;
  cond.n_max = 450;
  MethodConfigs cfgs;
  auto rs = run_condition(cond, {Method::Filter}, cfgs, 3);
  std::set<long> sizes;
  for (const auto& r : rs) {
    CHECK(r.n_used >= 410);
    CHECK(r.n_used <= 450);
    sizes.insert(r.n_used);
  }
  CHECK(sizes.size() >= 2);  // the draw actually varies
}

TEST_CASE("run_condition validates its inputs") {
  SimCondition cond = shipped_condition("suppression");
  MethodConfigs cfgs;
  CHECK_THROWS_AS(run_condition(cond, {}, cfgs, 1), ConfigError);
  cond.n_reps = -1;
  CHECK_THROWS_AS(run_condition(cond, {Method::Filter}, cfgs, 1), ConfigError);
  cond.n_reps = 1;
  cond.n_min = 500;
  cond.n_max = 400;
  CHECK_THROWS_AS(run_condition(cond, {Method::Filter}, cfgs, 1), ConfigError);
}
