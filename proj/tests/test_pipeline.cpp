#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "medfilter/csv.hpp"
#include "medfilter/pipeline.hpp"
#include "medfilter/simgen.hpp"

using namespace medfilter;
namespace fs = std::filesystem;

namespace {

const std::string kDataDir = MEDFILTER_DATA_DIR;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / "medfilter_test_pipeline";
    fs::create_directories(path);
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Dataset make_dataset(long n, long P, RngStream& rng) {
  Dataset d;
  d.x = Vector(n);
  d.y = Vector(n);
  d.M = Matrix(n, P);
  for (long i = 0; i < n; ++i) d.x[i] = rng.normal();
  for (long p = 0; p < P; ++p)
    for (long i = 0; i < n; ++i) d.M(i, p) = rng.normal();
  for (long i = 0; i < n; ++i) d.y[i] = rng.normal();
  for (long p = 0; p < P; ++p) {
    d.mediator_names.push_back("m" + std::to_string(p + 1));
    d.input_columns.push_back(p + 1);
  }
  return d;
}

// Suppression-fixture CSV for end-to-end analysis runs.
std::string write_suppression_csv(const TempDir& tmp, long n,
                                  std::uint64_t seed) {
  RngStream rng(seed);
  Matrix s = exact_correlation_sample(fixture_covariance(FixtureName::Suppression),
                                      n, rng);
  std::string path = tmp.file("suppression_" + std::to_string(seed) + ".csv");
  write_csv(path, {"x", "m1", "m2", "y"}, s);
  return path;
}

}  // namespace

TEST_CASE("residualizing with no covariates centers every column") {
  RngStream rng(81);
  Dataset d = make_dataset(30, 2, rng);
  d.x.array() += 5.0;
  Dataset r = residualize_covariates(d, Matrix(30, 0));
  CHECK(std::fabs(sample_mean(r.x)) <= 1e-10);
  CHECK(std::fabs(sample_mean(r.y)) <= 1e-10);
  CHECK((r.x.array() - (d.x.array() - d.x.mean())).abs().maxCoeff() <= 1e-10);
}

TEST_CASE("residualized columns are orthogonal to the covariates") {
  RngStream rng(82);
  Dataset d = make_dataset(40, 3, rng);
  Matrix C(40, 2);
  for (long i = 0; i < 40; ++i) {
    C(i, 0) = rng.normal();
    C(i, 1) = rng.uniform01();
  }
  Dataset r = residualize_covariates(d, C);
  for (long j = 0; j < 2; ++j) {
    CHECK(std::fabs(C.col(j).dot(r.x)) <= 1e-8 * 40);
    CHECK(std::fabs(C.col(j).dot(r.y)) <= 1e-8 * 40);
    for (long p = 0; p < 3; ++p)
      CHECK(std::fabs(C.col(j).dot(r.M.col(p))) <= 1e-8 * 40);
  }
}

TEST_CASE("collinear covariates are rejected") {
  RngStream rng(83);
  Dataset d = make_dataset(20, 1, rng);
  Matrix C(20, 2);
  C.col(0).setConstant(1.0);  // collinear with the implicit intercept
  for (long i = 0; i < 20; ++i) C(i, 1) = rng.normal();
  CHECK_THROWS_AS(residualize_covariates(d, C), RankDeficient);
}

TEST_CASE("prefilter keeps the top correlation products") {
  // Hand-built 5-mediator dataset with a known product ordering.
  const long n = 200;
  RngStream rng(84);
  Dataset d = make_dataset(n, 5, rng);
  Vector base(n);
  for (long i = 0; i < n; ++i) base[i] = rng.normal();
  d.x = base;
  // Products |corr(x,m)*corr(m,y)|: m1 strong-strong, m2 strong-weak,
  // m3 weak-weak, m4 zero-x, m5 noise.
  for (long i = 0; i < n; ++i) {
    d.M(i, 0) = 0.9 * base[i] + 0.3 * rng.normal();
    d.M(i, 1) = 0.8 * base[i] + 0.6 * rng.normal();
    d.M(i, 2) = 0.3 * base[i] + rng.normal();
    d.M(i, 3) = rng.normal();
    d.M(i, 4) = rng.normal();
    d.y[i] = 1.2 * d.M(i, 0) + 0.4 * d.M(i, 1) + 0.2 * d.M(i, 2) + rng.normal();
  }

  std::vector<std::pair<double, long>> products;
  for (long p = 0; p < 5; ++p)
    products.push_back(
        {std::fabs(pearson(d.x, d.M.col(p)) * pearson(d.M.col(p), d.y)), p});
  std::stable_sort(products.begin(), products.end(),
                   [](auto a, auto b) { return a.first > b.first; });

  Prefiltered pf = prefilter_topk(d, 2);
  std::set<long> expect = {products[0].second, products[1].second};
  std::set<long> got(pf.kept.begin(), pf.kept.end());
  CHECK(got == expect);
  REQUIRE(pf.data.M.cols() == 2);
  // Kept columns preserve input order and original naming.
  CHECK(std::is_sorted(pf.kept.begin(), pf.kept.end()));
  for (std::size_t i = 0; i < pf.kept.size(); ++i) {
    CHECK(pf.data.mediator_names[i] ==
          d.mediator_names[static_cast<std::size_t>(pf.kept[i])]);
    CHECK(pf.data.input_columns[i] ==
          d.input_columns[static_cast<std::size_t>(pf.kept[i])]);
  }
}

TEST_CASE("prefilter with k = P is the identity") {
  RngStream rng(85);
  Dataset d = make_dataset(50, 4, rng);
  Prefiltered pf = prefilter_topk(d, 4);
  CHECK(pf.kept == std::vector<long>{0, 1, 2, 3});
  CHECK((pf.data.M - d.M).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("prefilter validates k") {
  RngStream rng(86);
  Dataset d = make_dataset(30, 3, rng);
  CHECK_THROWS_AS(prefilter_topk(d, 0), ConfigError);
  CHECK_THROWS_AS(prefilter_topk(d, 4), ConfigError);
}

TEST_CASE("analysis pipeline finds both suppression mediators") {
  TempDir tmp;
  std::string input = write_suppression_csv(tmp, 300, 87);
  AnalysisConfig cfg;
  cfg.input = input;
  cfg.x_column = "x";
  cfg.y_column = "y";
  cfg.method = Method::CMF;
  cfg.method_cfgs.cmf.n_starts = 100;
  cfg.seed = 12;
  Report rep = run_analysis(cfg);
  CHECK(rep.method == "cmf");
  CHECK(rep.n_rows == 300);
  CHECK(rep.n_mediators_input == 2);
  CHECK(rep.n_mediators_analyzed == 2);
  CHECK(rep.selected == std::vector<std::string>{"m1", "m2"});
  REQUIRE(rep.ranked.size() == 2);
  CHECK(rep.ranked[0].rate >= rep.ranked[1].rate);
  CHECK(rep.n_starts_run == 100);
}

TEST_CASE("reports are byte-identical across reruns") {
  TempDir tmp;
  std::string input = write_suppression_csv(tmp, 250, 88);
  AnalysisConfig cfg;
  cfg.input = input;
  cfg.x_column = "x";
  cfg.y_column = "y";
  cfg.method_cfgs.cmf.n_starts = 60;
  cfg.seed = 4;
  std::string a = report_json(run_analysis(cfg));
  std::string b = report_json(run_analysis(cfg));
  CHECK(a == b);
  cfg.method_cfgs.cmf.threads = 3;
  std::string c = report_json(run_analysis(cfg));
  CHECK(a == c);
}

TEST_CASE("analysis writes the report, rates and scree files") {
  TempDir tmp;
  std::string input = write_suppression_csv(tmp, 200, 89);
  AnalysisConfig cfg;
  cfg.input = input;
  cfg.x_column = "x";
  cfg.y_column = "y";
  cfg.method_cfgs.cmf.n_starts = 40;
  cfg.seed = 2;
  cfg.out = tmp.file("run1");
  cfg.scree_svg = true;
  Report rep = run_analysis(cfg);
  CHECK(fs::exists(tmp.file("run1.report.json")));
  CHECK(fs::exists(tmp.file("run1.rates.csv")));
  CHECK(fs::exists(tmp.file("run1.scree.csv")));
  CHECK(fs::exists(tmp.file("run1.scree.svg")));
  CHECK(slurp(tmp.file("run1.report.json")) == report_json(rep));

  // Scree rows are sorted by rate descending.
  CsvTable scree = read_csv(tmp.file("run1.scree.csv"));
  for (long i = 1; i < scree.values.rows(); ++i)
    CHECK(scree.values(i, 1) <= scree.values(i - 1, 1));

  // The SVG plots exactly the ranked points.
  std::string svg = slurp(tmp.file("run1.scree.svg"));
  CHECK(svg.find("<svg") != std::string::npos);
  std::size_t circles = 0;
  for (std::size_t at = svg.find("<circle"); at != std::string::npos;
       at = svg.find("<circle", at + 1))
    ++circles;
  CHECK(circles == rep.ranked.size());
}

TEST_CASE("column roles are validated with clear messages") {
  TempDir tmp;
  std::string input = write_suppression_csv(tmp, 150, 90);
  AnalysisConfig cfg;
  cfg.input = input;
  cfg.x_column = "x";
  cfg.y_column = "nope";
  try {
    run_analysis(cfg);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("nope") != std::string::npos);
  }

  cfg.y_column = "y";
  cfg.covariate_columns = {"m1"};
  cfg.mediator_columns = {"m1", "m2"};
  CHECK_THROWS_AS(run_analysis(cfg), ConfigError);
}

TEST_CASE("a covariate equal to x surfaces as a zero-variance error") {
  TempDir tmp;
  std::string input = write_suppression_csv(tmp, 100, 91);
  AnalysisConfig cfg;
  cfg.input = input;
  cfg.x_column = "x";
  cfg.y_column = "y";
  cfg.covariate_columns = {"x"};
  CHECK_THROWS_AS(run_analysis(cfg), ConfigError);  // x used twice

  // Duplicate the x column under another name to rule out the role check.
  CsvTable t = read_csv(input);
  Matrix wide(t.values.rows(), 5);
  wide << t.values, t.values.col(0);
  std::string dup = tmp.file("dup_cov.csv");
  write_csv(dup, {"x", "m1", "m2", "y", "xcopy"}, wide);
  cfg.input = dup;
  cfg.covariate_columns = {"xcopy"};
  cfg.mediator_columns = {"m1", "m2"};
  CHECK_THROWS_AS(run_analysis(cfg), ZeroVarianceColumn);
}

TEST_CASE("non-finite cells are reported with their location") {
  TempDir tmp;
  std::string path = tmp.file("nonfinite.csv");
  std::ofstream(path) << "x,m1,y\n1,2,3\n4,inf,6\n7,8,9\n2,3,4\n";
  AnalysisConfig cfg;
  cfg.input = path;
  cfg.x_column = "x";
  cfg.y_column = "y";
  try {
    run_analysis(cfg);
    FAIL("expected NonFiniteInput");
  } catch (const NonFiniteInput& e) {
    std::string msg = e.what();
    CHECK(msg.find("m1") != std::string::npos);
    CHECK(msg.find("3") != std::string::npos);  // data row 2 = file row 3
  }
}

TEST_CASE("prefilter integrates with the analysis pipeline") {
  TempDir tmp;
  std::string input = write_suppression_csv(tmp, 200, 92);
  AnalysisConfig cfg;
  cfg.input = input;
  cfg.x_column = "x";
  cfg.y_column = "y";
  cfg.prefilter_k = 1;
  cfg.method = Method::Filter;
  Report rep = run_analysis(cfg);
  CHECK(rep.n_mediators_input == 2);
  CHECK(rep.n_mediators_analyzed == 1);
  REQUIRE(rep.ranked.size() == 1);
  // m1 has the larger |corr(x,m)*corr(m,y)| product on suppression data
  // (m2's correlation with y is exactly zero).
  CHECK(rep.ranked[0].name == "m1");
  CHECK(rep.ranked[0].column == 1);
}

TEST_CASE("condition specs round-trip through JSON") {
  for (const auto& name : shipped_condition_names()) {
    SimCondition orig = shipped_condition(name);
    SimCondition back = parse_condition_json(condition_json(orig));
    CHECK(back.name == orig.name);
    CHECK(back.n_min == orig.n_min);
    CHECK(back.n_max == orig.n_max);
    CHECK(back.n_reps == orig.n_reps);
    CHECK(back.true_mediators == orig.true_mediators);
    CHECK(back.exact_correlation == orig.exact_correlation);
    CHECK((back.cov.dense() - orig.cov.dense()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("shipped condition files match the built-in definitions") {
  for (const auto& name : shipped_condition_names()) {
    SimCondition fromfile =
        parse_condition_json(slurp(kDataDir + "/condition_" + name + ".json"));
    SimCondition builtin = shipped_condition(name);
    CHECK(fromfile.name == builtin.name);
    CHECK(fromfile.n_reps == builtin.n_reps);
    CHECK(fromfile.true_mediators == builtin.true_mediators);
    CHECK((fromfile.cov.dense() - builtin.cov.dense()).cwiseAbs().maxCoeff() <=
          1e-12);
  }
}

TEST_CASE("malformed condition specs are rejected") {
  CHECK_THROWS_AS(parse_condition_json("not json"), ConfigError);
  CHECK_THROWS_AS(parse_condition_json("{\"covariance\": {\"kind\": \"bogus\"}}"),
                  ConfigError);
  // Truth indices must stay inside the mediator range.
  SimCondition c = shipped_condition("suppression");
  c.true_mediators = {5};
  CHECK_THROWS_AS(parse_condition_json(condition_json(c)), ConfigError);
}

TEST_CASE("simulation runs score and serialize") {
  SimulationRequest req;
  req.condition = "suppression";
  req.methods = {Method::Filter};
  req.reps_override = 3;
  req.seed = 31;
  SimulationTables tables = run_simulation(req);
  REQUIRE(tables.methods.size() == 1);
  const MethodTable& mt = tables.methods[0];
  CHECK(mt.method == Method::Filter);
  CHECK(mt.scores.n_scored == 3);
  REQUIRE(mt.scores.power.size() == 2);
  CHECK(mt.scores.power[0] == 1.0);  // the filter finds M1 every time
  CHECK(mt.scores.power[1] == 0.0);  // and never the suppressed M2
  CHECK(mt.results.size() == 3);

  std::string csv = simulation_table_csv(tables);
  CHECK(csv.find("method") != std::string::npos);
  CHECK(csv.find("filter") != std::string::npos);
  std::string js = simulation_json(tables);
  CHECK(js.find("\"condition\"") != std::string::npos);
  CHECK(js.find("\"replicates\"") != std::string::npos);
}

TEST_CASE("simulation output files are written and reproducible") {
  TempDir tmp;
  SimulationRequest req;
  req.condition = "suppression";
  req.methods = {Method::Filter};
  req.reps_override = 2;
  req.seed = 8;
  req.out = tmp.file("sim");
  run_simulation(req);
  REQUIRE(fs::exists(tmp.file("sim.table.csv")));
  REQUIRE(fs::exists(tmp.file("sim.table.json")));
  std::string csv1 = slurp(tmp.file("sim.table.csv"));
  run_simulation(req);
  CHECK(slurp(tmp.file("sim.table.csv")) == csv1);
}

TEST_CASE("simulation requests load spec files and reject unknowns") {
  TempDir tmp;
  SimulationRequest req;
  req.condition = "no-such-condition";
  CHECK_THROWS_AS(run_simulation(req), ConfigError);

  SimCondition c = shipped_condition("suppression");
  c.n_reps = 2;
  c.name = "custom";
  std::string spec = tmp.file("custom.json");
  std::ofstream(spec) << condition_json(c);
  req.condition.clear();
  req.spec_path = spec;
  req.methods = {Method::Filter};
  SimulationTables tables = run_simulation(req);
  CHECK(tables.condition.name == "custom");
  CHECK(tables.methods[0].results.size() == 2);
}

TEST_CASE("scree svg text renders the ranked points") {
  std::vector<RankedMediator> ranked = {
      {"a", 1, 0.9, true}, {"b", 2, 0.6, true}, {"c", 3, 0.1, false}};
  std::string svg = scree_svg_text(ranked, 0.5);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);  // cutoff line
  std::size_t circles = 0;
  for (std::size_t at = svg.find("<circle"); at != std::string::npos;
       at = svg.find("<circle", at + 1))
    ++circles;
  CHECK(circles == 3);
}
