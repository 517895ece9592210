#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "medfilter/study.hpp"

namespace medfilter {

// Analysis-ready data: exposure x, mediator matrix M, outcome y, plus the
// mediator names and their 0-based column positions in the input file so
// reports always speak in original coordinates.
struct Dataset {
  Vector x, y;
  Matrix M;
  std::vector<std::string> mediator_names;
  std::vector<long> input_columns;
};

struct AnalysisConfig {
  std::string input;          // CSV path
  std::string x_column, y_column;
  std::vector<std::string> covariate_columns;
  std::vector<std::string> mediator_columns;  // empty = all remaining columns
  long prefilter_k = 0;                       // 0 = off
  Method method = Method::CMF;
  MethodConfigs method_cfgs;
  std::uint64_t seed = 0;
  std::string out;            // output base path; empty = don't write files
  bool scree_svg = false;
};

struct RankedMediator {
  std::string name;
  long column = 0;   // input file column index
  double rate = 0;   // CMF selection rate; 0/1 decision for filter and HIMA
  bool selected = false;
};

struct Report {
  std::string method;
  std::string version;
  long n_rows = 0;
  long n_mediators_input = 0;     // after name resolution, before prefilter
  long n_mediators_analyzed = 0;  // after prefilter
  std::vector<RankedMediator> ranked;  // rate descending, ties by column
  std::vector<std::string> selected;   // names, in ranked order
  // diagnostics
  double convergence_fraction = 1.0;  // CMF; 1.0 for single-pass methods
  std::vector<std::string> dropped_columns;  // zero-variance mediators set aside
  long decide_errors = 0;
  long n_starts_run = 0;
  long max_sweeps_effective = 0;
  std::vector<long> sweep_histogram;
  std::vector<std::string> messages;
  AnalysisConfig config;  // echo
};

// Replaces x, y and every mediator column by its residual from OLS on
// (intercept, covariates). Zero covariate columns means centering only.
// Throws RankDeficient when (intercept, covariates) is column-rank deficient.
Dataset residualize_covariates(const Dataset& data, const Matrix& covariates);

struct Prefiltered {
  Dataset data;
  std::vector<long> kept;  // positions into the pre-filter mediator list
};

// Keeps the k mediators with the largest |pearson(x,m) * pearson(m,y)|,
// ties broken by ascending position. Requires 1 <= k <= P.
Prefiltered prefilter_topk(const Dataset& data, long k);

// Full analysis: ingest -> validate -> residualize -> prefilter -> method ->
// report. When cfg.out is nonempty writes <out>.report.json, <out>.rates.csv,
// <out>.scree.csv and optionally <out>.scree.svg. Output bytes depend only on
// (input bytes, config, seed); no timestamps.
Report run_analysis(const AnalysisConfig& cfg);

// Deterministic serializations, exposed so determinism is testable without
// touching the filesystem.
std::string report_json(const Report& rep);
std::string scree_svg_text(const std::vector<RankedMediator>& ranked, double cutoff);

struct SimulationRequest {
  std::string condition;   // shipped name; ignored when spec_path set
  std::string spec_path;   // JSON condition spec file
  std::vector<Method> methods;  // empty = filter, cmf, hima
  long reps_override = -1;      // < 0 keeps the condition's n_reps
  std::uint64_t seed = 0;
  std::string out;              // output base path; empty = don't write files
  MethodConfigs method_cfgs;
};

struct MethodTable {
  Method method = Method::Filter;
  ScoreTable scores;
  double mean_runtime_ms = 0;
  std::vector<MethodResult> results;
};

struct SimulationTables {
  SimCondition condition;
  std::uint64_t seed = 0;
  std::vector<MethodTable> methods;
};

// Runs the requested methods over the condition and scores them. When
// req.out is nonempty writes <out>.table.csv and <out>.table.json.
SimulationTables run_simulation(const SimulationRequest& req);

// Condition spec (de)serialization; parse throws ConfigError on malformed
// input and mirrors the eager validation of the CovarianceSpec factories.
SimCondition parse_condition_json(const std::string& text);
std::string condition_json(const SimCondition& cond);
std::string simulation_table_csv(const SimulationTables& tables);
std::string simulation_json(const SimulationTables& tables);

}  // namespace medfilter
