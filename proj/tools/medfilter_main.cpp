// medfilter: selection of candidate mediators between an exposure and an
// outcome. `analyze` runs the pipeline on a CSV; `simulate` replicates the
// shipped simulation conditions or a custom JSON spec.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "medfilter/pipeline.hpp"
#include "medfilter/version.hpp"

namespace mf = medfilter;
using json = nlohmann::json;

namespace {

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mf::IoError("cannot open config file '" + path + "'");
  try {
    json j;
    in >> j;
    if (!j.is_object()) throw mf::ConfigError("config file must hold a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw mf::ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

// Config-file values fill any field the command line left untouched.
template <typename T>
void fill(const json& j, const char* key, T& slot) {
  if (!j.is_object()) return;
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    slot = it->get<T>();
  } catch (const json::exception&) {
    throw mf::ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

json section(const json& j, const char* key) {
  if (!j.is_object()) return json();
  auto it = j.find(key);
  return it == j.end() ? json() : *it;
}

void fill_method_cfgs(const json& cfg, mf::MethodConfigs& mc) {
  json jc = section(cfg, "cmf");
  if (jc.is_object()) {
    std::string kind;
    fill(jc, "decision", kind);
    if (!kind.empty()) mc.cmf.decision.kind = mf::decision_kind_from_name(kind);
    fill(jc, "alpha_level", mc.cmf.decision.alpha_level);
    fill(jc, "starts", mc.cmf.n_starts);
    fill(jc, "max_sweeps", mc.cmf.max_sweeps);
    fill(jc, "p_start", mc.cmf.p_start);
    fill(jc, "cutoff", mc.cmf.cutoff);
    fill(jc, "stable_sweeps", mc.cmf.stable_sweeps);
    if (auto it = jc.find("feature_sampling"); it != jc.end() && !it->is_null()) {
      if (!it->is_boolean())
        throw mf::ConfigError("config field 'feature_sampling' must be boolean or null");
      mc.cmf.feature_sampling = it->get<bool>();
    }
  }
  json jf = section(cfg, "filter");
  if (jf.is_object()) {
    std::string kind;
    fill(jf, "decision", kind);
    if (!kind.empty()) mc.filter_spec.kind = mf::decision_kind_from_name(kind);
    fill(jf, "alpha_level", mc.filter_spec.alpha_level);
  }
  json jh = section(cfg, "hima");
  if (jh.is_object()) {
    fill(jh, "screen_count", mc.hima.screen_count);
    fill(jh, "alpha_level", mc.hima.alpha_level);
    fill(jh, "cv_folds", mc.hima.cv_folds);
    fill(jh, "lambda_grid", mc.hima.lambda_grid);
  }
}

long resolve_threads(const CLI::Option* flag, long flag_value, const json& cfg) {
  if (flag->count() > 0) return flag_value;
  if (const char* env = std::getenv("MEDFILTER_THREADS")) {
    try {
      return std::stol(env);
    } catch (const std::exception&) {
      throw mf::ConfigError("MEDFILTER_THREADS is not an integer: '" +
                            std::string(env) + "'");
    }
  }
  long t = flag_value;
  fill(cfg, "threads", t);
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"medfilter: coordinate-wise mediation filtering"};
  app.set_version_flag("--version", std::string(mf::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON config file; command-line flags take precedence");
  long threads = 1;
  auto* threads_opt =
      app.add_option("--threads", threads,
                     "worker threads (0 = all hardware threads); also "
                     "settable via MEDFILTER_THREADS");

  // analyze
  auto* an = app.add_subcommand("analyze", "run the selection pipeline on a CSV");
  mf::AnalysisConfig acfg;
  std::string method_name_arg = "cmf";
  double alpha_level = 0.1;
  auto* an_input = an->add_option("--input", acfg.input, "input CSV path");
  auto* an_x = an->add_option("--x", acfg.x_column, "exposure column name");
  auto* an_y = an->add_option("--y", acfg.y_column, "outcome column name");
  auto* an_cov = an->add_option("--covariates", acfg.covariate_columns,
                                "covariate column names (comma separated)")
                     ->delimiter(',');
  auto* an_med = an->add_option("--mediators", acfg.mediator_columns,
                                "mediator column names (default: all remaining)")
                     ->delimiter(',');
  auto* an_k = an->add_option("--prefilter-k", acfg.prefilter_k,
                              "keep the k mediators with the largest "
                              "|corr(x,m)*corr(m,y)| before analysis (0 = off)");
  auto* an_method = an->add_option("--method", method_name_arg, "cmf | filter | hima")
                        ->check(CLI::IsMember({"cmf", "filter", "hima"}));
  auto* an_starts =
      an->add_option("--starts", acfg.method_cfgs.cmf.n_starts, "random starts");
  auto* an_sweeps = an->add_option("--max-sweeps", acfg.method_cfgs.cmf.max_sweeps,
                                   "sweep budget per start");
  auto* an_pstart = an->add_option("--p-start", acfg.method_cfgs.cmf.p_start,
                                   "per-coordinate start inclusion probability");
  auto* an_cutoff = an->add_option("--cutoff", acfg.method_cfgs.cmf.cutoff,
                                   "selection-rate cutoff (inclusive)");
  auto* an_alpha = an->add_option("--alpha-level", alpha_level,
                                  "significance level for the decision rule");
  auto* an_seed = an->add_option("--seed", acfg.seed, "random seed");
  auto* an_svg = an->add_flag("--scree-svg", acfg.scree_svg,
                              "also emit a static scree plot as SVG");
  auto* an_out = an->add_option(
      "--out", acfg.out, "output base path (writes <out>.report.json, "
                         "<out>.rates.csv, <out>.scree.csv)");

  // simulate
  auto* si = app.add_subcommand("simulate", "replicate a simulation condition");
  mf::SimulationRequest req;
  std::vector<std::string> method_names;
  long reps = -1;
  auto* si_name = si->add_option("condition", req.condition,
                                 "shipped condition name (see --help-conditions)");
  auto* si_spec = si->add_option("--spec", req.spec_path, "JSON condition spec file");
  auto* si_methods = si->add_option("--methods", method_names,
                                    "methods to run (default: filter,cmf,hima)")
                         ->delimiter(',')
                         ->check(CLI::IsMember({"filter", "cmf", "hima"}));
  auto* si_reps = si->add_option("--reps", reps, "replicate count override");
  auto* si_seed = si->add_option("--seed", req.seed, "random seed");
  auto* si_out = si->add_option(
      "--out", req.out, "output base path (writes <out>.table.csv and "
                        "<out>.table.json); default prints the table");
  bool list_conditions = false;
  si->add_flag("--help-conditions", list_conditions, "list shipped condition names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    json cfg;
    if (!config_path.empty()) cfg = load_config_file(config_path);
    const long nthreads = resolve_threads(threads_opt, threads, cfg);

    if (*an) {
      json ja = section(cfg, "analyze");
      if (an_input->count() == 0) fill(ja, "input", acfg.input);
      if (an_x->count() == 0) fill(ja, "x", acfg.x_column);
      if (an_y->count() == 0) fill(ja, "y", acfg.y_column);
      if (an_cov->count() == 0) fill(ja, "covariates", acfg.covariate_columns);
      if (an_med->count() == 0) fill(ja, "mediators", acfg.mediator_columns);
      if (an_k->count() == 0) fill(ja, "prefilter_k", acfg.prefilter_k);
      if (an_method->count() == 0) fill(ja, "method", method_name_arg);
      if (an_seed->count() == 0) fill(ja, "seed", acfg.seed);
      if (an_out->count() == 0) fill(ja, "out", acfg.out);
      if (an_svg->count() == 0) fill(ja, "scree_svg", acfg.scree_svg);

      // Parse already wrote flag values; config fills in, flags win back.
      const mf::CmfConfig flag_cmf = acfg.method_cfgs.cmf;
      fill_method_cfgs(cfg, acfg.method_cfgs);
      if (an_starts->count()) acfg.method_cfgs.cmf.n_starts = flag_cmf.n_starts;
      if (an_sweeps->count()) acfg.method_cfgs.cmf.max_sweeps = flag_cmf.max_sweeps;
      if (an_pstart->count()) acfg.method_cfgs.cmf.p_start = flag_cmf.p_start;
      if (an_cutoff->count()) acfg.method_cfgs.cmf.cutoff = flag_cmf.cutoff;
      if (an_alpha->count()) {
        acfg.method_cfgs.cmf.decision.alpha_level = alpha_level;
        acfg.method_cfgs.filter_spec.alpha_level = alpha_level;
        acfg.method_cfgs.hima.alpha_level = alpha_level;
      }
      acfg.method = mf::method_from_name(method_name_arg);
      acfg.method_cfgs.cmf.threads = nthreads;

      mf::Report rep = mf::run_analysis(acfg);
      std::cout << "method " << rep.method << ": analyzed "
                << rep.n_mediators_analyzed << " of " << rep.n_mediators_input
                << " mediators over " << rep.n_rows << " rows\n";
      std::cout << "selected " << rep.selected.size() << " mediator(s)\n";
      for (const auto& rm : rep.ranked) {
        if (!rm.selected) continue;
        std::cout << "  " << rm.rate << "  " << rm.name << "\n";
      }
      if (!acfg.out.empty())
        std::cout << "report written to " << acfg.out << ".report.json\n";
      return 0;
    }

    if (*si) {
      if (list_conditions) {
        for (const auto& n : mf::shipped_condition_names()) std::cout << n << "\n";
        return 0;
      }
      json js = section(cfg, "simulate");
      if (si_name->count() == 0) fill(js, "condition", req.condition);
      if (si_spec->count() == 0) fill(js, "spec", req.spec_path);
      if (si_methods->count() == 0) fill(js, "methods", method_names);
      if (si_reps->count() == 0) fill(js, "reps", reps);
      if (si_seed->count() == 0) fill(js, "seed", req.seed);
      if (si_out->count() == 0) fill(js, "out", req.out);

      fill_method_cfgs(cfg, req.method_cfgs);
      req.method_cfgs.cmf.threads = nthreads;
      req.reps_override = reps;
      for (const auto& m : method_names)
        req.methods.push_back(mf::method_from_name(m));

      mf::SimulationTables tables = mf::run_simulation(req);
      if (req.out.empty()) {
        std::cout << mf::simulation_table_csv(tables);
      } else {
        std::cout << "tables written to " << req.out << ".table.csv and "
                  << req.out << ".table.json\n";
      }
      return 0;
    }
  } catch (const mf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == mf::ErrorKind::Config ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
