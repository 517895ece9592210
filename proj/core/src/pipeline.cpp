#include "medfilter/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "medfilter/csv.hpp"
#include "medfilter/errors.hpp"
#include "medfilter/version.hpp"

namespace medfilter {

using json = nlohmann::ordered_json;

namespace {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure on '" + path + "'");
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failure on '" + path + "'");
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (long r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (long c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (long i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Matrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    throw ConfigError(where + ": expected a nonempty array of rows");
  const long rows = static_cast<long>(j.size());
  if (!j[0].is_array()) throw ConfigError(where + ": rows must be arrays");
  const long cols = static_cast<long>(j[0].size());
  Matrix m(rows, cols);
  for (long r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<long>(row.size()) != cols)
      throw ConfigError(where + ": ragged rows");
    for (long c = 0; c < cols; ++c) {
      const auto& cell = row[static_cast<std::size_t>(c)];
      if (!cell.is_number()) throw ConfigError(where + ": non-numeric cell");
      m(r, c) = cell.get<double>();
    }
  }
  return m;
}

Vector vector_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected an array");
  Vector v(static_cast<long>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(where + ": non-numeric entry");
    v[static_cast<long>(i)] = j[i].get<double>();
  }
  return v;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

std::string condition_json(const SimCondition& cond) {
  json j;
  j["name"] = cond.name;
  j["n_min"] = cond.n_min;
  j["n_max"] = cond.n_max;
  j["n_reps"] = cond.n_reps;
  j["true_mediators"] = cond.true_mediators;
  j["exact_correlation"] = cond.exact_correlation;

  json cov;
  switch (cond.cov.kind) {
    case CovarianceSpec::Kind::ExplicitMatrix:
      cov["kind"] = "explicit_matrix";
      cov["matrix"] = matrix_json(cond.cov.matrix);
      break;
    case CovarianceSpec::Kind::PathModel: {
      cov["kind"] = "path_model";
      json p;
      p["alpha"] = vector_json(cond.cov.paths.alpha);
      p["beta"] = vector_json(cond.cov.paths.beta);
      p["tau"] = cond.cov.paths.tau;
      if (cond.cov.paths.resid_cov_m.size() > 0)
        p["resid_cov_m"] = matrix_json(cond.cov.paths.resid_cov_m);
      p["var_e_y"] = cond.cov.paths.var_e_y;
      cov["paths"] = std::move(p);
      break;
    }
    case CovarianceSpec::Kind::BlockHighDim: {
      cov["kind"] = "block_highdim";
      const BlockParams& b = cond.cov.blocks;
      json p;
      p["n_true"] = b.n_true;
      p["n_A"] = b.n_A;
      p["n_B"] = b.n_B;
      p["n_I"] = b.n_I;
      p["r_xm"] = b.r_xm;
      p["r_my"] = b.r_my;
      p["rho_m"] = b.rho_m;
      p["r_xa"] = b.r_xa;
      p["rho_a"] = b.rho_a;
      p["r_yb"] = b.r_yb;
      p["rho_b"] = b.rho_b;
      p["r_xy"] = b.r_xy;
      cov["blocks"] = std::move(p);
      break;
    }
  }
  j["covariance"] = std::move(cov);
  return j.dump(2) + "\n";
}

SimCondition parse_condition_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("condition spec is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("condition spec must be a JSON object");

  SimCondition cond;
  cond.name = get_or<std::string>(j, "name", "custom");
  cond.n_min = get_or<long>(j, "n_min", cond.n_min);
  cond.n_max = get_or<long>(j, "n_max", cond.n_max);
  cond.n_reps = get_or<long>(j, "n_reps", cond.n_reps);
  cond.true_mediators = get_or<std::vector<int>>(j, "true_mediators", {});
  cond.exact_correlation = get_or<bool>(j, "exact_correlation", true);
  if (cond.n_min < 1 || cond.n_max < cond.n_min)
    throw ConfigError("need 1 <= n_min <= n_max");
  if (cond.n_reps < 0) throw ConfigError("n_reps must be >= 0");

  auto cit = j.find("covariance");
  if (cit == j.end() || !cit->is_object())
    throw ConfigError("condition spec needs a 'covariance' object");
  const json& cov = *cit;
  const std::string kind = get_or<std::string>(cov, "kind", "");

  if (kind == "explicit_matrix") {
    auto mit = cov.find("matrix");
    if (mit == cov.end()) throw ConfigError("explicit_matrix needs 'matrix'");
    cond.cov = CovarianceSpec::explicit_matrix(matrix_from_json(*mit, "matrix"));
  } else if (kind == "path_model") {
    auto pit = cov.find("paths");
    if (pit == cov.end() || !pit->is_object())
      throw ConfigError("path_model needs a 'paths' object");
    const json& p = *pit;
    PathModel pm;
    auto ait = p.find("alpha");
    auto bit = p.find("beta");
    if (ait == p.end() || bit == p.end())
      throw ConfigError("paths needs 'alpha' and 'beta' arrays");
    pm.alpha = vector_from_json(*ait, "paths.alpha");
    pm.beta = vector_from_json(*bit, "paths.beta");
    pm.tau = get_or<double>(p, "tau", 0.0);
    pm.var_e_y = get_or<double>(p, "var_e_y", 1.0);
    if (auto rit = p.find("resid_cov_m"); rit != p.end())
      pm.resid_cov_m = matrix_from_json(*rit, "paths.resid_cov_m");
    cond.cov = CovarianceSpec::path_model(std::move(pm));
  } else if (kind == "block_highdim") {
    BlockParams b;
    if (auto bit = cov.find("blocks"); bit != cov.end()) {
      if (!bit->is_object()) throw ConfigError("'blocks' must be an object");
      const json& p = *bit;
      b.n_true = get_or<long>(p, "n_true", b.n_true);
      b.n_A = get_or<long>(p, "n_A", b.n_A);
      b.n_B = get_or<long>(p, "n_B", b.n_B);
      b.n_I = get_or<long>(p, "n_I", b.n_I);
      b.r_xm = get_or<double>(p, "r_xm", b.r_xm);
      b.r_my = get_or<double>(p, "r_my", b.r_my);
      b.rho_m = get_or<double>(p, "rho_m", b.rho_m);
      b.r_xa = get_or<double>(p, "r_xa", b.r_xa);
      b.rho_a = get_or<double>(p, "rho_a", b.rho_a);
      b.r_yb = get_or<double>(p, "r_yb", b.r_yb);
      b.rho_b = get_or<double>(p, "rho_b", b.rho_b);
      b.r_xy = get_or<double>(p, "r_xy", b.r_xy);
    }
    cond.cov = CovarianceSpec::block_highdim(b);
  } else {
    throw ConfigError(
        "covariance.kind must be one of explicit_matrix, path_model, "
        "block_highdim");
  }

  const long P = cond.cov.n_mediators();
  for (int t : cond.true_mediators)
    if (t < 0 || t >= P)
      throw ConfigError("true_mediators index " + std::to_string(t) +
                        " out of range for P=" + std::to_string(P));
  return cond;
}

Dataset residualize_covariates(const Dataset& data, const Matrix& covariates) {
  const long n = data.x.size();
  if (data.y.size() != n || data.M.rows() != n ||
      (covariates.size() > 0 && covariates.rows() != n))
    throw DimensionMismatch("residualize_covariates: row counts differ");
  const long q = covariates.size() > 0 ? covariates.cols() : 0;
  if (n <= q + 1) throw SampleTooSmall(n, q + 1);

  Matrix basis(n, q + 1);
  basis.col(0).setOnes();
  if (q > 0) basis.rightCols(q) = covariates;
  Eigen::ColPivHouseholderQR<Matrix> qr(basis);
  qr.setThreshold(1e-10);
  if (qr.rank() < basis.cols())
    throw RankDeficient("covariates (with intercept) are collinear");

  Matrix bundle(n, 2 + data.M.cols());
  bundle.col(0) = data.x;
  bundle.col(1) = data.y;
  if (data.M.cols() > 0) bundle.rightCols(data.M.cols()) = data.M;
  Matrix resid = residualize_cols(bundle, basis);

  Dataset out = data;
  out.x = resid.col(0);
  out.y = resid.col(1);
  if (data.M.cols() > 0) out.M = resid.rightCols(data.M.cols());
  return out;
}

Prefiltered prefilter_topk(const Dataset& data, long k) {
  const long P = data.M.cols();
  if (k < 1) throw ConfigError("prefilter k must be >= 1");
  if (k > P)
    throw ConfigError("prefilter k=" + std::to_string(k) +
                      " exceeds mediator count P=" + std::to_string(P));

  std::vector<double> score(static_cast<std::size_t>(P));
  for (long p = 0; p < P; ++p)
    score[static_cast<std::size_t>(p)] =
        std::abs(pearson(data.x, data.M.col(p)) * pearson(data.M.col(p), data.y));

  std::vector<long> order(static_cast<std::size_t>(P));
  for (long p = 0; p < P; ++p) order[static_cast<std::size_t>(p)] = p;
  std::stable_sort(order.begin(), order.end(), [&](long a, long b) {
    return score[static_cast<std::size_t>(a)] > score[static_cast<std::size_t>(b)];
  });

  Prefiltered out;
  out.kept.assign(order.begin(), order.begin() + k);
  std::sort(out.kept.begin(), out.kept.end());  // preserve input order

  out.data.x = data.x;
  out.data.y = data.y;
  out.data.M.resize(data.M.rows(), k);
  out.data.mediator_names.reserve(static_cast<std::size_t>(k));
  out.data.input_columns.reserve(static_cast<std::size_t>(k));
  for (long i = 0; i < k; ++i) {
    const long src = out.kept[static_cast<std::size_t>(i)];
    out.data.M.col(i) = data.M.col(src);
    out.data.mediator_names.push_back(
        data.mediator_names[static_cast<std::size_t>(src)]);
    out.data.input_columns.push_back(
        data.input_columns[static_cast<std::size_t>(src)]);
  }
  return out;
}

namespace {

json config_echo(const AnalysisConfig& cfg) {
  json c;
  c["input"] = cfg.input;
  c["x"] = cfg.x_column;
  c["y"] = cfg.y_column;
  c["covariates"] = cfg.covariate_columns;
  c["mediators"] =
      cfg.mediator_columns.empty()
          ? json("all remaining")
          : json(cfg.mediator_columns);
  c["prefilter_k"] = cfg.prefilter_k;
  c["method"] = method_name(cfg.method);
  c["seed"] = cfg.seed;
  c["out"] = cfg.out;
  c["scree_svg"] = cfg.scree_svg;

  const CmfConfig& cm = cfg.method_cfgs.cmf;
  json jc;
  jc["decision"] = decision_kind_name(cm.decision.kind);
  jc["alpha_level"] = cm.decision.alpha_level;
  jc["starts"] = cm.n_starts;
  jc["max_sweeps"] = cm.max_sweeps;
  jc["p_start"] = cm.p_start;
  jc["cutoff"] = cm.cutoff;
  jc["stable_sweeps"] = cm.stable_sweeps;
  jc["feature_sampling"] =
      cm.feature_sampling ? json(*cm.feature_sampling) : json(nullptr);
  // worker count is an execution knob, not an analysis parameter: results
  // must be byte-identical for any thread cap, so it is not echoed
  c["cmf"] = std::move(jc);

  json jf;
  jf["decision"] = decision_kind_name(cfg.method_cfgs.filter_spec.kind);
  jf["alpha_level"] = cfg.method_cfgs.filter_spec.alpha_level;
  c["filter"] = std::move(jf);

  const HimaConfig& h = cfg.method_cfgs.hima;
  json jh;
  jh["screen_count"] = h.screen_count;
  jh["alpha_level"] = h.alpha_level;
  jh["cv_folds"] = h.cv_folds;
  jh["lambda_grid"] = h.lambda_grid.empty() ? json("auto") : json(h.lambda_grid);
  c["hima"] = std::move(jh);
  return c;
}

}  // namespace

std::string report_json(const Report& rep) {
  json j;
  j["tool"] = "medfilter";
  j["version"] = rep.version;
  j["method"] = rep.method;
  j["n_rows"] = rep.n_rows;
  j["n_mediators_input"] = rep.n_mediators_input;
  j["n_mediators_analyzed"] = rep.n_mediators_analyzed;
  j["config"] = config_echo(rep.config);

  json d;
  d["convergence_fraction"] = rep.convergence_fraction;
  d["dropped_columns"] = rep.dropped_columns;
  d["decide_errors"] = rep.decide_errors;
  d["n_starts_run"] = rep.n_starts_run;
  d["max_sweeps_effective"] = rep.max_sweeps_effective;
  d["sweep_histogram"] = rep.sweep_histogram;
  d["messages"] = rep.messages;
  j["diagnostics"] = std::move(d);

  json ranked = json::array();
  for (const auto& r : rep.ranked) {
    json e;
    e["name"] = r.name;
    e["column"] = r.column;
    e["rate"] = r.rate;
    e["selected"] = r.selected;
    ranked.push_back(std::move(e));
  }
  j["ranked"] = std::move(ranked);
  j["selected"] = rep.selected;
  return j.dump(2) + "\n";
}

std::string scree_svg_text(const std::vector<RankedMediator>& ranked,
                           double cutoff) {
  const double W = 720, H = 420, L = 60, R = 20, T = 20, B = 50;
  const long P = static_cast<long>(ranked.size());
  const double span = static_cast<double>(std::max<long>(P - 1, 1));
  auto sx = [&](long rank0) {
    return L + (W - L - R) * static_cast<double>(rank0) / span;
  };
  auto sy = [&](double rate) { return T + (H - T - B) * (1.0 - rate); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 "
    << csv_number(W) << ' ' << csv_number(H) << "\">\n";
  s << "<rect width=\"" << csv_number(W) << "\" height=\"" << csv_number(H)
    << "\" fill=\"white\"/>\n";
  // axes
  s << "<line x1=\"" << csv_number(L) << "\" y1=\"" << csv_number(H - B)
    << "\" x2=\"" << csv_number(W - R) << "\" y2=\"" << csv_number(H - B)
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << csv_number(L) << "\" y1=\"" << csv_number(T)
    << "\" x2=\"" << csv_number(L) << "\" y2=\"" << csv_number(H - B)
    << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double rate = 0.25 * i;
    const double y = sy(rate);
    s << "<line x1=\"" << csv_number(L - 5) << "\" y1=\"" << csv_number(y)
      << "\" x2=\"" << csv_number(L) << "\" y2=\"" << csv_number(y)
      << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << csv_number(L - 9) << "\" y=\"" << csv_number(y + 4)
      << "\" font-size=\"12\" text-anchor=\"end\">" << csv_number(rate)
      << "</text>\n";
  }
  s << "<text x=\"" << csv_number((L + W - R) / 2) << "\" y=\""
    << csv_number(H - 12) << "\" font-size=\"13\" text-anchor=\"middle\">"
    << "rank</text>\n";
  s << "<text x=\"16\" y=\"" << csv_number((T + H - B) / 2)
    << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << csv_number((T + H - B) / 2) << ")\">selection rate</text>\n";
  if (cutoff >= 0.0 && cutoff <= 1.0) {
    const double y = sy(cutoff);
    s << "<line x1=\"" << csv_number(L) << "\" y1=\"" << csv_number(y)
      << "\" x2=\"" << csv_number(W - R) << "\" y2=\"" << csv_number(y)
      << "\" stroke=\"#888\" stroke-dasharray=\"5,4\"/>\n";
  }
  for (long i = 0; i < P; ++i) {
    s << "<circle cx=\"" << csv_number(sx(i)) << "\" cy=\""
      << csv_number(sy(ranked[static_cast<std::size_t>(i)].rate))
      << "\" r=\"3\" fill=\"#335588\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

Report run_analysis(const AnalysisConfig& cfg) {
  if (cfg.input.empty()) throw ConfigError("input CSV path required");
  if (cfg.x_column.empty()) throw ConfigError("x column name required");
  if (cfg.y_column.empty()) throw ConfigError("y column name required");

  CsvTable tab = read_csv(cfg.input);
  std::unordered_map<std::string, long> pos;
  for (std::size_t i = 0; i < tab.header.size(); ++i)
    pos[tab.header[i]] = static_cast<long>(i);
  auto need = [&](const std::string& name, const char* role) {
    auto it = pos.find(name);
    if (it == pos.end())
      throw ConfigError(std::string(role) + " column '" + name +
                        "' not found in " + cfg.input);
    return it->second;
  };

  const long xi = need(cfg.x_column, "x");
  const long yi = need(cfg.y_column, "y");
  std::unordered_set<long> used{xi, yi};
  if (used.size() != 2) throw ConfigError("x and y name the same column");
  std::vector<long> ci;
  for (const auto& name : cfg.covariate_columns) {
    long c = need(name, "covariate");
    if (!used.insert(c).second)
      throw ConfigError("column '" + name + "' assigned to two roles");
    ci.push_back(c);
  }
  std::vector<long> mi;
  if (cfg.mediator_columns.empty()) {
    for (long c = 0; c < static_cast<long>(tab.header.size()); ++c)
      if (!used.count(c)) mi.push_back(c);
  } else {
    for (const auto& name : cfg.mediator_columns) {
      long c = need(name, "mediator");
      if (!used.insert(c).second)
        throw ConfigError("column '" + name + "' assigned to two roles");
      mi.push_back(c);
    }
  }
  if (mi.empty()) throw ConfigError("no mediator columns remain");

  const long n = tab.values.rows();
  auto check_finite = [&](long col) {
    for (long r = 0; r < n; ++r)
      if (!std::isfinite(tab.values(r, col)))
        throw NonFiniteInput("column '" + tab.header[static_cast<std::size_t>(col)] +
                             "', row " + std::to_string(r + 2));
  };
  check_finite(xi);
  check_finite(yi);
  for (long c : ci) check_finite(c);
  for (long c : mi) check_finite(c);

  Dataset data;
  data.x = tab.values.col(xi);
  data.y = tab.values.col(yi);
  data.M.resize(n, static_cast<long>(mi.size()));
  for (std::size_t i = 0; i < mi.size(); ++i) {
    data.M.col(static_cast<long>(i)) = tab.values.col(mi[i]);
    data.mediator_names.push_back(tab.header[static_cast<std::size_t>(mi[i])]);
    data.input_columns.push_back(mi[i]);
  }
  Matrix C(n, static_cast<long>(ci.size()));
  for (std::size_t i = 0; i < ci.size(); ++i)
    C.col(static_cast<long>(i)) = tab.values.col(ci[i]);

  data = residualize_covariates(data, C);
  if (sample_sd(data.x) == 0.0) throw ZeroVarianceColumn(xi);
  if (sample_sd(data.y) == 0.0) throw ZeroVarianceColumn(yi);

  Report rep;
  rep.method = method_name(cfg.method);
  rep.version = kVersion;
  rep.n_rows = n;
  rep.n_mediators_input = static_cast<long>(mi.size());
  rep.config = cfg;

  if (cfg.prefilter_k > 0) data = prefilter_topk(data, cfg.prefilter_k).data;
  const long P = data.M.cols();
  rep.n_mediators_analyzed = P;

  std::vector<double> rates(static_cast<std::size_t>(P), 0.0);
  std::vector<std::uint8_t> sel(static_cast<std::size_t>(P), 0);
  double cutoff = 0.5;
  switch (cfg.method) {
    case Method::CMF: {
      CmfConfig cc = cfg.method_cfgs.cmf;
      cc.seed = cfg.seed;
      SelectionResult r = cmf_outer(data.x, data.M, data.y, cc);
      rates = r.rates;
      for (int s : r.selected) sel[static_cast<std::size_t>(s)] = 1;
      cutoff = cc.cutoff;
      rep.convergence_fraction = r.convergence_fraction;
      rep.n_starts_run = r.n_starts_run;
      rep.max_sweeps_effective = r.max_sweeps_effective;
      rep.sweep_histogram = r.sweep_histogram;
      rep.decide_errors = r.decide_errors;
      for (int e : r.excluded_columns)
        rep.dropped_columns.push_back(
            data.mediator_names[static_cast<std::size_t>(e)]);
      break;
    }
    case Method::Filter: {
      DecideDiagnostics diag;
      for (long p = 0; p < P; ++p)
        if (decide(cfg.method_cfgs.filter_spec, data.x, data.M.col(p), data.y,
                   &diag)) {
          rates[static_cast<std::size_t>(p)] = 1.0;
          sel[static_cast<std::size_t>(p)] = 1;
        }
      rep.decide_errors = diag.error_count;
      rep.messages = diag.messages;
      break;
    }
    case Method::HIMA: {
      HimaDiagnostics diag;
      auto s = hima(data.x, data.M, data.y, cfg.method_cfgs.hima, cfg.seed, &diag);
      for (int i : s) {
        rates[static_cast<std::size_t>(i)] = 1.0;
        sel[static_cast<std::size_t>(i)] = 1;
      }
      rep.messages = diag.messages;
      rep.messages.push_back("screened " + std::to_string(diag.n_screened) +
                             " mediators, " + std::to_string(diag.n_survivors) +
                             " lasso survivors, lambda " +
                             csv_number(diag.lambda_chosen));
      break;
    }
  }

  auto [order, cut_sel] = rank_and_cut(rates, cutoff);
  (void)cut_sel;
  for (int idx : order) {
    RankedMediator rm;
    rm.name = data.mediator_names[static_cast<std::size_t>(idx)];
    rm.column = data.input_columns[static_cast<std::size_t>(idx)];
    rm.rate = rates[static_cast<std::size_t>(idx)];
    rm.selected = sel[static_cast<std::size_t>(idx)] != 0;
    rep.ranked.push_back(std::move(rm));
  }
  for (const auto& rm : rep.ranked)
    if (rm.selected) rep.selected.push_back(rm.name);

  if (!cfg.out.empty()) {
    write_text_file(cfg.out + ".report.json", report_json(rep));

    std::ostringstream rc;
    rc << "name,column,rate,selected\n";
    for (const auto& rm : rep.ranked)
      rc << csv_field(rm.name) << ',' << rm.column << ',' << csv_number(rm.rate)
         << ',' << (rm.selected ? 1 : 0) << '\n';
    write_text_file(cfg.out + ".rates.csv", rc.str());

    Matrix scree(static_cast<long>(rep.ranked.size()), 2);
    for (std::size_t i = 0; i < rep.ranked.size(); ++i) {
      scree(static_cast<long>(i), 0) = static_cast<double>(i + 1);
      scree(static_cast<long>(i), 1) = rep.ranked[i].rate;
    }
    write_csv(cfg.out + ".scree.csv", {"rank", "rate"}, scree);

    if (cfg.scree_svg)
      write_text_file(cfg.out + ".scree.svg", scree_svg_text(rep.ranked, cutoff));
  }
  return rep;
}

// Runtime measurements stay out of the emitted tables so result files are
// byte-stable across reruns and thread counts; timings go to the CLI log.
std::string simulation_table_csv(const SimulationTables& tables) {
  std::ostringstream s;
  s << "method,power,fpr,ppv,n_scored,n_failed";
  for (int t : tables.condition.true_mediators) s << ",rate_m" << t;
  s << '\n';
  for (const auto& mt : tables.methods) {
    double power = std::numeric_limits<double>::quiet_NaN();
    if (!mt.scores.power.empty()) {
      power = 0;
      for (double p : mt.scores.power) power += p;
      power /= static_cast<double>(mt.scores.power.size());
    }
    s << method_name(mt.method) << ',' << csv_number(power) << ','
      << csv_number(mt.scores.fpr) << ',' << csv_number(mt.scores.ppv) << ','
      << mt.scores.n_scored << ',' << mt.scores.n_failed;
    for (double p : mt.scores.power) s << ',' << csv_number(p);
    s << '\n';
  }
  return s.str();
}

std::string simulation_json(const SimulationTables& tables) {
  json j;
  j["tool"] = "medfilter";
  j["version"] = kVersion;
  j["seed"] = tables.seed;
  j["condition"] = json::parse(condition_json(tables.condition));
  json methods = json::array();
  for (const auto& mt : tables.methods) {
    json m;
    m["method"] = method_name(mt.method);
    m["power"] = mt.scores.power;
    m["fpr"] = mt.scores.fpr;
    m["ppv"] = mt.scores.ppv;
    m["selection_rate"] = mt.scores.selection_rate;
    m["n_scored"] = mt.scores.n_scored;
    m["n_failed"] = mt.scores.n_failed;
    json reps = json::array();
    for (const auto& r : mt.results) {
      json e;
      e["replicate"] = r.replicate;
      e["n"] = r.n_used;
      e["selected"] = r.selected;
      if (r.failed) e["error"] = r.error;
      reps.push_back(std::move(e));
    }
    m["replicates"] = std::move(reps);
    methods.push_back(std::move(m));
  }
  j["methods"] = std::move(methods);
  return j.dump(2) + "\n";
}

SimulationTables run_simulation(const SimulationRequest& req) {
  SimCondition cond;
  if (!req.spec_path.empty())
    cond = parse_condition_json(read_text_file(req.spec_path));
  else if (!req.condition.empty())
    cond = shipped_condition(req.condition);
  else
    throw ConfigError("need a shipped condition name or a --spec file");
  if (req.reps_override >= 0) cond.n_reps = req.reps_override;

  std::vector<Method> methods = req.methods;
  if (methods.empty()) methods = {Method::Filter, Method::CMF, Method::HIMA};

  auto results = run_condition(cond, methods, req.method_cfgs, req.seed);

  SimulationTables out;
  out.condition = cond;
  out.seed = req.seed;
  const long P = cond.cov.n_mediators();
  for (Method m : methods) {
    MethodTable mt;
    mt.method = m;
    for (const auto& r : results)
      if (r.method == m) mt.results.push_back(r);
    double total_ms = 0;
    for (const auto& r : mt.results) total_ms += static_cast<double>(r.runtime_ms);
    mt.mean_runtime_ms =
        mt.results.empty() ? 0 : total_ms / static_cast<double>(mt.results.size());
    try {
      mt.scores = score(mt.results, cond.true_mediators, P);
    } catch (const EmptyResults&) {
      mt.scores = ScoreTable{};
      mt.scores.selection_rate.assign(static_cast<std::size_t>(P), 0.0);
      mt.scores.power.assign(cond.true_mediators.size(), 0.0);
      mt.scores.n_failed = static_cast<long>(mt.results.size());
    }
    out.methods.push_back(std::move(mt));
  }

  if (!req.out.empty()) {
    write_text_file(req.out + ".table.csv", simulation_table_csv(out));
    write_text_file(req.out + ".table.json", simulation_json(out));
  }
  return out;
}

}  // namespace medfilter
