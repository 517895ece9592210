#include "medfilter/study.hpp"

#include <algorithm>
#include <chrono>
#include <unordered_set>

#include "medfilter/errors.hpp"

namespace medfilter {

std::string method_name(Method m) {
  switch (m) {
    case Method::Filter: return "filter";
    case Method::CMF: return "cmf";
    case Method::HIMA: return "hima";
  }
  return "?";
}

Method method_from_name(const std::string& name) {
  if (name == "filter") return Method::Filter;
  if (name == "cmf") return Method::CMF;
  if (name == "hima") return Method::HIMA;
  throw ConfigError("unknown method '" + name + "' (valid: filter, cmf, hima)");
}

namespace {

// Purpose slots under each replicate's stream family. Keeping the data draw
// in its own slot means adding or removing a method never perturbs the data,
// and vice versa.
constexpr std::uint64_t kSlotData = 0;
constexpr std::uint64_t kSlotCmf = 1;
constexpr std::uint64_t kSlotHima = 2;

long elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

std::vector<MethodResult> run_condition(const SimCondition& cond,
                                        const std::vector<Method>& methods,
                                        const MethodConfigs& cfgs,
                                        std::uint64_t seed) {
  if (methods.empty()) throw ConfigError("no methods requested");
  if (cond.n_reps < 0) throw ConfigError("n_reps must be >= 0");
  if (cond.n_min < 1 || cond.n_max < cond.n_min)
    throw ConfigError("need 1 <= n_min <= n_max");

  const long P = cond.cov.n_mediators();
  std::vector<MethodResult> out;
  out.reserve(static_cast<std::size_t>(cond.n_reps) * methods.size());

  for (long rep = 0; rep < cond.n_reps; ++rep) {
    const auto r = static_cast<std::uint64_t>(rep);
    RngStream data_rng(derive2(seed, r, kSlotData));
    long n = cond.n_min;
    if (cond.n_max > cond.n_min) n = data_rng.uniform_int(cond.n_min, cond.n_max);

    Matrix sample;  // columns: x, M_1..M_P, y
    bool data_ok = true;
    std::string data_err;
    try {
      sample = cond.exact_correlation
                   ? exact_correlation_sample(cond.cov.dense(), n, data_rng)
                   : mvn_sample(cond.cov, n, data_rng);
    } catch (const Error& e) {
      data_ok = false;
      data_err = e.what();
    }

    for (Method m : methods) {
      MethodResult res;
      res.method = m;
      res.replicate = rep;
      res.n_used = n;
      if (!data_ok) {
        res.failed = true;
        res.error = "data generation: " + data_err;
        out.push_back(std::move(res));
        continue;
      }
      const Vector x = sample.col(0);
      const Vector y = sample.col(P + 1);
      const Matrix M = sample.middleCols(1, P);
      auto t0 = std::chrono::steady_clock::now();
      try {
        switch (m) {
          case Method::Filter:
            res.selected = filter_method(x, M, y, cfgs.filter_spec);
            break;
          case Method::CMF: {
            CmfConfig cc = cfgs.cmf;
            cc.seed = derive2(seed, r, kSlotCmf);
            res.selected = cmf_outer(x, M, y, cc).selected;
            break;
          }
          case Method::HIMA: {
            HimaDiagnostics diag;
            res.selected = hima(x, M, y, cfgs.hima, derive2(seed, r, kSlotHima), &diag);
            break;
          }
        }
        std::sort(res.selected.begin(), res.selected.end());
      } catch (const Error& e) {
        res.failed = true;
        res.error = e.what();
      }
      res.runtime_ms = elapsed_ms(t0);
      out.push_back(std::move(res));
    }
  }
  return out;
}

ScoreTable score(const std::vector<MethodResult>& results,
                 const std::vector<int>& truth, long P) {
  if (P < 1) throw ConfigError("score: P must be >= 1");
  std::unordered_set<int> truth_set(truth.begin(), truth.end());
  for (int t : truth_set)
    if (t < 0 || t >= P) throw ConfigError("score: truth index out of range");

  ScoreTable tab;
  tab.selection_rate.assign(static_cast<std::size_t>(P), 0.0);
  long tp_total = 0, fp_total = 0;
  double fpr_sum = 0.0;
  const long n_false = P - static_cast<long>(truth_set.size());

  for (const auto& r : results) {
    if (r.failed) {
      ++tab.n_failed;
      continue;
    }
    ++tab.n_scored;
    long fp = 0;
    for (int s : r.selected) {
      if (s < 0 || s >= P) throw ConfigError("score: selected index out of range");
      tab.selection_rate[static_cast<std::size_t>(s)] += 1.0;
      if (truth_set.count(s)) ++tp_total; else { ++fp; ++fp_total; }
    }
    if (n_false > 0) fpr_sum += static_cast<double>(fp) / static_cast<double>(n_false);
  }
  if (tab.n_scored == 0) throw EmptyResults("score: every replicate failed");

  for (auto& v : tab.selection_rate) v /= static_cast<double>(tab.n_scored);
  tab.power.reserve(truth.size());
  for (int t : truth) tab.power.push_back(tab.selection_rate[static_cast<std::size_t>(t)]);
  tab.fpr = n_false > 0 ? fpr_sum / static_cast<double>(tab.n_scored) : 0.0;
  tab.ppv = (tp_total + fp_total) == 0
                ? 1.0
                : static_cast<double>(tp_total) / static_cast<double>(tp_total + fp_total);
  return tab;
}

}  // namespace medfilter
