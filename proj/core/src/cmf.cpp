#include "medfilter/cmf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

namespace medfilter {

namespace {

long sqrt_subset_size(long P) {
  return static_cast<long>(std::ceil(std::sqrt(static_cast<double>(P))));
}

void validate_config(const CmfConfig& cfg) {
  if (cfg.n_starts < 1) throw ConfigError("n_starts must be >= 1");
  if (cfg.max_sweeps < 1) throw ConfigError("max_sweeps must be >= 1");
  if (cfg.stable_sweeps < 1) throw ConfigError("stable_sweeps must be >= 1");
  if (!(cfg.p_start >= 0.0 && cfg.p_start <= 1.0))
    throw ConfigError("p_start must lie in [0, 1]");
  if (!(cfg.cutoff >= 0.0 && cfg.cutoff <= 1.0))
    throw ConfigError("cutoff must lie in [0, 1]");
}

// Effective sweep budget after the coverage guard: with feature sampling,
// max_sweeps * ceil(sqrt(P)) must reach 3P so every coordinate is visited
// about three times in expectation.
long effective_max_sweeps(const CmfConfig& cfg, bool fs, long P) {
  if (!fs || P < 1) return cfg.max_sweeps;
  long per_sweep = sqrt_subset_size(P);
  long needed = (3 * P + per_sweep - 1) / per_sweep;
  return std::max(cfg.max_sweeps, needed);
}

}  // namespace

InnerResult cmf_inner(const Vector& x, const Matrix& M, const Vector& y,
                      const DecisionSpec& spec, const DecisionVector& start,
                      long max_sweeps, bool feature_sampling,
                      long stable_sweeps, RngStream& rng,
                      const InnerObserver* observer) {
  const long n = x.size();
  const long P = M.cols();
  if (M.rows() != n || y.size() != n)
    throw DimensionMismatch("cmf_inner: row counts differ");
  if (static_cast<long>(start.size()) != P)
    throw DimensionMismatch("cmf_inner: start vector length != P");
  if (max_sweeps < 1) throw ConfigError("max_sweeps must be >= 1");

  const long cap = std::max<long>(0, n - 3);
  const long subset = sqrt_subset_size(P);
  const long patience = feature_sampling ? stable_sweeps : 1;

  InnerResult res;
  res.decvec = start;

  // Selected columns in confirmation order (front = stalest); a visit that
  // leaves a bit set refreshes the column to the back.
  std::vector<int> sel_order;
  for (int p = 0; p < P; ++p)
    if (res.decvec[p]) sel_order.push_back(p);

  std::vector<int> visit_pool(P);
  std::iota(visit_pool.begin(), visit_pool.end(), 0);
  std::vector<int> cond;
  Matrix cond_m(n, std::min<long>(P, std::max<long>(cap, 1)));
  Matrix xy(n, 2);
  xy.col(0) = x;
  xy.col(1) = y;

  long stable = 0;
  DecisionVector before_sweep = res.decvec;
  for (long sweep = 1; sweep <= max_sweeps; ++sweep) {
    res.sweeps_used = sweep;
    long visits = P;
    if (feature_sampling) {
      visits = std::min(subset, P);
      rng.partial_shuffle(visit_pool, static_cast<std::size_t>(visits));
    } else {
      rng.shuffle(visit_pool);
    }

    for (long v = 0; v < visits; ++v) {
      const int p = visit_pool[static_cast<std::size_t>(v)];
      cond.clear();
      for (int q : sel_order)
        if (q != p) cond.push_back(q);
      if (static_cast<long>(cond.size()) > cap) {
        cond.erase(cond.begin(), cond.end() - cap);
        ++res.cap_drop_events;
      }

      bool bit;
      if (cond.empty()) {
        bit = decide(spec, x, M.col(p), y, &res.diag);
      } else {
        const long k = static_cast<long>(cond.size());
        for (long j = 0; j < k; ++j) cond_m.col(j) = M.col(cond[j]);
        Matrix r = residualize_cols(xy, cond_m.leftCols(k));
        bit = decide(spec, r.col(0), M.col(p), r.col(1), &res.diag);
      }

      if (bit) {
        auto it = std::find(sel_order.begin(), sel_order.end(), p);
        if (it != sel_order.end()) sel_order.erase(it);
        sel_order.push_back(p);
      } else if (res.decvec[p]) {
        auto it = std::find(sel_order.begin(), sel_order.end(), p);
        if (it != sel_order.end()) sel_order.erase(it);
      }
      res.decvec[p] = bit ? 1 : 0;

      if (observer) {
        SweepEvent ev;
        ev.sweep = sweep;
        ev.coord = p;
        ev.decision = bit;
        ev.conditioning_size = static_cast<long>(cond.size());
        (*observer)(ev);
      }
    }

    if (res.decvec == before_sweep) {
      if (++stable >= patience) {
        res.converged = true;
        break;
      }
    } else {
      stable = 0;
      before_sweep = res.decvec;
    }
  }
  return res;
}

StartRangeAccum run_start_range(const Vector& x, const Matrix& M,
                                const Vector& y, const CmfConfig& cfg,
                                long first, long count) {
  validate_config(cfg);
  const long P = M.cols();
  const bool fs = cfg.feature_sampling.value_or(P > 50);
  const long sweeps_budget = effective_max_sweeps(cfg, fs, P);

  StartRangeAccum acc;
  acc.bit_counts.assign(static_cast<std::size_t>(P), 0);
  acc.sweep_histogram.assign(static_cast<std::size_t>(sweeps_budget) + 1, 0);

  DecisionVector start(static_cast<std::size_t>(P), 0);
  for (long i = first; i < first + count; ++i) {
    RngStream rng = RngStream::derived(cfg.seed, static_cast<std::uint64_t>(i));
    for (long p = 0; p < P; ++p)
      start[static_cast<std::size_t>(p)] = rng.bernoulli(cfg.p_start) ? 1 : 0;
    InnerResult r = cmf_inner(x, M, y, cfg.decision, start, sweeps_budget, fs,
                              cfg.stable_sweeps, rng);
    for (long p = 0; p < P; ++p)
      acc.bit_counts[static_cast<std::size_t>(p)] +=
          r.decvec[static_cast<std::size_t>(p)];
    if (r.converged) ++acc.converged;
    ++acc.sweep_histogram[static_cast<std::size_t>(r.sweeps_used)];
    acc.cap_drop_events += r.cap_drop_events;
    acc.decide_errors += r.diag.error_count;
  }
  return acc;
}

SelectionResult cmf_outer(const Vector& x, const Matrix& M, const Vector& y,
                          const CmfConfig& cfg) {
  validate_config(cfg);
  const long n = x.size();
  const long P = M.cols();
  if (M.rows() != n || y.size() != n)
    throw DimensionMismatch("cmf_outer: row counts differ");
  if (n < 4) throw SampleTooSmall(n, 3);

  Vector xs = standardize(x);
  Vector ys = standardize(y);

  // Constant mediators are excluded up front: their column becomes zero, so
  // every visit decides false (rank-deficient fit) and the rate is forced
  // to 0 below.
  std::vector<int> excluded;
  Matrix ms(n, P);
  for (long p = 0; p < P; ++p) {
    try {
      ms.col(p) = standardize(Vector(M.col(p)));
    } catch (const ZeroVarianceColumn&) {
      ms.col(p).setZero();
      excluded.push_back(static_cast<int>(p));
    }
  }

  const bool fs = cfg.feature_sampling.value_or(P > 50);
  const long sweeps_budget = effective_max_sweeps(cfg, fs, P);

  unsigned hw = std::thread::hardware_concurrency();
  long threads = cfg.threads > 0 ? cfg.threads : std::max(1u, hw);
  threads = std::min<long>(threads, cfg.n_starts);

  std::vector<StartRangeAccum> parts(static_cast<std::size_t>(threads));
  if (threads == 1) {
    parts[0] = run_start_range(xs, ms, ys, cfg, 0, cfg.n_starts);
  } else {
    std::vector<std::thread> pool;
    long base = cfg.n_starts / threads;
    long extra = cfg.n_starts % threads;
    long begin = 0;
    for (long t = 0; t < threads; ++t) {
      long cnt = base + (t < extra ? 1 : 0);
      pool.emplace_back([&, t, begin, cnt] {
        parts[static_cast<std::size_t>(t)] =
            run_start_range(xs, ms, ys, cfg, begin, cnt);
      });
      begin += cnt;
    }
    for (auto& th : pool) th.join();
  }

  SelectionResult out;
  out.n_starts_run = cfg.n_starts;
  out.max_sweeps_effective = sweeps_budget;
  out.excluded_columns = excluded;
  out.sweep_histogram.assign(static_cast<std::size_t>(sweeps_budget) + 1, 0);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(P), 0);
  long converged = 0;
  for (const auto& a : parts) {
    for (long p = 0; p < P; ++p)
      counts[static_cast<std::size_t>(p)] += a.bit_counts[static_cast<std::size_t>(p)];
    for (std::size_t s = 0; s < a.sweep_histogram.size(); ++s)
      out.sweep_histogram[s] += a.sweep_histogram[s];
    converged += a.converged;
    out.cap_drop_events += a.cap_drop_events;
    out.decide_errors += a.decide_errors;
  }
  for (int p : excluded) counts[static_cast<std::size_t>(p)] = 0;

  out.rates.resize(static_cast<std::size_t>(P));
  for (long p = 0; p < P; ++p)
    out.rates[static_cast<std::size_t>(p)] =
        static_cast<double>(counts[static_cast<std::size_t>(p)]) /
        static_cast<double>(cfg.n_starts);
  out.convergence_fraction =
      static_cast<double>(converged) / static_cast<double>(cfg.n_starts);
  out.selected = rank_and_cut(out.rates, cfg.cutoff).second;
  return out;
}

std::pair<std::vector<int>, std::vector<int>> rank_and_cut(
    const std::vector<double>& rates, double cutoff) {
  if (!(cutoff >= 0.0 && cutoff <= 1.0))
    throw ConfigError("cutoff must lie in [0, 1]");
  std::vector<int> ranking(rates.size());
  std::iota(ranking.begin(), ranking.end(), 0);
  std::stable_sort(ranking.begin(), ranking.end(), [&](int a, int b) {
    if (rates[static_cast<std::size_t>(a)] != rates[static_cast<std::size_t>(b)])
      return rates[static_cast<std::size_t>(a)] > rates[static_cast<std::size_t>(b)];
    return a < b;
  });
  std::vector<int> selected;
  for (std::size_t p = 0; p < rates.size(); ++p)
    if (rates[p] >= cutoff) selected.push_back(static_cast<int>(p));
  return {ranking, selected};
}

}  // namespace medfilter
