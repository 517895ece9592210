#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "medfilter/decision.hpp"
#include "medfilter/numcore.hpp"
#include "medfilter/rng.hpp"

namespace medfilter {

using DecisionVector = std::vector<std::uint8_t>;

struct CmfConfig {
  DecisionSpec decision;
  long n_starts = 1000;
  long max_sweeps = 25;
  // Unset means the default policy: feature sampling on iff P > 50.
  std::optional<bool> feature_sampling;
  double p_start = 0.1;
  long stable_sweeps = 3;  // convergence patience under feature sampling
  std::uint64_t seed = 0;
  double cutoff = 0.5;
  int threads = 1;  // <= 0 means hardware concurrency; never affects results
};

struct SelectionResult {
  std::vector<double> rates;  // empirical selection probability per mediator
  std::vector<int> selected;  // {p : rates[p] >= cutoff}
  long n_starts_run = 0;
  double convergence_fraction = 0;
  std::vector<long> sweep_histogram;  // index = sweeps used by a start
  // Diagnostics.
  std::vector<int> excluded_columns;  // constant mediators, rate forced to 0
  long cap_drop_events = 0;  // evaluations that hit the conditioning cap
  long decide_errors = 0;
  long max_sweeps_effective = 0;  // after the coverage guard
};

// Observation hook for instrumenting the inner loop (tests); called after
// every coordinate evaluation. Must be side-effect-free on the data.
struct SweepEvent {
  long sweep = 0;         // 1-based
  int coord = 0;          // mediator column evaluated
  bool decision = false;  // new bit value
  long conditioning_size = 0;  // |M*| used for this evaluation
};
using InnerObserver = std::function<void(const SweepEvent&)>;

struct InnerResult {
  DecisionVector decvec;
  bool converged = false;
  long sweeps_used = 0;
  long cap_drop_events = 0;
  DecideDiagnostics diag;
};

// One randomized coordinate-descent run. Inputs must be pre-standardized.
// Per sweep, coordinates are visited in a fresh uniform random order (a
// fresh uniform ceil(sqrt(P)) subset when feature_sampling); each visit
// conditions on the currently selected columns excluding the visited one,
// residualizes x and y against them, and re-decides the bit. Converged when
// the decision vector is unchanged across `stable_sweeps` consecutive
// sweeps (forced to 1 when feature_sampling is off). The conditioning set
// is capped at n-3 columns, keeping the most recently confirmed ones.
InnerResult cmf_inner(const Vector& x, const Matrix& M, const Vector& y,
                      const DecisionSpec& spec, const DecisionVector& start,
                      long max_sweeps, bool feature_sampling,
                      long stable_sweeps, RngStream& rng,
                      const InnerObserver* observer = nullptr);

// Aggregation over a contiguous range of start indices; the unit the outer
// loop parallelizes over. Inputs must be pre-standardized. Start vectors
// and streams derive from (cfg.seed, start_index), so any partition of the
// index range yields identical totals.
struct StartRangeAccum {
  std::vector<std::uint64_t> bit_counts;
  long converged = 0;
  std::vector<long> sweep_histogram;
  long cap_drop_events = 0;
  long decide_errors = 0;
};
StartRangeAccum run_start_range(const Vector& x, const Matrix& M,
                                const Vector& y, const CmfConfig& cfg,
                                long first, long count);

// Standardizes once, runs cfg.n_starts Bernoulli(p_start) starts with
// per-start derived streams, aggregates bit counts into selection rates and
// thresholds at cfg.cutoff (inclusive). Constant mediator columns are
// excluded with a diagnostic and report rate 0.
SelectionResult cmf_outer(const Vector& x, const Matrix& M, const Vector& y,
                          const CmfConfig& cfg);

// Rate-descending ranking (ties by ascending index) and inclusive cutoff.
std::pair<std::vector<int>, std::vector<int>> rank_and_cut(
    const std::vector<double>& rates, double cutoff);

}  // namespace medfilter
