#pragma once

#include <string>
#include <vector>

#include "medfilter/baselines.hpp"
#include "medfilter/cmf.hpp"
#include "medfilter/simgen.hpp"

namespace medfilter {

enum class Method { Filter, CMF, HIMA };

std::string method_name(Method m);
Method method_from_name(const std::string& name);  // ConfigError on unknown

struct MethodConfigs {
  DecisionSpec filter_spec;  // decision rule for the univariate filter
  CmfConfig cmf;             // carries its own DecisionSpec
  HimaConfig hima;
};

struct MethodResult {
  Method method = Method::Filter;
  long replicate = 0;
  std::vector<int> selected;
  long runtime_ms = 0;
  long n_used = 0;       // sample size drawn for the replicate
  bool failed = false;   // recorded, never silently dropped
  std::string error;
};

struct ScoreTable {
  std::vector<double> selection_rate;  // per mediator column
  std::vector<double> power;           // per true mediator, truth order
  double fpr = 0;  // mean over replicates of FP / (P - |truth|)
  double ppv = 1;  // pooled sum(TP) / (sum(TP) + sum(FP)); 1.0 if no selections
  long n_scored = 0;
  long n_failed = 0;
};

// Runs every replicate of the condition for each requested method. Fully
// deterministic: replicate r derives its data stream from (seed, r, 0), the
// CMF start seed from (seed, r, 1) and the HIMA fold seed from (seed, r, 2);
// the filter consumes no randomness. A replicate whose generation or method
// run throws is recorded as failed with the message.
std::vector<MethodResult> run_condition(const SimCondition& cond,
                                        const std::vector<Method>& methods,
                                        const MethodConfigs& cfgs,
                                        std::uint64_t seed);

// Scores one method's results against the truth set. Failed replicates are
// excluded from every denominator and counted in n_failed.
ScoreTable score(const std::vector<MethodResult>& results,
                 const std::vector<int>& truth, long P);

}  // namespace medfilter
