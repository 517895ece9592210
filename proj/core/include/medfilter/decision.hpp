#pragma once

#include <string>
#include <vector>

#include "medfilter/numcore.hpp"

namespace medfilter {

// Estimates from the two-regression univariate mediation model:
//   m = mu_M + alpha*x + e_M
//   y = mu_Y + tau*x + beta*m + e_Y
struct MediationFit {
  double alpha = 0, se_alpha = 0;
  double beta = 0, se_beta = 0;
  double tau = 0, se_tau = 0;
  long n = 0;
};

enum class DecisionKind { Sobel, JointSignificance };

std::string decision_kind_name(DecisionKind kind);
DecisionKind decision_kind_from_name(const std::string& name);  // ConfigError

struct DecisionSpec {
  DecisionKind kind = DecisionKind::Sobel;
  double alpha_level = 0.1;
};

struct TestResult {
  double statistic = 0;  // for JointSignificance: the t behind the larger p
  double p_value = 1;
  bool decided = false;
};

// Error-to-negative-decision bookkeeping for decide().
struct DecideDiagnostics {
  long error_count = 0;
  std::vector<std::string> messages;  // capped at 32 entries
  void record(const std::string& msg);
};

// CDF helpers, accurate to better than 1e-12 absolute.
double normal_cdf(double z);
double two_sided_normal_p(double z);
double student_t_cdf(double t, double dof);
double two_sided_t_p(double t, double dof);

// alpha/se_alpha from OLS of m on (1, x); beta, tau from OLS of y on (1, x, m).
MediationFit fit_univariate(const Vector& x, const Vector& m, const Vector& y);

// First-order delta-method z = alpha*beta / sqrt(beta^2 se_a^2 + alpha^2 se_b^2),
// two-sided standard-normal p. z defined as 0 (p = 1) when the numerator and
// both variance terms vanish.
TestResult sobel_test(const MediationFit& fit, double alpha_level);

// Both coordinate t-tests must reject: p_alpha (dof n-2) and p_beta (dof n-3)
// each below alpha_level; reported p is the max.
TestResult joint_significance_test(const MediationFit& fit, double alpha_level);

// Fit + dispatch on spec.kind. Any numerical failure (rank deficiency,
// degenerate SEs, ...) degrades to `false` and is recorded in diag.
bool decide(const DecisionSpec& spec, const Vector& x, const Vector& m,
            const Vector& y, DecideDiagnostics* diag = nullptr);

}  // namespace medfilter
