#include "medfilter/decision.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>

namespace medfilter {

void DecideDiagnostics::record(const std::string& msg) {
  ++error_count;
  if (messages.size() < 32) messages.push_back(msg);
}

std::string decision_kind_name(DecisionKind kind) {
  return kind == DecisionKind::Sobel ? "sobel" : "joint-significance";
}

DecisionKind decision_kind_from_name(const std::string& name) {
  if (name == "sobel") return DecisionKind::Sobel;
  if (name == "joint-significance" || name == "joint_significance")
    return DecisionKind::JointSignificance;
  throw ConfigError("unknown decision rule '" + name +
                    "' (valid: sobel, joint-significance)");
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / M_SQRT2); }

double two_sided_normal_p(double z) { return std::erfc(std::abs(z) / M_SQRT2); }

double student_t_cdf(double t, double dof) {
  boost::math::students_t_distribution<double> dist(dof);
  return boost::math::cdf(dist, t);
}

double two_sided_t_p(double t, double dof) {
  boost::math::students_t_distribution<double> dist(dof);
  return 2.0 * boost::math::cdf(dist, -std::abs(t));
}

static void check_alpha_level(double a) {
  if (!(a > 0.0 && a < 1.0))
    throw ConfigError("alpha_level must lie in (0, 1)");
}

MediationFit fit_univariate(const Vector& x, const Vector& m, const Vector& y) {
  const long n = x.size();
  if (m.size() != n || y.size() != n)
    throw DimensionMismatch("fit_univariate: unequal lengths");
  if (n < 4) throw SampleTooSmall(n, 3);

  Matrix d1(n, 2);
  d1.col(0).setOnes();
  d1.col(1) = x;
  OlsFit mfit = ols(d1, m);

  Matrix d2(n, 3);
  d2.col(0).setOnes();
  d2.col(1) = x;
  d2.col(2) = m;
  OlsFit yfit = ols(d2, y);

  MediationFit out;
  out.alpha = mfit.coefficients[1];
  out.se_alpha = mfit.standard_errors[1];
  out.tau = yfit.coefficients[1];
  out.se_tau = yfit.standard_errors[1];
  out.beta = yfit.coefficients[2];
  out.se_beta = yfit.standard_errors[2];
  out.n = n;
  return out;
}

TestResult sobel_test(const MediationFit& fit, double alpha_level) {
  check_alpha_level(alpha_level);
  const double num = fit.alpha * fit.beta;
  const double var = fit.beta * fit.beta * fit.se_alpha * fit.se_alpha +
                     fit.alpha * fit.alpha * fit.se_beta * fit.se_beta;
  TestResult r;
  if (var == 0.0) {
    if (num != 0.0) throw DegenerateSE();
    r.statistic = 0.0;
    r.p_value = 1.0;
    r.decided = false;
    return r;
  }
  r.statistic = num / std::sqrt(var);
  r.p_value = two_sided_normal_p(r.statistic);
  r.decided = r.p_value < alpha_level;
  return r;
}

TestResult joint_significance_test(const MediationFit& fit, double alpha_level) {
  check_alpha_level(alpha_level);
  if (fit.se_alpha <= 0.0 || fit.se_beta <= 0.0) throw DegenerateSE();
  const double ta = fit.alpha / fit.se_alpha;
  const double tb = fit.beta / fit.se_beta;
  const double pa = two_sided_t_p(ta, static_cast<double>(fit.n - 2));
  const double pb = two_sided_t_p(tb, static_cast<double>(fit.n - 3));
  TestResult r;
  if (pa >= pb) {
    r.statistic = ta;
    r.p_value = pa;
  } else {
    r.statistic = tb;
    r.p_value = pb;
  }
  r.decided = r.p_value < alpha_level;
  return r;
}

bool decide(const DecisionSpec& spec, const Vector& x, const Vector& m,
            const Vector& y, DecideDiagnostics* diag) {
  try {
    MediationFit fit = fit_univariate(x, m, y);
    TestResult r = spec.kind == DecisionKind::Sobel
                       ? sobel_test(fit, spec.alpha_level)
                       : joint_significance_test(fit, spec.alpha_level);
    return r.decided;
  } catch (const Error& e) {
    if (diag) diag->record(e.what());
    return false;
  }
}

}  // namespace medfilter
