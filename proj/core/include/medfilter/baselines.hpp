#pragma once

#include <cstdint>
#include <vector>

#include "medfilter/decision.hpp"
#include "medfilter/numcore.hpp"

namespace medfilter {

// P independent univariate decisions, no conditioning.
std::vector<int> filter_method(const Vector& x, const Matrix& M,
                               const Vector& y, const DecisionSpec& spec,
                               DecideDiagnostics* diag = nullptr);

// sign(z) * max(|z| - gamma, 0).
double soft_threshold(double z, double gamma);

struct LassoFit {
  Vector coefficients;
  double lambda = 0;
  long n_iterations = 0;  // full cyclic passes
  bool converged = false;
  std::vector<int> active_set;  // exactly the nonzero coefficients
  double kkt_residual = 0;      // max stationarity violation of |x_j'r/n|
};

// Coordinate descent for (1/2n)||y - Xc||^2 + lambda * sum_{penalized} |c_j|.
// Columns should be standardized; `penalize` (empty = all true) marks which
// coefficients carry the penalty. Non-convergence is reported in-band via
// converged=false carrying the partial fit.
LassoFit lasso_cd(const Matrix& design, const Vector& y, double lambda,
                  const std::vector<std::uint8_t>& penalize = {},
                  double tol = 1e-7, long max_iter = 100000);

struct HimaConfig {
  long screen_count = 0;  // 0 = default ceil(2n / log n), capped at P
  double alpha_level = 0.1;
  std::vector<double> lambda_grid;  // empty = lambda_max * 10^linspace(0, -2, 50)
  long cv_folds = 10;
};

struct HimaDiagnostics {
  long n_screened = 0;
  long n_survivors = 0;
  double lambda_chosen = 0;
  long cv_folds_used = 0;
  std::vector<std::string> messages;
};

// Three-step pipeline: (1) keep the screen_count mediators with largest
// |corr(M_p, y)|; (2) LASSO of y on (x unpenalized + screened), lambda by
// cv_folds-fold minimum prediction error over the grid; (3) survivors pass
// a joint significance test at level alpha_level / n_survivors, with the
// beta p-value from a multivariate OLS refit on all survivors. `seed`
// drives the fold assignment only.
std::vector<int> hima(const Vector& x, const Matrix& M, const Vector& y,
                      const HimaConfig& cfg, std::uint64_t seed,
                      HimaDiagnostics* diag = nullptr);

}  // namespace medfilter
