#include "medfilter/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "medfilter/rng.hpp"

namespace medfilter {

std::vector<int> filter_method(const Vector& x, const Matrix& M,
                               const Vector& y, const DecisionSpec& spec,
                               DecideDiagnostics* diag) {
  if (M.rows() != x.size() || y.size() != x.size())
    throw DimensionMismatch("filter_method: row counts differ");
  std::vector<int> out;
  for (long p = 0; p < M.cols(); ++p)
    if (decide(spec, x, M.col(p), y, diag)) out.push_back(static_cast<int>(p));
  return out;
}

double soft_threshold(double z, double gamma) {
  if (gamma < 0.0) throw ConfigError("soft_threshold: gamma must be >= 0");
  double mag = std::abs(z) - gamma;
  if (mag <= 0.0) return 0.0;
  return z > 0.0 ? mag : -mag;
}

LassoFit lasso_cd(const Matrix& design, const Vector& y, double lambda,
                  const std::vector<std::uint8_t>& penalize, double tol,
                  long max_iter) {
  const long n = design.rows();
  const long k = design.cols();
  if (y.size() != n) throw DimensionMismatch("lasso_cd: rows(design) != len(y)");
  if (lambda < 0.0) throw ConfigError("lasso_cd: lambda must be >= 0");
  if (!penalize.empty() && static_cast<long>(penalize.size()) != k)
    throw DimensionMismatch("lasso_cd: penalize mask length != cols");
  if (!design.allFinite() || !y.allFinite()) throw NonFiniteInput("lasso_cd");

  auto penalized = [&](long j) {
    return penalize.empty() || penalize[static_cast<std::size_t>(j)] != 0;
  };

  Vector colsq(k);
  for (long j = 0; j < k; ++j) colsq[j] = design.col(j).squaredNorm();
  const double dn = static_cast<double>(n);

  LassoFit fit;
  fit.lambda = lambda;
  fit.coefficients = Vector::Zero(k);
  Vector r = y;

  for (long iter = 1; iter <= max_iter; ++iter) {
    fit.n_iterations = iter;
    double max_delta = 0.0;
    for (long j = 0; j < k; ++j) {
      double xx = colsq[j] / dn;
      if (xx == 0.0) continue;  // zero column keeps coefficient 0
      double z = fit.coefficients[j] * xx + design.col(j).dot(r) / dn;
      double c_new = penalized(j) ? soft_threshold(z, lambda) / xx : z / xx;
      double delta = c_new - fit.coefficients[j];
      if (delta != 0.0) {
        r -= delta * design.col(j);
        fit.coefficients[j] = c_new;
        max_delta = std::max(max_delta, std::abs(delta));
      }
    }
    if (max_delta < tol) {
      fit.converged = true;
      break;
    }
  }

  for (long j = 0; j < k; ++j) {
    if (fit.coefficients[j] != 0.0) fit.active_set.push_back(static_cast<int>(j));
    if (colsq[j] == 0.0) continue;
    double g = design.col(j).dot(r) / dn;
    double viol;
    if (!penalized(j))
      viol = std::abs(g);
    else if (fit.coefficients[j] == 0.0)
      viol = std::max(0.0, std::abs(g) - lambda);
    else
      viol = std::abs(g - lambda * (fit.coefficients[j] > 0.0 ? 1.0 : -1.0));
    fit.kkt_residual = std::max(fit.kkt_residual, viol);
  }
  return fit;
}

namespace {

// Screening step: indices of the d largest |corr(M_p, y)|, ascending order.
// Constant columns rank last (correlation treated as 0) with a diagnostic.
std::vector<int> screen_columns(const Matrix& M, const Vector& y, long d,
                                HimaDiagnostics* diag) {
  const long P = M.cols();
  std::vector<double> score(static_cast<std::size_t>(P), 0.0);
  for (long p = 0; p < P; ++p) {
    try {
      score[static_cast<std::size_t>(p)] = std::abs(pearson(M.col(p), y));
    } catch (const Error& e) {
      if (diag) diag->messages.push_back("screen: column " + std::to_string(p) +
                                         ": " + e.what());
    }
  }
  std::vector<int> order(static_cast<std::size_t>(P));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return score[static_cast<std::size_t>(a)] > score[static_cast<std::size_t>(b)];
  });
  order.resize(static_cast<std::size_t>(std::min(d, P)));
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace

std::vector<int> hima(const Vector& x, const Matrix& M, const Vector& y,
                      const HimaConfig& cfg, std::uint64_t seed,
                      HimaDiagnostics* diag) {
  const long n = x.size();
  const long P = M.cols();
  if (M.rows() != n || y.size() != n)
    throw DimensionMismatch("hima: row counts differ");
  if (n < 8) throw SampleTooSmall(n, 3);
  if (!(cfg.alpha_level > 0.0 && cfg.alpha_level < 1.0))
    throw ConfigError("hima: alpha_level must lie in (0, 1)");
  if (cfg.screen_count > P)
    throw ConfigError("hima: screen_count exceeds the number of mediators");

  long d = cfg.screen_count > 0
               ? cfg.screen_count
               : std::min<long>(
                     P, static_cast<long>(std::ceil(
                            2.0 * static_cast<double>(n) /
                            std::log(static_cast<double>(n)))));
  std::vector<int> keep = screen_columns(M, y, d, diag);
  if (diag) diag->n_screened = static_cast<long>(keep.size());
  if (keep.empty()) return {};

  const long ks = static_cast<long>(keep.size());
  Matrix design(n, 1 + ks);
  design.col(0) = x;
  for (long j = 0; j < ks; ++j)
    design.col(1 + j) = M.col(keep[static_cast<std::size_t>(j)]);
  design = standardize(design);
  Vector yc = y.array() - y.mean();

  std::vector<std::uint8_t> penal(static_cast<std::size_t>(1 + ks), 1);
  penal[0] = 0;  // exposure is never penalized

  std::vector<double> grid = cfg.lambda_grid;
  if (grid.empty()) {
    double lam_max = 1e-10;
    for (long j = 1; j <= ks; ++j)
      lam_max = std::max(lam_max, std::abs(design.col(j).dot(yc)) /
                                      static_cast<double>(n));
    const int m = 50;
    for (int i = 0; i < m; ++i)
      grid.push_back(lam_max *
                     std::pow(10.0, -2.0 * static_cast<double>(i) /
                                        static_cast<double>(m - 1)));
  } else {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid[i] <= 0.0) throw ConfigError("hima: lambda grid must be positive");
      if (i > 0 && grid[i] >= grid[i - 1])
        throw ConfigError("hima: lambda grid must be strictly descending");
    }
  }

  long folds = cfg.cv_folds;
  if (folds < 2) throw ConfigError("hima: cv_folds must be >= 2");
  if (folds > n) {
    folds = n;
    if (diag)
      diag->messages.push_back("cv folds reduced to n = " + std::to_string(n));
  }
  if (diag) diag->cv_folds_used = folds;

  // Fold of row i = perm[i] mod folds, with a seed-derived permutation.
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  RngStream rng = RngStream::derived(seed, 0);
  rng.shuffle(perm);
  std::vector<int> fold(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i)
    fold[static_cast<std::size_t>(i)] =
        perm[static_cast<std::size_t>(i)] % static_cast<int>(folds);

  std::vector<double> cv_err(grid.size(), 0.0);
  for (long f = 0; f < folds; ++f) {
    std::vector<long> tr, te;
    for (long i = 0; i < n; ++i)
      (fold[static_cast<std::size_t>(i)] == f ? te : tr).push_back(i);
    if (te.empty() || tr.size() < 2) continue;
    Matrix dtr(static_cast<long>(tr.size()), 1 + ks);
    Vector ytr(static_cast<long>(tr.size()));
    for (std::size_t i = 0; i < tr.size(); ++i) {
      dtr.row(static_cast<long>(i)) = design.row(tr[i]);
      ytr[static_cast<long>(i)] = yc[tr[i]];
    }
    for (std::size_t li = 0; li < grid.size(); ++li) {
      LassoFit lf = lasso_cd(dtr, ytr, grid[li], penal);
      for (long i : te) {
        double pred = design.row(i).dot(lf.coefficients);
        double e = yc[i] - pred;
        cv_err[li] += e * e;
      }
    }
  }
  std::size_t best = static_cast<std::size_t>(
      std::min_element(cv_err.begin(), cv_err.end()) - cv_err.begin());
  if (diag) diag->lambda_chosen = grid[best];

  LassoFit final_fit = lasso_cd(design, yc, grid[best], penal);
  std::vector<int> survivors;
  for (long j = 1; j <= ks; ++j)
    if (std::abs(final_fit.coefficients[j]) > 1e-10)
      survivors.push_back(keep[static_cast<std::size_t>(j - 1)]);
  if (diag) diag->n_survivors = static_cast<long>(survivors.size());
  if (survivors.empty()) return {};

  // Joint significance at the Bonferroni-adjusted level; beta p-values from
  // one multivariate refit on all survivors.
  const long ns = static_cast<long>(survivors.size());
  const double thr = cfg.alpha_level / static_cast<double>(ns);
  std::vector<int> out;
  try {
    Matrix refit(n, 2 + ns);
    refit.col(0).setOnes();
    refit.col(1) = x;
    for (long j = 0; j < ns; ++j)
      refit.col(2 + j) = M.col(survivors[static_cast<std::size_t>(j)]);
    OlsFit yfit = ols(refit, y);

    Matrix d1(n, 2);
    d1.col(0).setOnes();
    d1.col(1) = x;
    for (long j = 0; j < ns; ++j) {
      int p = survivors[static_cast<std::size_t>(j)];
      OlsFit mfit = ols(d1, M.col(p));
      double ta = mfit.coefficients[1] / mfit.standard_errors[1];
      double tb = yfit.coefficients[2 + j] / yfit.standard_errors[2 + j];
      double pa = two_sided_t_p(ta, static_cast<double>(mfit.dof));
      double pb = two_sided_t_p(tb, static_cast<double>(yfit.dof));
      if (std::max(pa, pb) < thr) out.push_back(p);
    }
  } catch (const Error& e) {
    if (diag) diag->messages.push_back(std::string("significance step: ") +
                                       e.what());
    return {};
  }
  return out;
}

}  // namespace medfilter
