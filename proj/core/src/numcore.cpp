#include "medfilter/numcore.hpp"

#include <cmath>

namespace medfilter {

double sample_mean(const Vector& v) { return v.mean(); }

double sample_sd(const Vector& v) {
  const long n = v.size();
  if (n < 2) throw DimensionMismatch("sample_sd needs n >= 2");
  double m = v.mean();
  return std::sqrt((v.array() - m).square().sum() / static_cast<double>(n - 1));
}

static void check_finite(const Matrix& m, const char* where) {
  if (!m.allFinite()) throw NonFiniteInput(where);
}

Matrix standardize(const Matrix& m) {
  if (m.rows() < 2) throw DimensionMismatch("standardize needs n >= 2");
  check_finite(m, "standardize");
  Matrix out(m.rows(), m.cols());
  const double n1 = static_cast<double>(m.rows() - 1);
  for (long j = 0; j < m.cols(); ++j) {
    double mu = m.col(j).mean();
    Vector c = m.col(j).array() - mu;
    double sd = std::sqrt(c.squaredNorm() / n1);
    double scale = m.col(j).cwiseAbs().maxCoeff();
    if (sd == 0.0 || sd < 1e-14 * std::max(1.0, scale))
      throw ZeroVarianceColumn(j);
    out.col(j) = c / sd;
  }
  return out;
}

Vector standardize(const Vector& v) {
  return standardize(Matrix(v)).col(0);
}

OlsFit ols(const Matrix& design, const Vector& y) {
  const long n = design.rows();
  const long k = design.cols();
  if (n != y.size()) throw DimensionMismatch("ols: rows(design) != len(y)");
  if (k < 1) throw DimensionMismatch("ols: empty design");
  if (n <= k) throw SampleTooSmall(n, k);
  check_finite(design, "ols design");
  if (!y.allFinite()) throw NonFiniteInput("ols response");

  Eigen::ColPivHouseholderQR<Matrix> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < k) throw RankDeficient("pivot below tolerance in ols");

  OlsFit fit;
  fit.coefficients = qr.solve(y);
  fit.residuals = y - design * fit.coefficients;
  fit.dof = n - k;
  double sigma2 = fit.residuals.squaredNorm() / static_cast<double>(fit.dof);

  // (X'X)^{-1} = P R^{-1} R^{-T} P' from the pivoted factorization.
  Matrix R = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
  Matrix Rinv = R.triangularView<Eigen::Upper>().solve(Matrix::Identity(k, k));
  Matrix inner = Rinv * Rinv.transpose();
  Matrix xtx_inv = qr.colsPermutation() * inner *
                   qr.colsPermutation().transpose();
  fit.standard_errors = (sigma2 * xtx_inv.diagonal().array()).sqrt();
  return fit;
}

Matrix residualize_cols(const Matrix& V, const Matrix& conditioning) {
  if (conditioning.cols() == 0) return V;
  if (conditioning.rows() != V.rows())
    throw DimensionMismatch("residualize: row counts differ");
  check_finite(V, "residualize target");
  check_finite(conditioning, "residualize conditioning");

  Eigen::ColPivHouseholderQR<Matrix> qr(conditioning);
  qr.setThreshold(1e-10);
  const long r = qr.rank();
  if (r == 0) return V;
  // First r Householder reflectors span the retained column space.
  Matrix Q = qr.householderQ() * Matrix::Identity(V.rows(), r);
  return V - Q * (Q.transpose() * V);
}

Vector residualize(const Vector& v, const Matrix& conditioning) {
  return residualize_cols(Matrix(v), conditioning).col(0);
}

double pearson(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("pearson: lengths differ");
  if (a.size() < 2) throw DimensionMismatch("pearson needs n >= 2");
  if (!a.allFinite() || !b.allFinite()) throw NonFiniteInput("pearson");
  Vector ca = a.array() - a.mean();
  Vector cb = b.array() - b.mean();
  double na = ca.norm();
  double nb = cb.norm();
  if (na == 0.0) throw ZeroVarianceColumn(0);
  if (nb == 0.0) throw ZeroVarianceColumn(1);
  double r = ca.dot(cb) / (na * nb);
  return std::clamp(r, -1.0, 1.0);
}

Matrix cov2cor(const Matrix& cov) {
  if (cov.rows() != cov.cols()) throw DimensionMismatch("cov2cor: not square");
  Vector d = cov.diagonal();
  for (long i = 0; i < d.size(); ++i)
    if (!(d[i] > 0.0)) throw NotPSD("non-positive variance in cov2cor");
  Vector inv_sd = d.array().sqrt().inverse();
  return inv_sd.asDiagonal() * cov * inv_sd.asDiagonal();
}

}  // namespace medfilter
