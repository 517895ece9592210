#pragma once

#include <Eigen/Dense>

#include "medfilter/errors.hpp"

namespace medfilter {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct OlsFit {
  Vector coefficients;
  Vector standard_errors;
  Vector residuals;
  long dof;  // n - k, k counting every design column
};

// Column means/sds with the n-1 denominator used throughout.
double sample_mean(const Vector& v);
double sample_sd(const Vector& v);

// Center and scale every column to mean 0, sd 1 (n-1 denominator).
// Throws ZeroVarianceColumn for constant columns, NonFiniteInput for NaN/inf.
Matrix standardize(const Matrix& m);
Vector standardize(const Vector& v);

// Least squares of y on the given design (caller supplies any intercept
// column). Standard errors from the classical unbiased-variance formula.
// Throws RankDeficient below a 1e-10 relative pivot tolerance and
// SampleTooSmall when rows <= cols (no residual dof).
OlsFit ols(const Matrix& design, const Vector& y);

// v minus its orthogonal projection onto span(conditioning), computed by
// rank-revealing QR (pivot tolerance 1e-10 relative); dependent columns are
// dropped, zero columns mean no-op.
Vector residualize(const Vector& v, const Matrix& conditioning);

// Residualize every column of V against the same conditioning set with a
// single factorization.
Matrix residualize_cols(const Matrix& V, const Matrix& conditioning);

double pearson(const Vector& a, const Vector& b);

// Covariance matrix to correlation matrix; requires positive diagonal.
Matrix cov2cor(const Matrix& cov);

}  // namespace medfilter
