#pragma once

#include <string>
#include <vector>

#include "medfilter/numcore.hpp"
#include "medfilter/rng.hpp"

namespace medfilter {
class RngStream;

enum class FixtureName { Suppression, NoiseAlpha, NoiseBeta };

// Verbatim transcription of the shipped marginal covariance fixtures,
// symmetrized as (A + A')/2. Variable order (X, M..., Y): 4x4 for
// Suppression, 18x18 for the two noise fixtures. Note the suppression
// fixture is already unit-diagonal; the noise fixtures carry a non-unit
// Y variance, use cov2cor before exact-correlation sampling.
Matrix fixture_covariance(FixtureName name);

// Linear path model over (X, M_1..M_P, Y):
//   M_p = alpha_p X + e_p,  var(e_p) = 1 - alpha_p^2 (unit mediators)
//   Y   = tau X + sum_p beta_p M_p + e_Y
struct PathModel {
  Vector alpha;
  Vector beta;
  double tau = 0.0;
  Matrix resid_cov_m;  // P x P; off-diagonals used, diagonals derived
  double var_e_y = 1.0;
};

// Model-implied correlation matrix of (X, M_1..M_P, Y); Y is rescaled to
// unit variance. Throws NotPSD when an eigenvalue falls below -1e-8.
Matrix implied_covariance(const PathModel& paths);

// Block layout for the high-dimensional condition: a true-mediator block M
// (linked to both X and Y), an X-only block A, a Y-only block B and a white
// noise block I; blocks mutually uncorrelated, constant within-block
// correlation. All numbers are configuration, not pinned targets.
struct BlockParams {
  long n_true = 10, n_A = 30, n_B = 30, n_I = 930;
  double r_xm = 0.25, r_my = 0.20, rho_m = 0.0;
  double r_xa = 0.15, rho_a = 0.5;
  double r_yb = 0.30, rho_b = 0.5;
  double r_xy = 0.30;
};

struct CovarianceSpec {
  enum class Kind { ExplicitMatrix, PathModel, BlockHighDim };
  Kind kind = Kind::ExplicitMatrix;
  Matrix matrix;       // ExplicitMatrix: correlation of (x, M..., y)
  PathModel paths;     // PathModel
  BlockParams blocks;  // BlockHighDim

  static CovarianceSpec explicit_matrix(Matrix m);
  static CovarianceSpec path_model(PathModel p);
  static CovarianceSpec block_highdim(BlockParams b);

  long dim() const;      // variable count including x and y
  long n_mediators() const { return dim() - 2; }
  // Dense correlation matrix (also how BlockHighDim is PSD-verified in
  // tests; sampling itself stays block-factored).
  Matrix dense() const;
};

// Validates block sizes/parameters and PSD-checks the implied structure
// analytically (per-block spectrum plus the 2x2 Schur complement of (x,y)
// given all blocks). Sizes given explicitly override params' sizes.
CovarianceSpec block_highdim_cov(long n_true, long n_A, long n_B, long n_I,
                                 BlockParams params);

// n x k sample whose *sample* correlation equals `target` exactly: draw
// standard normals, center, whiten by the inverse square root of their own
// sample covariance, then color with a symmetric square root of target.
// Requires a unit-diagonal PSD target and n > k + 1.
Matrix exact_correlation_sample(const Matrix& target, long n, RngStream& rng);

// Multivariate normal sample with the covariance described by `cov`.
// BlockHighDim is factored block by block (shared + idiosyncratic factors,
// then (x, y) conditionally on the block sums); the other kinds use a dense
// square root.
Matrix mvn_sample(const CovarianceSpec& cov, long n, RngStream& rng);

struct SimCondition {
  std::string name;
  CovarianceSpec cov;
  long n_min = 400, n_max = 600;
  long n_reps = 100;
  std::vector<int> true_mediators;
  bool exact_correlation = true;
};

// Shipped condition names: suppression, noise-alpha, noise-beta, combined,
// highdim. Throws ConfigError for unknown names (message lists valid ones).
SimCondition shipped_condition(const std::string& name);
std::vector<std::string> shipped_condition_names();

// Path models behind the shipped suppression / combined conditions.
PathModel suppression_paths();
PathModel combined_paths();

}  // namespace medfilter
