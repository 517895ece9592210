#include "medfilter/simgen.hpp"

#include <cmath>

namespace medfilter {

namespace {

// Suppression fixture, order X, M1, M2, Y (already unit-diagonal).
const double kA1[4][4] = {
    {1.000, -0.40, 0.4, -0.064},
    {-0.400, 1.00, -0.6, 0.256},
    {0.400, -0.60, 1.0, 0.000},
    {-0.064, 0.26, 0.0, 1.000},
};

// Noise-in-alpha fixture, order X, M1..M16, Y; var(Y) = 0.18.
const double kA2[18][18] = {
    {1.00, 0.30, -0.800, -0.800, 0.80, -0.4000, -0.400, 0.400, 0.400, 0.400, -0.400, 0.400, 0.400, 0.4000, -0.400, -0.400, 0.400, 0.090},
    {0.30, 1.00, -0.243, -0.259, 0.33, -0.1682, -0.137, 0.147, 0.181, 0.177, -0.244, 0.124, 0.142, 0.1890, -0.227, -0.152, 0.166, 0.300},
    {-0.80, -0.24, 1.000, 0.650, -0.64, 0.3135, 0.292, -0.274, -0.340, -0.319, 0.316, -0.334, -0.348, -0.3931, 0.351, 0.315, -0.353, -0.073},
    {-0.80, -0.26, 0.650, 1.000, -0.67, 0.3729, 0.306, -0.309, -0.283, -0.319, 0.316, -0.293, -0.345, -0.2953, 0.311, 0.330, -0.318, -0.078},
    {0.80, 0.33, -0.644, -0.675, 1.00, -0.3311, -0.329, 0.339, 0.314, 0.328, -0.332, 0.259, 0.342, 0.3596, -0.345, -0.294, 0.310, 0.100},
    {-0.40, -0.17, 0.314, 0.373, -0.33, 1.0000, 0.249, -0.159, -0.196, -0.212, 0.220, -0.155, -0.218, -0.0024, 0.133, 0.244, -0.165, -0.050},
    {-0.40, -0.14, 0.292, 0.306, -0.33, 0.2486, 1.000, -0.146, -0.298, -0.195, 0.045, -0.203, -0.261, -0.2198, 0.222, 0.016, -0.169, -0.041},
    {0.40, 0.15, -0.274, -0.309, 0.34, -0.1589, -0.146, 1.000, 0.152, 0.227, -0.201, 0.025, 0.070, 0.1157, -0.150, -0.150, 0.170, 0.044},
    {0.40, 0.18, -0.340, -0.283, 0.31, -0.1963, -0.298, 0.152, 1.000, 0.180, -0.014, 0.204, 0.325, 0.1817, -0.156, -0.146, 0.317, 0.054},
    {0.40, 0.18, -0.319, -0.319, 0.33, -0.2118, -0.195, 0.227, 0.180, 1.000, -0.175, -0.027, 0.249, 0.1384, -0.226, -0.132, 0.064, 0.053},
    {-0.40, -0.24, 0.316, 0.316, -0.33, 0.2199, 0.045, -0.201, -0.014, -0.175, 1.000, -0.120, -0.127, -0.1484, 0.091, 0.175, -0.124, -0.073},
    {0.40, 0.12, -0.334, -0.293, 0.26, -0.1547, -0.203, 0.025, 0.204, -0.027, -0.120, 1.000, 0.161, 0.1668, -0.257, -0.167, 0.242, 0.037},
    {0.40, 0.14, -0.348, -0.345, 0.34, -0.2183, -0.261, 0.070, 0.325, 0.249, -0.127, 0.161, 1.000, 0.1782, 0.025, -0.222, 0.179, 0.043},
    {0.40, 0.19, -0.393, -0.295, 0.36, -0.0024, -0.220, 0.116, 0.182, 0.138, -0.148, 0.167, 0.178, 1.0000, -0.295, -0.036, 0.210, 0.057},
    {-0.40, -0.23, 0.351, 0.311, -0.35, 0.1333, 0.222, -0.150, -0.156, -0.226, 0.091, -0.257, 0.025, -0.2949, 1.000, 0.124, -0.148, -0.068},
    {-0.40, -0.15, 0.315, 0.330, -0.29, 0.2437, 0.016, -0.150, -0.146, -0.132, 0.175, -0.167, -0.222, -0.0365, 0.124, 1.000, -0.196, -0.046},
    {0.40, 0.17, -0.353, -0.318, 0.31, -0.1654, -0.169, 0.170, 0.317, 0.064, -0.124, 0.242, 0.179, 0.2099, -0.148, -0.196, 1.000, 0.050},
    {0.09, 0.30, -0.073, -0.078, 0.10, -0.0505, -0.041, 0.044, 0.054, 0.053, -0.073, 0.037, 0.043, 0.0567, -0.068, -0.046, 0.050, 0.180},
};

// Noise-in-beta fixture, order X, M1..M16, Y; var(Y) = 10.17.
const double kA3[18][18] = {
    {1.00, 0.3000, 0.0000, 0.0000, 0.000, 0.0000, 0.000, 0.0000, 0.0000, 0.0000, 0.000, 0.0000, 0.000, 0.0000, 0.0000, 0.0000, 0.0000, 0.09},
    {0.30, 1.0000, -0.0096, -0.0517, 0.255, -0.0574, -0.020, 0.0319, 0.0728, 0.0680, -0.148, 0.0043, 0.027, 0.0821, -0.1275, -0.0381, 0.0551, 0.85},
    {0.00, -0.0096, 1.0000, 0.0789, -0.028, -0.0215, -0.091, 0.1532, -0.0647, 0.0034, -0.014, -0.0479, -0.091, -0.2418, 0.1037, -0.0179, -0.1095, -1.03},
    {0.00, -0.0517, 0.0789, 1.0000, -0.268, 0.1749, -0.047, 0.0355, 0.1234, 0.0038, -0.013, 0.0889, -0.084, 0.0816, -0.0292, 0.0329, 0.0070, -1.04},
    {0.00, 0.2552, -0.0278, -0.2675, 1.000, -0.0368, -0.029, 0.0619, -0.0183, 0.0266, -0.038, -0.2009, 0.073, 0.1311, -0.0840, 0.0863, -0.0343, 1.17},
    {0.00, -0.0574, -0.0215, 0.1749, -0.037, 1.0000, 0.126, 0.0016, -0.0515, -0.0733, 0.085, 0.0076, -0.083, 0.2233, -0.0378, 0.1186, -0.0077, -0.68},
    {0.00, -0.0204, -0.0912, -0.0473, -0.029, 0.1256, 1.000, 0.0196, -0.1951, -0.0490, -0.163, -0.0613, -0.143, -0.0847, 0.0883, -0.2037, -0.0122, -0.47},
    {0.00, 0.0319, 0.1532, 0.0355, 0.062, 0.0016, 0.020, 1.0000, -0.0112, 0.0949, -0.058, -0.1907, -0.127, -0.0627, 0.0146, 0.0145, 0.0137, 0.20},
    {0.00, 0.0728, -0.0647, 0.1234, -0.018, -0.0515, -0.195, -0.0112, 1.0000, 0.0281, 0.207, 0.0624, 0.233, 0.0307, 0.0051, 0.0191, 0.2226, 0.59},
    {0.00, 0.0680, 0.0034, 0.0038, 0.027, -0.0733, -0.049, 0.0949, 0.0281, 1.0000, -0.021, -0.2649, 0.126, -0.0306, -0.0941, 0.0397, -0.1354, 0.44},
    {0.00, -0.1482, -0.0140, -0.0132, -0.038, 0.0849, -0.163, -0.0585, 0.2070, -0.0210, 1.000, 0.0572, 0.046, 0.0164, -0.0971, 0.0210, 0.0509, -0.27},
    {0.00, 0.0043, -0.0479, 0.0889, -0.201, 0.0076, -0.061, -0.1907, 0.0624, -0.2649, 0.057, 1.0000, 0.002, 0.0097, -0.1377, -0.0093, 0.1163, 0.16},
    {0.00, 0.0267, -0.0913, -0.0842, 0.073, -0.0826, -0.143, -0.1274, 0.2333, 0.1260, 0.046, 0.0020, 1.000, 0.0258, 0.2620, -0.0883, 0.0270, 0.72},
    {0.00, 0.0821, -0.2418, 0.0816, 0.131, 0.2233, -0.085, -0.0627, 0.0307, -0.0306, 0.016, 0.0097, 0.026, 1.0000, -0.1913, 0.1750, 0.0707, 0.62},
    {0.00, -0.1275, 0.1037, -0.0292, -0.084, -0.0378, 0.088, 0.0146, 0.0051, -0.0941, -0.097, -0.1377, 0.262, -0.1913, 1.0000, -0.0505, 0.0168, -0.58},
    {0.00, -0.0381, -0.0179, 0.0329, 0.086, 0.1186, -0.204, 0.0145, 0.0191, 0.0397, 0.021, -0.0093, -0.088, 0.1750, -0.0505, 1.0000, -0.0510, -0.27},
    {0.00, 0.0551, -0.1095, 0.0070, -0.034, -0.0077, -0.012, 0.0137, 0.2226, -0.1354, 0.051, 0.1163, 0.027, 0.0707, 0.0168, -0.0510, 1.0000, 0.60},
    {0.09, 0.8462, -1.0314, -1.0374, 1.169, -0.6790, -0.468, 0.1981, 0.5929, 0.4422, -0.272, 0.1592, 0.724, 0.6195, -0.5760, -0.2686, 0.5984, 10.17},
};

template <long K>
Matrix load_symmetrized(const double (&raw)[K][K]) {
  Matrix m(K, K);
  for (long i = 0; i < K; ++i)
    for (long j = 0; j < K; ++j) m(i, j) = raw[i][j];
  return (m + m.transpose()) / 2.0;
}

// Symmetric square root with the shared PSD-repair policy: eigenvalues in
// [-1e-10, 0) clip to 0, anything lower is an error.
Matrix psd_sqrt(const Matrix& s, const char* what) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  Vector ev = es.eigenvalues();
  for (long i = 0; i < ev.size(); ++i) {
    if (ev[i] < -1e-10) throw NotPSD(what);
    if (ev[i] < 0.0) ev[i] = 0.0;
  }
  return es.eigenvectors() * ev.array().sqrt().matrix().asDiagonal() *
         es.eigenvectors().transpose();
}

// Standard normal fill in a fixed column-major draw order.
Matrix normal_matrix(long n, long k, RngStream& rng) {
  Matrix z(n, k);
  for (long j = 0; j < k; ++j)
    for (long i = 0; i < n; ++i) z(i, j) = rng.normal();
  return z;
}

Vector normal_vector(long n, RngStream& rng) {
  Vector v(n);
  for (long i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

struct SignalBlock {
  long size;
  double rho, rx, ry;
};

std::vector<SignalBlock> signal_blocks(const BlockParams& b) {
  return {{b.n_true, b.rho_m, b.r_xm, b.r_my},
          {b.n_A, b.rho_a, b.r_xa, 0.0},
          {b.n_B, b.rho_b, 0.0, b.r_yb}};
}

// Residual covariance of (x, y) given all block columns. Each block's
// columns enter only through their sum t_k, var(t_k) = K(1 + (K-1) rho);
// a degenerate sum (validated to carry no x/y link) contributes nothing.
Eigen::Matrix2d xy_residual_cov(const BlockParams& b) {
  Eigen::Matrix2d s;
  s << 1.0, b.r_xy, b.r_xy, 1.0;
  for (const auto& blk : signal_blocks(b)) {
    if (blk.size == 0) continue;
    double d = 1.0 + static_cast<double>(blk.size - 1) * blk.rho;
    if (d <= 1e-12) continue;
    double k = static_cast<double>(blk.size);
    s(0, 0) -= k * blk.rx * blk.rx / d;
    s(1, 1) -= k * blk.ry * blk.ry / d;
    s(0, 1) -= k * blk.rx * blk.ry / d;
  }
  s(1, 0) = s(0, 1);
  return s;
}

void validate_blocks(const BlockParams& b) {
  if (b.n_true < 0 || b.n_A < 0 || b.n_B < 0 || b.n_I < 0)
    throw ConfigError("block sizes must be nonnegative");
  if (b.n_true + b.n_A + b.n_B + b.n_I < 1)
    throw ConfigError("high-dimensional condition needs at least one column");
  for (const auto& blk : signal_blocks(b)) {
    if (blk.size == 0) continue;
    if (std::abs(blk.rho) > 1.0)
      throw ConfigError("within-block correlation must lie in [-1, 1]");
    if (std::abs(blk.rx) > 1.0 || std::abs(blk.ry) > 1.0)
      throw ConfigError("block cross-correlations must lie in [-1, 1]");
    // Equicorrelation eigenvalues are 1 - rho and 1 + (K-1) rho; a negative
    // rho is fine only while the column-sum eigenvalue stays nonnegative.
    double d = 1.0 + static_cast<double>(blk.size - 1) * blk.rho;
    if (d < -1e-12)
      throw NotPSD("within-block correlation of the block structure");
    if (d <= 1e-12 && (blk.rx != 0.0 || blk.ry != 0.0))
      throw NotPSD("x/y links to a block whose column sum is degenerate");
  }
  if (std::abs(b.r_xy) > 1.0)
    throw ConfigError("r_xy must lie in [-1, 1]");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(xy_residual_cov(b));
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw NotPSD("(x, y) residual covariance of the block structure");
}

}  // namespace

Matrix fixture_covariance(FixtureName name) {
  switch (name) {
    case FixtureName::Suppression:
      return load_symmetrized(kA1);
    case FixtureName::NoiseAlpha:
      return load_symmetrized(kA2);
    case FixtureName::NoiseBeta:
      return load_symmetrized(kA3);
  }
  throw ConfigError("unknown fixture");
}

Matrix implied_covariance(const PathModel& paths) {
  const long P = paths.alpha.size();
  if (paths.beta.size() != P)
    throw DimensionMismatch("implied_covariance: alpha/beta lengths differ");
  if (paths.resid_cov_m.rows() != P || paths.resid_cov_m.cols() != P)
    throw DimensionMismatch("implied_covariance: resid_cov_m must be P x P");
  if (paths.var_e_y < 0.0)
    throw ConfigError("implied_covariance: negative outcome residual variance");

  Matrix resid = (paths.resid_cov_m + paths.resid_cov_m.transpose()) / 2.0;
  const long k = P + 2;
  Matrix s = Matrix::Zero(k, k);
  s(0, 0) = 1.0;
  for (long p = 0; p < P; ++p) {
    s(0, 1 + p) = s(1 + p, 0) = paths.alpha[p];
    s(1 + p, 1 + p) = 1.0;  // alpha_p^2 + (1 - alpha_p^2)
    for (long q = 0; q < p; ++q) {
      double c = paths.alpha[p] * paths.alpha[q] + resid(p, q);
      s(1 + p, 1 + q) = s(1 + q, 1 + p) = c;
    }
  }
  // y = tau x + beta' M + e_Y: coefficient vector over (x, M).
  Vector c(P + 1);
  c[0] = paths.tau;
  c.tail(P) = paths.beta;
  Vector cov_y = s.topLeftCorner(P + 1, P + 1) * c;
  double var_y = c.dot(cov_y) + paths.var_e_y;
  if (var_y <= 0.0) throw NotPSD("implied outcome variance not positive");
  s.block(0, k - 1, P + 1, 1) = cov_y;
  s.block(k - 1, 0, 1, P + 1) = cov_y.transpose();
  s(k - 1, k - 1) = var_y;

  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  if (es.eigenvalues().minCoeff() < -1e-8)
    throw NotPSD("implied covariance");
  // Rescale Y to unit variance; x and mediators are unit by construction.
  double sd_y = std::sqrt(var_y);
  s.row(k - 1) /= sd_y;
  s.col(k - 1) /= sd_y;
  return s;
}

CovarianceSpec CovarianceSpec::explicit_matrix(Matrix m) {
  if (m.rows() != m.cols() || m.rows() < 2)
    throw DimensionMismatch("explicit covariance must be square, dim >= 2");
  CovarianceSpec s;
  s.kind = Kind::ExplicitMatrix;
  s.matrix = std::move(m);
  return s;
}

CovarianceSpec CovarianceSpec::path_model(PathModel p) {
  CovarianceSpec s;
  s.kind = Kind::PathModel;
  s.matrix = implied_covariance(p);  // validates eagerly
  s.paths = std::move(p);
  return s;
}

CovarianceSpec CovarianceSpec::block_highdim(BlockParams b) {
  validate_blocks(b);
  CovarianceSpec s;
  s.kind = Kind::BlockHighDim;
  s.blocks = b;
  return s;
}

long CovarianceSpec::dim() const {
  if (kind == Kind::BlockHighDim)
    return blocks.n_true + blocks.n_A + blocks.n_B + blocks.n_I + 2;
  return matrix.rows();
}

Matrix CovarianceSpec::dense() const {
  if (kind != Kind::BlockHighDim) return matrix;
  const BlockParams& b = blocks;
  const long k = dim();
  Matrix s = Matrix::Identity(k, k);
  s(0, k - 1) = s(k - 1, 0) = b.r_xy;
  long off = 1;
  for (const auto& blk : signal_blocks(b)) {
    for (long i = 0; i < blk.size; ++i) {
      s(0, off + i) = s(off + i, 0) = blk.rx;
      s(k - 1, off + i) = s(off + i, k - 1) = blk.ry;
      for (long j = 0; j < i; ++j)
        s(off + i, off + j) = s(off + j, off + i) = blk.rho;
    }
    off += blk.size;
  }
  return s;
}

CovarianceSpec block_highdim_cov(long n_true, long n_A, long n_B, long n_I,
                                 BlockParams params) {
  params.n_true = n_true;
  params.n_A = n_A;
  params.n_B = n_B;
  params.n_I = n_I;
  return CovarianceSpec::block_highdim(params);
}

Matrix exact_correlation_sample(const Matrix& target, long n, RngStream& rng) {
  const long k = target.rows();
  if (target.cols() != k) throw DimensionMismatch("target must be square");
  for (long i = 0; i < k; ++i)
    if (std::abs(target(i, i) - 1.0) > 1e-8)
      throw ConfigError("exact_correlation_sample needs a correlation matrix");
  if (n <= k + 1) throw SampleTooSmall(n, k);

  Matrix tsqrt = psd_sqrt(target, "exact_correlation_sample target");

  Matrix z = normal_matrix(n, k, rng);
  z.rowwise() -= z.colwise().mean();
  Matrix sample_cov = z.transpose() * z / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Matrix> es(sample_cov);
  if (es.eigenvalues().minCoeff() <=
      1e-12 * std::max(1.0, es.eigenvalues().maxCoeff()))
    throw RankDeficient("degenerate normal draw in exact_correlation_sample");
  Matrix whiten = es.eigenvectors() *
                  es.eigenvalues().array().rsqrt().matrix().asDiagonal() *
                  es.eigenvectors().transpose();
  return z * whiten * tsqrt;
}

Matrix mvn_sample(const CovarianceSpec& cov, long n, RngStream& rng) {
  if (n < 1) throw ConfigError("mvn_sample needs n >= 1");
  if (cov.kind != CovarianceSpec::Kind::BlockHighDim) {
    Matrix root = psd_sqrt(cov.matrix, "mvn_sample covariance");
    return normal_matrix(n, cov.dim(), rng) * root;
  }

  const BlockParams& b = cov.blocks;
  validate_blocks(b);
  const long P = b.n_true + b.n_A + b.n_B + b.n_I;
  Matrix out(n, P + 2);

  // Blocks first (mutually independent). Nonnegative rho uses a shared
  // factor: col = sqrt(rho)*shared + sqrt(1-rho)*own. Negative rho uses the
  // symmetric equicorrelation root instead: col = sqrt(1-rho)*(z - mean) +
  // sqrt(1+(K-1)rho)*mean over iid draws z. Draw order: per signal block,
  // shared factor (when rho > 0) then columns; then the white noise block;
  // then the (x, y) residual pair.
  long off = 1;
  std::vector<Vector> block_sums;
  for (const auto& blk : signal_blocks(b)) {
    Vector t = Vector::Zero(n);
    if (blk.size > 0 && blk.rho >= 0.0) {
      Vector shared =
          blk.rho > 0.0 ? normal_vector(n, rng) : Vector::Zero(n);
      double ws = blk.rho > 0.0 ? std::sqrt(blk.rho) : 0.0;
      double wi = std::sqrt(1.0 - blk.rho);
      for (long j = 0; j < blk.size; ++j) {
        out.col(off + j) = ws * shared + wi * normal_vector(n, rng);
        t += out.col(off + j);
      }
    } else if (blk.size > 0) {
      double d = 1.0 + static_cast<double>(blk.size - 1) * blk.rho;
      double wc = std::sqrt(1.0 - blk.rho);
      double wm = std::sqrt(std::max(d, 0.0));
      Vector mean = Vector::Zero(n);
      for (long j = 0; j < blk.size; ++j) {
        out.col(off + j) = normal_vector(n, rng);
        mean += out.col(off + j);
      }
      mean /= static_cast<double>(blk.size);
      for (long j = 0; j < blk.size; ++j) {
        out.col(off + j) = wc * (out.col(off + j) - mean) + wm * mean;
        t += out.col(off + j);
      }
    }
    block_sums.push_back(std::move(t));
    off += blk.size;
  }
  for (long j = 0; j < b.n_I; ++j) out.col(off + j) = normal_vector(n, rng);

  // (x, y) given the blocks: regression on the block sums plus a bivariate
  // residual with the Schur-complement covariance.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(xy_residual_cov(b));
  Eigen::Vector2d ev = es.eigenvalues();
  for (int i = 0; i < 2; ++i) {
    if (ev[i] < -1e-10) throw NotPSD("(x, y) residual covariance");
    if (ev[i] < 0.0) ev[i] = 0.0;
  }
  Eigen::Matrix2d rroot = es.eigenvectors() *
                          ev.array().sqrt().matrix().asDiagonal() *
                          es.eigenvectors().transpose();
  Vector zx = normal_vector(n, rng);
  Vector zy = normal_vector(n, rng);
  Vector x = rroot(0, 0) * zx + rroot(0, 1) * zy;
  Vector y = rroot(1, 0) * zx + rroot(1, 1) * zy;
  auto blks = signal_blocks(b);
  for (std::size_t i = 0; i < blks.size(); ++i) {
    if (blks[i].size == 0) continue;
    double d = 1.0 + static_cast<double>(blks[i].size - 1) * blks[i].rho;
    if (d <= 1e-12) continue;  // degenerate sum, no x/y link (validated)
    x += (blks[i].rx / d) * block_sums[i];
    y += (blks[i].ry / d) * block_sums[i];
  }
  out.col(0) = x;
  out.col(P + 1) = y;
  return out;
}

PathModel suppression_paths() {
  PathModel p;
  p.alpha = Vector(2);
  p.alpha << -0.4, 0.4;
  p.beta = Vector(2);
  p.beta << 0.8, 0.48;
  p.tau = 0.0;
  p.resid_cov_m = Matrix::Zero(2, 2);
  p.resid_cov_m(0, 1) = p.resid_cov_m(1, 0) = -0.44;
  p.var_e_y = 3.5904;
  return p;
}

PathModel combined_paths() {
  // Suppression pair plus 8 alpha-only and 7 beta-only noise columns whose
  // path values follow the two noise fixtures' X-row / Y-row patterns;
  // noise residuals mutually independent and independent of the pair's.
  const double a_noise[8] = {-0.8, -0.8, 0.8, -0.4, -0.4, 0.4, 0.4, 0.4};
  const double b_noise[7] = {-1.031, -1.039, 1.169, -0.679, -0.469, 0.199, 0.591};
  const long P = 2 + 8 + 7;
  PathModel p;
  p.alpha = Vector::Zero(P);
  p.beta = Vector::Zero(P);
  p.alpha[0] = -0.4;
  p.alpha[1] = 0.4;
  p.beta[0] = 0.8;
  p.beta[1] = 0.48;
  for (long j = 0; j < 8; ++j) p.alpha[2 + j] = a_noise[j];
  for (long j = 0; j < 7; ++j) p.beta[10 + j] = b_noise[j];
  p.tau = 0.0;
  p.resid_cov_m = Matrix::Zero(P, P);
  p.resid_cov_m(0, 1) = p.resid_cov_m(1, 0) = -0.44;
  p.var_e_y = 3.5904;
  return p;
}

std::vector<std::string> shipped_condition_names() {
  return {"suppression", "noise-alpha", "noise-beta", "combined", "highdim"};
}

SimCondition shipped_condition(const std::string& name) {
  SimCondition c;
  c.name = name;
  if (name == "suppression") {
    c.cov = CovarianceSpec::explicit_matrix(
        cov2cor(fixture_covariance(FixtureName::Suppression)));
    c.true_mediators = {0, 1};
  } else if (name == "noise-alpha") {
    c.cov = CovarianceSpec::explicit_matrix(
        cov2cor(fixture_covariance(FixtureName::NoiseAlpha)));
    c.true_mediators = {0};
  } else if (name == "noise-beta") {
    c.cov = CovarianceSpec::explicit_matrix(
        cov2cor(fixture_covariance(FixtureName::NoiseBeta)));
    c.true_mediators = {0};
  } else if (name == "combined") {
    c.cov = CovarianceSpec::path_model(combined_paths());
    c.true_mediators = {0, 1};
  } else if (name == "highdim") {
    c.cov = CovarianceSpec::block_highdim(BlockParams{});
    c.n_min = c.n_max = 100;
    c.true_mediators.resize(static_cast<std::size_t>(c.cov.blocks.n_true));
    for (std::size_t i = 0; i < c.true_mediators.size(); ++i)
      c.true_mediators[i] = static_cast<int>(i);
    c.exact_correlation = false;
  } else {
    std::string names;
    for (const auto& s : shipped_condition_names())
      names += (names.empty() ? "" : ", ") + s;
    throw ConfigError("unknown condition '" + name + "'; available: " + names);
  }
  return c;
}

}  // namespace medfilter
