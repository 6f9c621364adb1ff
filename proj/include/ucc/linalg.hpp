#pragma once

// Dense complex kernel: T_mn rotations, element nulling, cosine-sine
// decomposition and Haar sampling.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ucc/error.hpp"

namespace ucc {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Matrix2 = Eigen::Matrix2cd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kUnitarityTol = 1e-10;
inline constexpr double kNullingTol = 1e-12;
inline constexpr double kReconstructionTol = 1e-9;

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("matrix shapes differ: " + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()) + " vs " +
                         std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  }
  return max_abs(a - b);
}

/// max |(U^dagger U - 1)_ij|
inline double unitarity_error(const Matrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return max_abs(m.adjoint() * m - Matrix::Identity(m.rows(), m.cols()));
}

/// Maps an angle onto [0, 2pi).
inline double wrap_angle(double a) {
  double r = std::fmod(a, 2.0 * kPi);
  if (r < 0.0) r += 2.0 * kPi;
  if (r >= 2.0 * kPi) r = 0.0;
  return r;
}

/// Square complex matrix known to be unitary within `tolerance`.
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(Matrix m, double tolerance = kUnitarityTol)
      : m_(std::move(m)), tol_(tolerance) {
    if (m_.rows() < 1 || m_.rows() != m_.cols()) {
      throw DimensionError("unitary matrix must be square with n >= 1, got " +
                           std::to_string(m_.rows()) + "x" +
                           std::to_string(m_.cols()));
    }
    const double dev = unitarity_error(m_);
    if (!(dev <= tol_)) {
      throw NonUnitaryError(
          "matrix is not unitary: max|U^dagger U - 1| = " + std::to_string(dev),
          dev);
    }
  }

  static UnitaryMatrix identity(int n) {
    return UnitaryMatrix(Matrix::Identity(n, n));
  }

  int n() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double tolerance() const { return tol_; }

 private:
  Matrix m_;
  double tol_;
};

enum class Side { left, right };

/// One T_mn(theta, phi) factor, or its inverse. Mode indices are 0-based and
/// m < n. `side` records whether the factor was produced by a left or a right
/// multiplication during nulling.
struct GivensFactor {
  int m = 0;
  int n = 1;
  double theta = 0.0;
  double phi = 0.0;
  Side side = Side::right;
  bool inverted = false;

  bool operator==(const GivensFactor&) const = default;
};

/// 2x2 core [[e^{i phi} cos, -sin], [e^{i phi} sin, cos]] or its inverse.
inline Matrix2 givens_core(double theta, double phi, bool inverted = false) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const cplx e = std::polar(1.0, phi);
  Matrix2 t;
  if (!inverted) {
    t << e * c, -s, e * s, c;
  } else {
    t << std::conj(e) * c, std::conj(e) * s, -s, c;
  }
  return t;
}

inline Matrix2 givens_core(const GivensFactor& f) {
  return givens_core(f.theta, f.phi, f.inverted);
}

inline GivensFactor inverse(GivensFactor f) {
  f.inverted = !f.inverted;
  return f;
}

inline void check_factor_fits(const GivensFactor& f, int dim) {
  if (f.m < 0 || f.m >= f.n || f.n >= dim) {
    throw DimensionError("givens factor on modes (" + std::to_string(f.m) +
                         "," + std::to_string(f.n) +
                         ") does not fit in dimension " + std::to_string(dim));
  }
}

inline Matrix embed_givens(const GivensFactor& f, int dim) {
  check_factor_fits(f, dim);
  Matrix out = Matrix::Identity(dim, dim);
  const Matrix2 t = givens_core(f);
  out(f.m, f.m) = t(0, 0);
  out(f.m, f.n) = t(0, 1);
  out(f.n, f.m) = t(1, 0);
  out(f.n, f.n) = t(1, 1);
  return out;
}

/// u <- embed(core on rows m,n) * u
template <typename Derived>
void mix_rows(Eigen::MatrixBase<Derived>& u, int m, int n, const Matrix2& core) {
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    const cplx a = u(m, j);
    const cplx b = u(n, j);
    u(m, j) = core(0, 0) * a + core(0, 1) * b;
    u(n, j) = core(1, 0) * a + core(1, 1) * b;
  }
}

/// u <- u * embed(core on columns m,n)
template <typename Derived>
void mix_cols(Eigen::MatrixBase<Derived>& u, int m, int n, const Matrix2& core) {
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const cplx a = u(i, m);
    const cplx b = u(i, n);
    u(i, m) = a * core(0, 0) + b * core(1, 0);
    u(i, n) = a * core(0, 1) + b * core(1, 1);
  }
}

/// Which of the two mixed lines carries the entry being nulled.
enum class NullTarget { first, second };

namespace detail {

inline void check_pair(const Matrix& u, int m, int n, int line, bool rows) {
  const int dim_mix = static_cast<int>(rows ? u.rows() : u.cols());
  const int dim_line = static_cast<int>(rows ? u.cols() : u.rows());
  if (m < 0 || m >= n || n >= dim_mix || line < 0 || line >= dim_line) {
    throw DimensionError("nulling indices out of range: line " +
                         std::to_string(line) + ", pair (" + std::to_string(m) +
                         "," + std::to_string(n) + ")");
  }
}

inline double arg_or_zero(cplx z) { return z == cplx{} ? 0.0 : std::arg(z); }

}  // namespace detail

/// Finds T_mn such that (u * T_mn^{-1})(row, n) == 0 (or (row, m) for
/// NullTarget::first). Columns other than m and n are left untouched.
inline GivensFactor solve_null_right(const Matrix& u, int row, int m, int n,
                                     NullTarget target = NullTarget::second) {
  detail::check_pair(u, m, n, row, false);
  const cplx a = u(row, m);
  const cplx b = u(row, n);
  GivensFactor f{m, n, 0.0, 0.0, Side::right, true};
  if (target == NullTarget::second) {
    if (b == cplx{}) return f;
    f.theta = std::atan2(std::abs(b), std::abs(a));
    f.phi = a == cplx{} ? 0.0 : wrap_angle(std::arg(a) - std::arg(b) + kPi);
  } else {
    if (a == cplx{}) return f;
    f.theta = std::atan2(std::abs(a), std::abs(b));
    f.phi = b == cplx{} ? 0.0 : wrap_angle(std::arg(a) - std::arg(b));
  }
  return f;
}

/// Finds T_mn such that (T_mn * u)(m, col) == 0 (or (n, col) for
/// NullTarget::second). Rows other than m and n are left untouched.
inline GivensFactor solve_null_left(const Matrix& u, int col, int m, int n,
                                    NullTarget target = NullTarget::first) {
  detail::check_pair(u, m, n, col, true);
  const cplx a = u(m, col);
  const cplx b = u(n, col);
  GivensFactor f{m, n, 0.0, 0.0, Side::left, false};
  if (target == NullTarget::first) {
    if (a == cplx{}) return f;
    f.theta = std::atan2(std::abs(a), std::abs(b));
    f.phi = b == cplx{} ? 0.0 : wrap_angle(std::arg(b) - std::arg(a));
  } else {
    if (b == cplx{}) return f;
    f.theta = std::atan2(std::abs(b), std::abs(a));
    f.phi = a == cplx{} ? 0.0 : wrap_angle(std::arg(b) - std::arg(a) + kPi);
  }
  return f;
}

/// Multiplies `u` by the factor on the side it was solved for.
inline void apply_factor(Matrix& u, const GivensFactor& f) {
  if (f.side == Side::left) {
    mix_rows(u, f.m, f.n, givens_core(f));
  } else {
    mix_cols(u, f.m, f.n, givens_core(f));
  }
}

/// Real orthogonal 2m x 2m matrix [[C, S], [-S, C]] with C = diag(cos),
/// S = diag(sin).
inline RealMatrix cs_matrix(std::span<const double> thetas) {
  const auto m = static_cast<Eigen::Index>(thetas.size());
  RealMatrix s = RealMatrix::Zero(2 * m, 2 * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double c = std::cos(thetas[i]);
    const double sn = std::sin(thetas[i]);
    s(i, i) = c;
    s(m + i, m + i) = c;
    s(i, m + i) = sn;
    s(m + i, i) = -sn;
  }
  return s;
}

inline Matrix block_diag(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

/// U = left * (S_2m(thetas) (+) 1_{n-m}) * right, with left = diag(L, L') and
/// right = diag(R^dagger, R'^dagger).
struct CSDFactors {
  Matrix left;
  std::vector<double> thetas;
  Matrix right;
  int m = 0;
  int n = 0;

  Matrix left_top() const { return left.topLeftCorner(m, m); }
  Matrix left_bottom() const { return left.bottomRightCorner(n, n); }
  Matrix right_top() const { return right.topLeftCorner(m, m); }
  Matrix right_bottom() const { return right.bottomRightCorner(n, n); }

  Matrix middle() const {
    Matrix mid = Matrix::Identity(m + n, m + n);
    mid.topLeftCorner(2 * m, 2 * m) = cs_matrix(thetas).cast<cplx>();
    return mid;
  }

  Matrix reassemble() const { return left * middle() * right; }
};

inline CSDFactors cosine_sine_decompose(const Matrix& u, int m, int n) {
  if (u.rows() != u.cols()) {
    throw DimensionError("cosine-sine decomposition needs a square matrix");
  }
  if (m < 1 || n < 1 || m + n != u.rows() || m > n) {
    throw InvalidPartitionError(
        "invalid cosine-sine partition (m=" + std::to_string(m) +
        ", n=" + std::to_string(n) + ") for dimension " +
        std::to_string(u.rows()) + "; need m + n = dim and 1 <= m <= n");
  }
  const Matrix u11 = u.topLeftCorner(m, m);
  const Matrix u12 = u.topRightCorner(m, n);
  const Matrix u21 = u.bottomLeftCorner(n, m);
  const Matrix u22 = u.bottomRightCorner(n, n);

  // Work with ascending cosines: the largest sine comes first, which keeps the
  // triangular factor of the QR step below diagonal.
  Eigen::JacobiSVD<Matrix> svd(u11, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix l1 = svd.matrixU().rowwise().reverse();
  const Matrix r1 = svd.matrixV().rowwise().reverse();
  const Eigen::VectorXd c = svd.singularValues().reverse();

  // u21 r1 = l2 [-S; 0]
  Eigen::HouseholderQR<Matrix> qr(u21 * r1);
  Matrix l2 = qr.householderQ();
  const Matrix rq = qr.matrixQR().triangularView<Eigen::Upper>();
  Eigen::VectorXd s(m);
  for (int j = 0; j < m; ++j) {
    const cplx d = rq(j, j);
    const double mag = std::abs(d);
    s(j) = mag;
    if (mag > 0.0) l2.col(j) *= -(d / mag);
  }

  // Rows of r2^dagger, dividing by whichever of sin/cos is larger.
  const Matrix top = l1.adjoint() * u12;
  const Matrix bottom = l2.adjoint() * u22;
  Matrix r2h(n, n);
  for (int i = 0; i < m; ++i) {
    if (s(i) > c(i)) {
      r2h.row(i) = top.row(i) / s(i);
    } else {
      r2h.row(i) = bottom.row(i) / c(i);
    }
  }
  r2h.bottomRows(n - m) = bottom.bottomRows(n - m);

  // Reverse the first m indices so that thetas come out ascending.
  Matrix l1s = l1.rowwise().reverse();
  Matrix r1s = r1.rowwise().reverse();
  l2.leftCols(m) = l2.leftCols(m).rowwise().reverse().eval();
  r2h.topRows(m) = r2h.topRows(m).colwise().reverse().eval();

  CSDFactors out;
  out.m = m;
  out.n = n;
  out.thetas.resize(m);
  for (int i = 0; i < m; ++i) {
    const int k = m - 1 - i;
    out.thetas[i] = std::clamp(std::atan2(s(k), c(k)), 0.0, kPi / 2);
  }
  out.left = block_diag(l1s, l2);
  out.right = block_diag(r1s.adjoint(), r2h);
  return out;
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases of
/// diag(R) moved into Q. Deterministic for a given seed.
inline UnitaryMatrix haar_random(int n, std::uint64_t seed) {
  if (n < 1) throw DimensionError("haar_random needs n >= 1");
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double re = normal(gen);
      const double im = normal(gen);
      z(i, j) = cplx(re, im) / std::sqrt(2.0);
    }
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  for (int i = 0; i < n; ++i) {
    const cplx d = qr.matrixQR()(i, i);
    if (std::abs(d) > 0.0) q.col(i) *= d / std::abs(d);
  }
  return UnitaryMatrix(std::move(q));
}

/// SplitMix64 finalizer; used to derive independent per-trial seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 1));
}

}  // namespace ucc
