#pragma once

// Test-side helpers. Reference matrices are built entry by entry so that they
// do not share code paths with the library.

#include <complex>
#include <random>
#include <vector>

#include "ucc/linalg.hpp"

namespace testing {

using ucc::cplx;
using ucc::Matrix;

inline Matrix reference_givens(int dim, int m, int n, double theta, double phi,
                               bool inverted) {
  Matrix t = Matrix::Identity(dim, dim);
  const cplx e = std::exp(cplx(0.0, phi));
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  if (!inverted) {
    t(m, m) = e * c;
    t(m, n) = -s;
    t(n, m) = e * s;
    t(n, n) = c;
  } else {
    // Conjugate transpose of the forward core.
    t(m, m) = std::conj(e) * c;
    t(m, n) = std::conj(e) * s;
    t(n, m) = -s;
    t(n, n) = c;
  }
  return t;
}

inline Matrix reference_diag(const std::vector<double>& phases) {
  const int n = static_cast<int>(phases.size());
  Matrix d = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) d(i, i) = std::exp(cplx(0.0, phases[static_cast<std::size_t>(i)]));
  return d;
}

/// Plain triple loop, independent of Eigen's product kernels.
inline Matrix naive_product(const Matrix& a, const Matrix& b) {
  Matrix c = Matrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      for (Eigen::Index k = 0; k < a.cols(); ++k) c(i, j) += a(i, k) * b(k, j);
  return c;
}

inline double max_entry(const Matrix& a) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j)));
  return m;
}

inline double distance(const Matrix& a, const Matrix& b) { return max_entry(a - b); }

struct AngleSource {
  std::mt19937_64 gen;
  explicit AngleSource(std::uint64_t seed) : gen(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  }
  double angle() { return uniform(-10.0, 10.0); }
};

}  // namespace testing
