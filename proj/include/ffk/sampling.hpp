#pragma once

#include <random>

#include "ffk/numerics.hpp"

namespace ffk {

/// The generator used by every sampled check. Callers own and seed it.
using Rng = std::mt19937_64;

template <FieldScalar Scalar>
Mat<Scalar> gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat<Scalar> m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      if constexpr (is_complex_v<Scalar>) {
        const double re = normal(rng);
        const double im = normal(rng);
        m(i, j) = Scalar(re, im);
      } else {
        m(i, j) = normal(rng);
      }
    }
  return m;
}

/// Haar-uniform point on the unit sphere: normalized i.i.d. standard Gaussians.
template <FieldScalar Scalar>
Vec<Scalar> random_unit_vector(Eigen::Index n, Rng& rng) {
  Vec<Scalar> x;
  do {
    x = gaussian_matrix<Scalar>(n, 1, rng);
  } while (x.norm() == 0.0);
  return x / x.norm();
}

/// `count` Haar-uniform unit vectors stored as columns.
template <FieldScalar Scalar>
Mat<Scalar> random_unit_vectors(Eigen::Index n, Eigen::Index count, Rng& rng) {
  Mat<Scalar> xs(n, count);
  for (Eigen::Index k = 0; k < count; ++k) xs.col(k) = random_unit_vector<Scalar>(n, rng);
  return xs;
}

/// Haar-distributed unitary (orthogonal in the real case): QR of a Gaussian
/// matrix with the phases of R's diagonal folded back into Q.
template <FieldScalar Scalar>
Mat<Scalar> random_unitary(Eigen::Index n, Rng& rng) {
  const Mat<Scalar> g = gaussian_matrix<Scalar>(n, n, rng);
  Eigen::HouseholderQR<Mat<Scalar>> qr(g);
  Mat<Scalar> q = qr.householderQ();
  const Mat<Scalar> r = qr.matrixQR();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

}  // namespace ffk
