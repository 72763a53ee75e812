#pragma once

// Reference computations that avoid the library's code paths: projections
// from the normal equations, spectra from the general eigensolver, ranks from
// full-pivot LU.

#include <algorithm>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "ffk/ffk.hpp"

namespace ffk::oracle {

/// A (A^* A)^-1 A^*; A must have full column rank.
template <FieldScalar Scalar>
Mat<Scalar> projection(const Mat<Scalar>& a) {
  const Mat<Scalar> gram = a.adjoint() * a;
  return a * gram.fullPivLu().solve(a.adjoint());
}

template <FieldScalar Scalar>
Mat<Scalar> frame_operator(const std::vector<WeightedSpan<Scalar>>& spans, bool normalized) {
  const auto n = spans.front().vectors.rows();
  Mat<Scalar> s = Mat<Scalar>::Zero(n, n);
  for (const auto& sp : spans) s += (normalized ? 1.0 : sp.weight * sp.weight) * projection(sp.vectors);
  return s;
}

/// Sorted eigenvalues via the general (non-Hermitian) complex solver.
template <FieldScalar Scalar>
std::vector<double> eigenvalues(const Mat<Scalar>& m) {
  const Mat<Complex> c = m.template cast<Complex>();
  Eigen::ComplexEigenSolver<Mat<Complex>> es(c, false);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i).real());
  std::sort(out.begin(), out.end());
  return out;
}

template <FieldScalar Scalar>
std::size_t rank(const Mat<Scalar>& m, double threshold = 1e-9) {
  Eigen::FullPivLU<Mat<Scalar>> lu(m);
  lu.setThreshold(threshold);
  return static_cast<std::size_t>(lu.rank());
}

/// sum d_i - rank of the stacked, weighted raw spans.
template <FieldScalar Scalar>
std::size_t excess(const std::vector<WeightedSpan<Scalar>>& spans) {
  const auto n = spans.front().vectors.rows();
  Eigen::Index cols = 0;
  for (const auto& s : spans) cols += s.vectors.cols();
  Mat<Scalar> t(n, cols);
  Eigen::Index at = 0;
  for (const auto& s : spans) {
    t.middleCols(at, s.vectors.cols()) = s.weight * s.vectors;
    at += s.vectors.cols();
  }
  return static_cast<std::size_t>(cols) - rank(t);
}

struct SampledExtremes {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
};

/// Min and max of x^* M x over `samples` Haar unit vectors.
template <FieldScalar Scalar>
SampledExtremes rayleigh_extremes(const Mat<Scalar>& m, std::size_t samples, Rng& rng) {
  SampledExtremes e;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vec<Scalar> x = random_unit_vector<Scalar>(m.rows(), rng);
    const double q = std::real(x.dot(m * x));
    e.min = std::min(e.min, q);
    e.max = std::max(e.max, q);
  }
  return e;
}

/// Sampled extremes polished by gradient steps on the sphere,
/// x <- normalize(x +/- h (M x - (x^* M x) x)), started from the best samples.
template <FieldScalar Scalar>
SampledExtremes rayleigh_refined(const Mat<Scalar>& m, std::size_t samples, Rng& rng, int steps = 3000) {
  SampledExtremes e;
  Vec<Scalar> best_lo, best_hi;
  for (std::size_t s = 0; s < samples; ++s) {
    Vec<Scalar> x = random_unit_vector<Scalar>(m.rows(), rng);
    const double q = std::real(x.dot(m * x));
    if (q < e.min) e.min = q, best_lo = x;
    if (q > e.max) e.max = q, best_hi = x;
  }
  const double h = 0.5 / std::max(1e-300, m.cwiseAbs().rowwise().sum().maxCoeff());
  auto climb = [&](Vec<Scalar> x, double sign) {
    for (int it = 0; it < steps; ++it) {
      const Vec<Scalar> mx = m * x;
      const double q = std::real(x.dot(mx));
      x += (sign * h) * (mx - q * x);
      x.normalize();
    }
    return std::real(x.dot(m * x));
  };
  e.min = std::min(e.min, climb(best_lo, -1.0));
  e.max = std::max(e.max, climb(best_hi, 1.0));
  return e;
}

/// sum_i |<x, phi_i / ||phi_i||>|^2 computed column by column.
template <FieldScalar Scalar>
double vector_redundancy(const Mat<Scalar>& phi, const Vec<Scalar>& x) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < phi.cols(); ++i) sum += std::norm(phi.col(i).dot(x)) / phi.col(i).squaredNorm();
  return sum;
}

/// max_k || e_k - sum_i <e_k, psi_i> phi_i ||
template <FieldScalar Scalar>
double reconstruction_error(const Mat<Scalar>& phi, const Mat<Scalar>& psi) {
  const auto n = phi.rows();
  double worst = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Vec<Scalar> e = Vec<Scalar>::Unit(n, k);
    Vec<Scalar> r = Vec<Scalar>::Zero(n);
    for (Eigen::Index i = 0; i < phi.cols(); ++i) r += psi.col(i).dot(e) * phi.col(i);
    worst = std::max(worst, (e - r).norm());
  }
  return worst;
}

}  // namespace ffk::oracle
