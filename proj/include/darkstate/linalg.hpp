#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "darkstate/types.hpp"

namespace darkstate {

/// <a|b> with the first argument conjugated.
template <typename DerivedA, typename DerivedB>
Complex braket(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return a.dot(b);
}

template <typename DerivedA, typename DerivedB>
auto commutator(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return (a * b - b * a).eval();
}

template <typename DerivedA, typename DerivedB>
auto anticommutator(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return (a * b + b * a).eval();
}

/// Largest entry of |M - M^dagger|.
template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

template <typename Derived>
Complex trace(const Eigen::MatrixBase<Derived>& m) {
  return m.trace();
}

/// Expectation value Tr(op rho) without forming the product.
template <typename DerivedA, typename DerivedB>
Complex expectation(const Eigen::MatrixBase<DerivedA>& op, const Eigen::MatrixBase<DerivedB>& rho) {
  return op.cwiseProduct(rho.transpose()).sum();
}

/// Rotates `v` by a global phase so that <reference|v> is real and non-negative.
template <typename DerivedR, typename DerivedV>
Vector phase_aligned(const Eigen::MatrixBase<DerivedR>& reference, const Eigen::MatrixBase<DerivedV>& v) {
  const Complex overlap = reference.dot(v);
  if (std::abs(overlap) == 0.0) return v;
  return (v * (std::conj(overlap) / std::abs(overlap))).eval();
}

/// max-entry distance between two vectors after removing their relative global phase.
/// Both are scaled to unit norm first.
template <typename DerivedA, typename DerivedB>
double phase_insensitive_distance(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  const Vector ua = a.normalized();
  const Vector ub = phase_aligned(ua, b.normalized());
  return max_abs(ua - ub);
}

/// Hermitian projection onto the PSD cone: negative eigenvalues below -threshold are clipped,
/// then the trace is renormalized to one.
Matrix clip_to_density(const Matrix& rho, double threshold = 1e-12);

/// Smallest eigenvalue of the Hermitian part of rho.
double min_hermitian_eigenvalue(const Matrix& rho);

}  // namespace darkstate
