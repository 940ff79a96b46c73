#include "darkstate/linalg.hpp"

#include <Eigen/Eigenvalues>

namespace darkstate {

Matrix clip_to_density(const Matrix& rho, double threshold) {
  const Matrix hermitian = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian);
  RealVector w = es.eigenvalues();
  Matrix out = hermitian;
  if (w.minCoeff() < -threshold) {
    w = w.cwiseMax(0.0);
    out = es.eigenvectors() * w.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  }
  const double tr = out.trace().real();
  if (!(tr > 0.0)) throw NumericalError("density matrix has non-positive trace");
  out /= tr;
  return 0.5 * (out + out.adjoint());
}

double min_hermitian_eigenvalue(const Matrix& rho) {
  const Matrix hermitian = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace darkstate
