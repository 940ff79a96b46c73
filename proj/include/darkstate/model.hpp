#pragma once

#include "darkstate/fock_space.hpp"
#include "darkstate/types.hpp"

namespace darkstate {

/// Identical-site parameters in units where hbar = 1. U and omega are in units of gamma.
struct ModelParams {
  double omega = 0.0;
  double u = 0.0;
  double gamma = 1.0;
  int local_dim = 6;

  /// Throws ConfigError unless gamma > 0, u >= 0, local_dim >= 2 and all values finite.
  void validate() const;

  [[nodiscard]] ModelParams with_u(double value) const {
    ModelParams p = *this;
    p.u = value;
    return p;
  }
};

/// Diagonal Bose-Hubbard Hamiltonian (no tunneling):
/// omega (n1 + n2) - (U/2) [n1(n1-1) + n2(n2-1)].
Matrix build_h_bh(const ModelParams& params, const BasisMap& basis);

/// C = sqrt(gamma/2) (a1 + a2).
Matrix build_collective_op(const ModelParams& params, const BasisMap& basis);

/// sum_{i,j} a_i^dagger a_j = 2 b^dagger b.
Matrix collective_hopping(const BasisMap& basis);

/// H_BH - (i gamma / 2) sum_{i,j} a_i^dagger a_j.
Matrix build_h_eff(const ModelParams& params, const BasisMap& basis);

struct SplitHamiltonian {
  Matrix h0;  // harmonic + dissipative
  Matrix h1;  // anharmonic perturbation
};

SplitHamiltonian split_h0_h1(const ModelParams& params, const BasisMap& basis);

/// Frobenius norm of [(U/2) sum n(n-1), (i gamma/2) sum a_i^dagger a_j].
double commutator_norm(const ModelParams& params, const BasisMap& basis);

}  // namespace darkstate
