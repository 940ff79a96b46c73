#pragma once

#include "darkstate/fock_space.hpp"
#include "darkstate/model.hpp"
#include "darkstate/types.hpp"

namespace darkstate {

/// Harmonic dark state (d^dagger)^N |00>, normalized.
Vector dark_state(const BasisMap& basis, int manifold);

/// H1 in the manifold's collective-mode basis |k bright, N-k dark>, k = 0..N.
/// Row/column 0 is the dark state.
Matrix collective_h1_matrix(const ModelParams& params, int manifold);

/// <DS|H1|DS>
double first_order_energy(const ModelParams& params, int manifold);

/// -sum_{k>0} <k|H1|DS> / (<H0>_k - E_DS) |k>, on the full basis.
Vector first_order_state(const ModelParams& params, int manifold);

/// <DS|H1|phi1>
Complex second_order_energy(const ModelParams& params, int manifold);

/// E1 + E2, the complex shift of the dark eigenvalue away from N omega.
Complex total_energy_correction(const ModelParams& params, int manifold);

/// The three in-manifold contributions to the second-order state. The jump-operator term is
/// dropped: it maps out of the manifold.
struct SecondOrderTerms {
  Vector coupled;        // sum_{n,m} H1_nm H1_m0 / (D_n D_m) |n>
  Vector energy_shift;   // -sum_n H1_00 H1_n0 / D_n^2 |n>
  Vector normalization;  // -1/2 sum_n |H1_n0|^2 / |D_n|^2 |DS>

  [[nodiscard]] Vector sum() const { return coupled + energy_shift + normalization; }
};

SecondOrderTerms second_order_terms(const ModelParams& params, int manifold);
Vector second_order_state(const ModelParams& params, int manifold);

struct DensityCorrections {
  Matrix rho0;
  Matrix rho1;
  Matrix rho2;
};

/// rho0 = |DS><DS|, rho1 = |DS><phi1| + |phi1><DS|, rho2 = |DS><phi2| + |phi1><phi1| + |phi2><DS|.
DensityCorrections corrected_density(const ModelParams& params, int manifold);

/// rho0 + rho1 + rho2 truncated at `order`, renormalized and clipped to a valid density matrix.
Matrix assemble_state(const ModelParams& params, int manifold, int order);

struct PerturbedDarkState {
  int manifold = 0;
  Vector psi0;
  Vector phi1;
  Vector phi2;
  double e1 = 0.0;
  Complex e2;
  Matrix rho0;
  Matrix rho1;
  Matrix rho2;
};

PerturbedDarkState perturb_dark_state(const ModelParams& params, int manifold);

}  // namespace darkstate
