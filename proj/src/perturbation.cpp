#include "darkstate/perturbation.hpp"

#include <cmath>

#include <fmt/format.h>

#include "darkstate/linalg.hpp"

namespace darkstate {

namespace {

// Everything the perturbation series needs for one manifold, in the collective-mode basis.
struct ManifoldSeries {
  BasisMap basis;
  int manifold;
  std::vector<Vector> modes;  // full-basis |k, N-k>, k = 0..N
  Matrix h1;                  // <k|H1|k'>
  Vector denominators;        // <H0>_k - E_DS (entry 0 unused)

  ManifoldSeries(const ModelParams& params, int n) : basis(params.local_dim), manifold(n) {
    params.validate();
    if (n < 0) throw ConfigError(fmt::format("manifold must be >= 0, got {}", n));
    const SplitHamiltonian split = split_h0_h1(params, basis);
    for (int k = 0; k <= n; ++k) modes.push_back(collective_mode_state(basis, k, n - k));
    const auto size = static_cast<Eigen::Index>(modes.size());
    h1.resize(size, size);
    denominators = Vector::Zero(size);
    const Complex e_dark = modes[0].dot(split.h0 * modes[0]);
    for (Eigen::Index i = 0; i < size; ++i) {
      for (Eigen::Index j = 0; j < size; ++j) {
        h1(i, j) = modes[static_cast<std::size_t>(i)].dot(split.h1 * modes[static_cast<std::size_t>(j)]);
      }
      if (i > 0) {
        const auto& mode = modes[static_cast<std::size_t>(i)];
        denominators(i) = mode.dot(split.h0 * mode) - e_dark;
        if (std::abs(denominators(i)) < 1e-12 * params.gamma) {
          throw NumericalError(fmt::format("vanishing perturbative denominator for mode k={}", i));
        }
      }
    }
  }

  [[nodiscard]] Eigen::Index size() const { return h1.rows(); }

  [[nodiscard]] Vector combine(const Vector& coefficients) const {
    Vector out = Vector::Zero(basis.size());
    for (Eigen::Index k = 0; k < size(); ++k) out += coefficients(k) * modes[static_cast<std::size_t>(k)];
    return out;
  }

  [[nodiscard]] Vector first_order_coefficients() const {
    Vector c = Vector::Zero(size());
    for (Eigen::Index k = 1; k < size(); ++k) c(k) = -h1(k, 0) / denominators(k);
    return c;
  }

  [[nodiscard]] SecondOrderTerms second_order() const {
    Vector coupled = Vector::Zero(size());
    Vector shift = Vector::Zero(size());
    Vector norm = Vector::Zero(size());
    for (Eigen::Index n = 1; n < size(); ++n) {
      for (Eigen::Index m = 1; m < size(); ++m) {
        coupled(n) += h1(n, m) * h1(m, 0) / (denominators(n) * denominators(m));
      }
      shift(n) = -h1(0, 0) * h1(n, 0) / (denominators(n) * denominators(n));
      norm(0) += -0.5 * std::norm(h1(n, 0)) / std::norm(denominators(n));
    }
    return {combine(coupled), combine(shift), combine(norm)};
  }
};

}  // namespace

Vector dark_state(const BasisMap& basis, int manifold) { return collective_mode_state(basis, 0, manifold); }

Matrix collective_h1_matrix(const ModelParams& params, int manifold) { return ManifoldSeries(params, manifold).h1; }

double first_order_energy(const ModelParams& params, int manifold) {
  return ManifoldSeries(params, manifold).h1(0, 0).real();
}

Vector first_order_state(const ModelParams& params, int manifold) {
  const ManifoldSeries series(params, manifold);
  return series.combine(series.first_order_coefficients());
}

Complex second_order_energy(const ModelParams& params, int manifold) {
  const ManifoldSeries series(params, manifold);
  const Vector c = series.first_order_coefficients();
  return (series.h1.row(0) * c)(0);
}

Complex total_energy_correction(const ModelParams& params, int manifold) {
  return first_order_energy(params, manifold) + second_order_energy(params, manifold);
}

SecondOrderTerms second_order_terms(const ModelParams& params, int manifold) {
  return ManifoldSeries(params, manifold).second_order();
}

Vector second_order_state(const ModelParams& params, int manifold) {
  return second_order_terms(params, manifold).sum();
}

DensityCorrections corrected_density(const ModelParams& params, int manifold) {
  const PerturbedDarkState s = perturb_dark_state(params, manifold);
  return {s.rho0, s.rho1, s.rho2};
}

Matrix assemble_state(const ModelParams& params, int manifold, int order) {
  if (order < 0 || order > 2) throw ConfigError(fmt::format("perturbative order must be 0, 1 or 2, got {}", order));
  const DensityCorrections d = corrected_density(params, manifold);
  Matrix rho = d.rho0;
  if (order >= 1) rho += d.rho1;
  if (order >= 2) rho += d.rho2;
  return clip_to_density(rho, 1e-12);
}

PerturbedDarkState perturb_dark_state(const ModelParams& params, int manifold) {
  const ManifoldSeries series(params, manifold);
  const Vector c1 = series.first_order_coefficients();

  PerturbedDarkState s;
  s.manifold = manifold;
  s.psi0 = series.modes[0];
  s.phi1 = series.combine(c1);
  s.phi2 = series.second_order().sum();
  s.e1 = series.h1(0, 0).real();
  s.e2 = (series.h1.row(0) * c1)(0);
  s.rho0 = s.psi0 * s.psi0.adjoint();
  s.rho1 = s.psi0 * s.phi1.adjoint() + s.phi1 * s.psi0.adjoint();
  s.rho2 = s.psi0 * s.phi2.adjoint() + s.phi1 * s.phi1.adjoint() + s.phi2 * s.psi0.adjoint();
  return s;
}

}  // namespace darkstate
