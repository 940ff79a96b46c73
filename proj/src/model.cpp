#include "darkstate/model.hpp"

#include <cmath>

#include <fmt/format.h>

#include "darkstate/linalg.hpp"

namespace darkstate {

namespace {

Matrix on_site_interaction(const BasisMap& basis) {
  Vector diag(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    const auto [n1, n2] = basis.label(i);
    diag(i) = static_cast<double>(n1 * (n1 - 1) + n2 * (n2 - 1));
  }
  return diag.asDiagonal();
}

void check_basis(const ModelParams& params, const BasisMap& basis) {
  params.validate();
  if (basis.local_dim() != params.local_dim) {
    throw ConfigError(fmt::format("basis local_dim {} does not match params local_dim {}", basis.local_dim(),
                                  params.local_dim));
  }
}

}  // namespace

void ModelParams::validate() const {
  if (!std::isfinite(omega) || !std::isfinite(u) || !std::isfinite(gamma)) {
    throw ConfigError("model parameters must be finite");
  }
  if (!(gamma > 0.0)) throw ConfigError(fmt::format("gamma must be > 0, got {}", gamma));
  if (u < 0.0) throw ConfigError(fmt::format("u must be >= 0, got {}", u));
  if (local_dim < 2) throw ConfigError(fmt::format("local_dim must be >= 2, got {}", local_dim));
}

Matrix build_h_bh(const ModelParams& params, const BasisMap& basis) {
  check_basis(params, basis);
  return params.omega * total_number(basis) - 0.5 * params.u * on_site_interaction(basis);
}

Matrix build_collective_op(const ModelParams& params, const BasisMap& basis) {
  check_basis(params, basis);
  return std::sqrt(params.gamma / 2.0) * (site_annihilation(basis, 1) + site_annihilation(basis, 2));
}

Matrix collective_hopping(const BasisMap& basis) {
  const Matrix a_sum = site_annihilation(basis, 1) + site_annihilation(basis, 2);
  return a_sum.adjoint() * a_sum;
}

Matrix build_h_eff(const ModelParams& params, const BasisMap& basis) {
  return build_h_bh(params, basis) - (kI * params.gamma / 2.0) * collective_hopping(basis);
}

SplitHamiltonian split_h0_h1(const ModelParams& params, const BasisMap& basis) {
  check_basis(params, basis);
  SplitHamiltonian split;
  split.h0 = params.omega * total_number(basis) - (kI * params.gamma / 2.0) * collective_hopping(basis);
  split.h1 = -0.5 * params.u * on_site_interaction(basis);
  return split;
}

double commutator_norm(const ModelParams& params, const BasisMap& basis) {
  check_basis(params, basis);
  const Matrix interaction = 0.5 * params.u * on_site_interaction(basis);
  const Matrix dissipation = (kI * params.gamma / 2.0) * collective_hopping(basis);
  return commutator(interaction, dissipation).norm();
}

}  // namespace darkstate
