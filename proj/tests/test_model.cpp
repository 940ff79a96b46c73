#include <doctest.h>

#include <cmath>

#include "darkstate/linalg.hpp"
#include "darkstate/model.hpp"
#include "darkstate/spectra.hpp"

using namespace darkstate;

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(ModelParams{}.validate());
  CHECK_THROWS_AS((ModelParams{0.0, -0.1, 1.0, 6}.validate()), ConfigError);
  CHECK_THROWS_AS((ModelParams{0.0, 0.1, 0.0, 6}.validate()), ConfigError);
  CHECK_THROWS_AS((ModelParams{0.0, 0.1, 1.0, 1}.validate()), ConfigError);
  CHECK_THROWS_AS((ModelParams{NAN, 0.1, 1.0, 6}.validate()), ConfigError);
  CHECK_THROWS_AS(build_h_bh(ModelParams{0.0, 0.0, 1.0, 5}, BasisMap(6)), ConfigError);
}

TEST_CASE("Bose-Hubbard Hamiltonian") {
  const BasisMap b(6);
  const Matrix h0 = build_h_bh({1.0, 0.0, 1.0, 6}, b);
  CHECK(h0(b.index_of(1, 1), b.index_of(1, 1)) == Complex(2.0));
  const Matrix h = build_h_bh({1.0, 0.5, 1.0, 6}, b);
  CHECK(std::abs(h(b.index_of(2, 0), b.index_of(2, 0)) - 1.5) < 1e-15);
  CHECK(hermiticity_defect(h) == 0.0);
}

TEST_CASE("collective jump operator") {
  const ModelParams p{0.0, 0.3, 0.7, 6};
  const BasisMap b(6);
  const Matrix c = build_collective_op(p, b);
  Vector ket10 = Vector::Zero(b.size());
  ket10(b.index_of(1, 0)) = 1.0;
  const Vector out = c * ket10;
  CHECK(std::abs(out(b.index_of(0, 0)) - std::sqrt(p.gamma / 2)) < 1e-15);

  Vector dark1 = Vector::Zero(b.size());
  dark1(b.index_of(1, 0)) = 1.0 / std::sqrt(2.0);
  dark1(b.index_of(0, 1)) = -1.0 / std::sqrt(2.0);
  CHECK(max_abs(c * dark1) < 1e-15);

  const Matrix bb = bright_mode(b);
  CHECK(max_abs(Matrix(c.adjoint() * c) - p.gamma * bb.adjoint() * bb) < 1e-14);
}

TEST_CASE("effective Hamiltonian") {
  const ModelParams p{1.0, 0.8, 1.0, 6};
  const BasisMap b(6);
  const Matrix h_eff = build_h_eff(p, b);
  const Matrix h_bh = build_h_bh(p, b);
  const Matrix bb = bright_mode(b);

  const Matrix anti = h_eff - h_bh;
  CHECK(max_abs(Matrix(anti + anti.adjoint())) == 0.0);
  CHECK(max_abs(Matrix(anti + kI * p.gamma * bb.adjoint() * bb)) < 1e-14);
  CHECK(max_abs(commutator(h_eff, total_number(b))) < 1e-13);

  // N=1 at U=0: 2x2 block [[w - i g/2, -i g/2], [-i g/2, w - i g/2]] has eigenvalues w and w - i g.
  ModelParams small = p.with_u(0.0);
  small.local_dim = 4;
  const EigenSystem n1 = manifold_spectrum(small, BasisMap(4), 1);
  CHECK(std::abs(n1.pairs[0].lambda - Complex(1.0, 0.0)) < 1e-14);
  CHECK(std::abs(n1.pairs[1].lambda - Complex(1.0, -1.0)) < 1e-14);
}

TEST_CASE("H0/H1 split") {
  const ModelParams p{1.0, 0.4, 1.0, 6};
  const BasisMap b(6);
  const SplitHamiltonian s = split_h0_h1(p, b);
  CHECK(std::abs(s.h1(b.index_of(2, 0), b.index_of(2, 0)) + p.u) < 1e-15);
  CHECK(max_abs(Matrix(s.h0 + s.h1 - build_h_eff(p, b))) < 1e-14);
  CHECK(max_abs(split_h0_h1(p.with_u(0.0), b).h1) == 0.0);
}

TEST_CASE("commutator diagnostic") {
  CHECK(commutator_norm({0.0, 0.0, 1.0, 6}, BasisMap(6)) == 0.0);
  CHECK(commutator_norm({0.0, 3.0, 1.0, 2}, BasisMap(2)) == 0.0);
  CHECK(commutator_norm({0.0, 1.0, 1.0, 6}, BasisMap(6)) > 0.0);
  CHECK(commutator_norm({0.0, 0.1, 1.0, 3}, BasisMap(3)) > 0.0);
}
