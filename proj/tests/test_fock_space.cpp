#include <doctest.h>

#include <cmath>

#include "darkstate/fock_space.hpp"
#include "darkstate/linalg.hpp"
#include "darkstate/model.hpp"
#include "oracle.hpp"

using namespace darkstate;

TEST_CASE("basis enumeration") {
  const BasisMap b = enumerate_basis(6);
  CHECK(b.size() == 36);
  for (int i = 0; i < b.size(); ++i) {
    CHECK(b.label(i).n1 == i / 6);
    CHECK(b.label(i).n2 == i % 6);
    CHECK(b.index_of(b.label(i).n1, b.label(i).n2) == i);
  }
  const auto& n2 = b.manifold(2);
  REQUIRE(n2.size() == 3);
  CHECK(b.label(n2[0]) == FockLabel{0, 2});
  CHECK(b.label(n2[1]) == FockLabel{1, 1});
  CHECK(b.label(n2[2]) == FockLabel{2, 0});
  REQUIRE(b.manifold_size(10) == 1);
  CHECK(b.label(b.manifold(10)[0]) == FockLabel{5, 5});
  CHECK(b.manifold_size(11) == 0);

  for (int n = 0; n <= b.max_manifold(); ++n) {
    CHECK(b.manifold_size(n) == std::min(n, 5) - std::max(0, n - 5) + 1);
  }
  CHECK(enumerate_basis(2).size() == 4);
  CHECK_THROWS_AS(enumerate_basis(1), ConfigError);
  CHECK_THROWS_AS((void)b.index_of(6, 0), TruncationError);
}

TEST_CASE("ladder operators against the ket oracle") {
  const int d = 5;
  const BasisMap b(d);
  const Matrix a1 = site_annihilation(b, 1);
  const Matrix a2 = site_annihilation(b, 2);

  CHECK(std::abs(a1(b.index_of(1, 0), b.index_of(2, 0)) - std::sqrt(2.0)) < 1e-15);
  CHECK(max_abs(a2 * oracle::dense(oracle::vacuum(), d)) == 0.0);
  CHECK(site_number(b, 1)(b.index_of(2, 0), b.index_of(2, 0)) == Complex(2.0));

  for (const FockLabel& l : b.labels()) {
    const auto ket = oracle::basis_ket(l.n1, l.n2);
    const Vector v = oracle::dense(ket, d);
    CHECK(max_abs(a1 * v - oracle::dense(oracle::lower(ket, 1), d)) < 1e-15);
    CHECK(max_abs(a2 * v - oracle::dense(oracle::lower(ket, 2), d)) < 1e-15);
  }
  CHECK_THROWS(site_annihilation(b, 3));
}

TEST_CASE("canonical commutators below the cutoff") {
  const int d = 6;
  const BasisMap b(d);
  const Matrix a[2] = {site_annihilation(b, 1), site_annihilation(b, 2)};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const Matrix c = commutator(a[i], Matrix(a[j].adjoint()));
      for (const FockLabel& l : b.labels()) {
        if (l.n1 >= d - 1 || l.n2 >= d - 1) continue;
        const int p = b.index_of(l.n1, l.n2);
        const Vector col = c.col(p);
        Vector expected = Vector::Zero(b.size());
        if (i == j) expected(p) = 1.0;
        CHECK(max_abs(col - expected) < 1e-14);
      }
    }
  }
}

TEST_CASE("collective mode identities") {
  const BasisMap b(6);
  const Matrix bb = bright_mode(b);
  const Matrix dd = dark_mode(b);
  CHECK(max_abs(Matrix(bb.adjoint() * bb + dd.adjoint() * dd) - total_number(b)) < 1e-14);
  CHECK(max_abs(collective_hopping(b) - 2.0 * bb.adjoint() * bb) < 1e-14);
}

TEST_CASE("collective mode states") {
  const BasisMap b(6);
  const double h = 0.5;
  const double r = 1.0 / std::sqrt(2.0);
  const int p02 = b.index_of(0, 2), p11 = b.index_of(1, 1), p20 = b.index_of(2, 0);

  const Vector ds = collective_mode_state(b, 0, 2);
  CHECK(std::abs(ds(p20) - h) < 1e-15);
  CHECK(std::abs(ds(p02) - h) < 1e-15);
  CHECK(std::abs(ds(p11) + r) < 1e-15);

  const Vector bs = collective_mode_state(b, 2, 0);
  CHECK(std::abs(bs(p20) - h) < 1e-15);
  CHECK(std::abs(bs(p02) - h) < 1e-15);
  CHECK(std::abs(bs(p11) - r) < 1e-15);

  const Vector fs = collective_mode_state(b, 1, 1);
  CHECK(std::abs(fs(p20) - r) < 1e-15);
  CHECK(std::abs(fs(p02) + r) < 1e-15);
  CHECK(std::abs(fs(p11)) < 1e-15);

  for (int n = 0; n <= 5; ++n) {
    for (int k = 0; k <= n; ++k) {
      const Vector v = collective_mode_state(b, k, n - k);
      CHECK(max_abs(v - oracle::dense(oracle::mode_state(k, n - k), 6)) < 1e-13);
      for (int q = 0; q <= n; ++q) {
        const Complex overlap = braket(v, collective_mode_state(b, q, n - q));
        CHECK(std::abs(overlap - (k == q ? 1.0 : 0.0)) < 1e-12);
      }
    }
  }
  CHECK_THROWS_AS(collective_mode_state(b, 6, 0), TruncationError);
  CHECK_THROWS_AS(collective_mode_state(b, 3, 3), TruncationError);
}

TEST_CASE("manifold blocks") {
  const BasisMap b(6);
  const ModelParams p{1.0, 0.5, 1.0, 6};
  const ManifoldBlock blk = manifold_block(b, build_h_eff(p, b), 2);
  Matrix expected(3, 3);
  const Complex off(0.0, -1.0 / std::sqrt(2.0));
  expected << Complex(2.0 - 0.5, -1.0), off, 0.0,
              off, Complex(2.0, -1.0), off,
              0.0, off, Complex(2.0 - 0.5, -1.0);
  CHECK(max_abs(blk.matrix - expected) < 1e-14);

  const Matrix n3 = manifold_block(b, total_number(b), 3).matrix;
  CHECK(max_abs(n3 - 3.0 * Matrix::Identity(4, 4)) == 0.0);

  const Matrix a1 = site_annihilation(b, 1);
  CHECK_THROWS_AS(manifold_block(b, a1, 2), BlockStructureError);
  CHECK(cross_manifold_magnitude(b, a1) > 0.9);
  CHECK(cross_manifold_magnitude(b, build_h_eff(p, b)) == 0.0);
}

TEST_CASE("manifold restriction round trip and dump") {
  const BasisMap b(4);
  const Vector v = collective_mode_state(b, 1, 2);
  const Vector r = restrict_to_manifold(b, v, 3);
  CHECK(r.size() == 4);
  CHECK(max_abs(embed_from_manifold(b, r, 3) - v) == 0.0);

  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = Complex(0.5, -1.0);
  CHECK(matrix_dump_csv(m) == "row,col,re,im\n0,1,0.5,-1\n");
}
