#include <doctest.h>

#include <Eigen/Dense>

#include "darkstate/biortho.hpp"
#include "darkstate/linalg.hpp"
#include "darkstate/spectra.hpp"

using namespace darkstate;

namespace {

EigenSystem n2_system(double u) {
  return manifold_spectrum(ModelParams{1.0, u, 1.0, 6}, BasisMap(6), 2);
}

double delta_defect(const BiorthoBasis& out) {
  double worst = 0.0;
  for (std::size_t i = 0; i < out.lefts.size(); ++i) {
    for (std::size_t j = 0; j < out.rights.size(); ++j) {
      worst = std::max(worst, std::abs(braket(out.lefts[i], out.rights[j]) - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("harmonic eigenvectors are returned unchanged") {
  const EigenSystem s = n2_system(0.0);
  const BiorthoBasis out = biorthogonalize(s);
  for (int i = 0; i < s.size(); ++i) {
    CHECK(max_abs(out.rights[i] - s.pairs[i].right) < 1e-12);
    CHECK(max_abs(out.lefts[i] - s.pairs[i].left) < 1e-12);
  }
  CHECK_FALSE(out.near_exceptional_point);
}

TEST_CASE("default order") {
  // Sorted pairs at U = 0.5: dark-descended (0), antisymmetric psi_1 (1), psi_2 (2).
  CHECK(default_order(n2_system(0.5)) == std::vector<int>{1, 2, 0});
  CHECK(default_order(n2_system(0.0)) == std::vector<int>{1, 2, 0});
  const EigenSystem n1 = manifold_spectrum(ModelParams{1.0, 0.5, 1.0, 6}, BasisMap(6), 1);
  CHECK(default_order(n1) == std::vector<int>{0, 1});
}

TEST_CASE("U = 0.5: biorthogonal output, only the middle vector corrected") {
  const EigenSystem s = n2_system(0.5);
  const BiorthoBasis out = biorthogonalize(s);
  CHECK(delta_defect(out) <= 1e-10);
  for (int idx : {out.order.front(), out.order.back()}) {
    CHECK(max_abs(out.rights[idx] - s.pairs[idx].right) < 1e-12);
    CHECK(max_abs(out.lefts[idx] - s.pairs[idx].left) < 1e-12);
  }

  // Same span: the overlap of new rights with old lefts is full rank.
  Matrix overlap(3, 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) overlap(i, j) = braket(s.pairs[i].left, out.rights[j]);
  }
  CHECK(Eigen::FullPivLU<Matrix>(overlap).rank() == 3);
}

TEST_CASE("idempotence") {
  const BiorthoBasis once = biorthogonalize(n2_system(1.3));
  const BiorthoBasis twice = biorthogonalize(once.rights, once.lefts, once.order);
  for (std::size_t i = 0; i < once.rights.size(); ++i) {
    CHECK(max_abs(twice.rights[i] - once.rights[i]) <= 1e-12);
    CHECK(max_abs(twice.lefts[i] - once.lefts[i]) <= 1e-12);
  }
}

TEST_CASE("order dependence") {
  const EigenSystem s = manifold_spectrum(ModelParams{1.0, 1.0, 1.0, 6}, BasisMap(6), 4);
  std::vector<Vector> rights, lefts;
  for (const auto& p : s.pairs) {
    rights.push_back(p.right + 0.05 * Vector::Ones(p.right.size()));
    lefts.push_back(p.left);
  }
  const BiorthoBasis a = biorthogonalize(rights, lefts, {0, 1, 2, 3, 4});
  const BiorthoBasis b = biorthogonalize(rights, lefts, {4, 3, 2, 1, 0});
  CHECK(delta_defect(a) <= 1e-10);
  CHECK(delta_defect(b) <= 1e-10);
  double diff = 0.0;
  for (std::size_t i = 0; i < rights.size(); ++i) diff = std::max(diff, max_abs(a.rights[i] - b.rights[i]));
  CHECK(diff > 1e-3);
}

TEST_CASE("near the exceptional point") {
  const BiorthoBasis out = biorthogonalize(n2_system(1.99));
  CHECK(out.near_exceptional_point);
  CHECK(delta_defect(out) <= 1e-8);

  Vector r(2), l(2);
  r << 1.0, 0.0;
  l << 0.0, 1.0;
  CHECK_THROWS_AS(biorthogonalize({r}, {l}, {0}), ExceptionalPointError);
  CHECK(ExceptionalPointError("x").exit_code() == ExitCode::kExceptionalPoint);
}

TEST_CASE("argument validation") {
  Vector v = Vector::Ones(2);
  CHECK_THROWS_AS(biorthogonalize({v, v}, {v}, {0, 1}), ConfigError);
  CHECK_THROWS_AS(biorthogonalize({v}, {v}, {1}), ConfigError);
}
