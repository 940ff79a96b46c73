#include <doctest.h>

#include <cmath>

#include "darkstate/dynamics.hpp"
#include "darkstate/linalg.hpp"
#include "darkstate/perturbation.hpp"

using namespace darkstate;

namespace {

ModelParams params(double u) { return ModelParams{0.0, u, 1.0, 6}; }

Matrix projector(const Vector& v) { return v * v.adjoint(); }

// Deterministic full-rank density matrix.
Matrix mixed_state(int dim) {
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(std::sin(1.0 + i + 3.0 * j), std::cos(2.0 * i - j));
  }
  Matrix rho = a * a.adjoint();
  return rho / rho.trace();
}

double max_population_gap(const Trajectory& a, const Trajectory& b) {
  double gap = 0.0;
  for (std::size_t i = 0; i < std::min(a.observables.size(), b.observables.size()); ++i) {
    for (std::size_t k = 0; k < a.observables[i].pop_by_manifold.size(); ++k) {
      gap = std::max(gap, std::abs(a.observables[i].pop_by_manifold[k] - b.observables[i].pop_by_manifold[k]));
    }
  }
  return gap;
}

}  // namespace

TEST_CASE("Lindblad generator") {
  const BasisMap b(6);
  CHECK(max_abs(lindblad_rhs(params(0.4), projector(dark_state(b, 0)))) == 0.0);
  CHECK(max_abs(lindblad_rhs(params(0.0), projector(dark_state(b, 2)))) < 1e-15);
  const Matrix rhs = lindblad_rhs(params(0.4), mixed_state(36));
  CHECK(std::abs(rhs.trace()) < 1e-14);
  CHECK(hermiticity_defect(rhs) < 1e-14);
  CHECK(max_abs(lindblad_rhs(params(0.4), projector(dark_state(b, 2)))) > 1e-3);
}

TEST_CASE("harmonic dark state is stationary") {
  const BasisMap b(6);
  EvolveOptions o;
  o.t_end = 10.0;
  const Trajectory t = evolve(params(0.0), projector(dark_state(b, 2)), o);
  CHECK(t.times.size() == 201);
  for (const Observables& obs : t.observables) {
    CHECK(std::abs(obs.pop_by_manifold[2] - 1.0) < 1e-10);
    CHECK(std::abs(obs.intensity) < 1e-12);
  }
}

TEST_CASE("relaxation of the perturbed N=2 dark state") {
  const ModelParams p = params(0.5);
  const Trajectory t = evolve(p, gram_schmidt_dark_state(p, 2), EvolveOptions{20.0});

  for (std::size_t i = 1; i < t.times.size(); ++i) {
    CHECK(t.times[i] > t.times[i - 1]);
    CHECK(t.observables[i].total_n - t.observables[i - 1].total_n <= 1e-9);
    CHECK(t.observables[i].pop_ground >= t.observables[i - 1].pop_ground - 1e-12);
  }
  for (const Observables& obs : t.observables) {
    CHECK(std::abs(obs.trace - 1.0) <= 1e-8);
    CHECK(obs.hermiticity_defect <= 1e-10);
    CHECK(obs.min_eigenvalue >= -1e-8);
  }
  CHECK(t.observables.back().pop_ground > 0.9);

  const BurstMetrics m = burst_metrics(intensity(t));
  CHECK(m.is_burst);
  CHECK(m.t_peak > 0.0);
  CHECK(m.i_peak > m.i_initial);
}

TEST_CASE("emission intensity equals the excitation outflow") {
  const ModelParams p = params(0.5);
  EvolveOptions o;
  o.t_end = 4.0;
  o.sample_every = o.dt;
  const Trajectory t = evolve(p, assemble_state(p, 2, 2), o);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < t.observables.size(); ++i) {
    const double dn = (t.observables[i + 1].total_n - t.observables[i - 1].total_n) / (2 * o.dt);
    worst = std::max(worst, std::abs(t.observables[i].intensity + dn));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("bright-state emission decays exponentially") {
  const BasisMap b(6);
  const ModelParams p = params(0.0);
  const Vector bright = collective_mode_state(b, 1, 0);
  const Trajectory t = evolve(p, projector(bright), EvolveOptions{5.0});
  const TimeSeries s = intensity(t);
  for (std::size_t i = 0; i < s.t.size(); ++i) CHECK(std::abs(s.value[i] - std::exp(-s.t[i])) < 1e-9);
  CHECK_FALSE(burst_metrics(s).is_burst);
}

TEST_CASE("burst metrics") {
  CHECK_FALSE(burst_metrics(TimeSeries{{0.0, 1.0}, {0.0, 0.0}}).is_burst);
  const BurstMetrics m = burst_metrics(TimeSeries{{0.0, 1.0, 2.0}, {0.1, 0.3, 0.2}});
  CHECK(m.is_burst);
  CHECK(m.t_peak == 1.0);
  CHECK_THROWS_AS(burst_metrics(TimeSeries{}), ConfigError);
}

TEST_CASE("RK4 convergence order") {
  const ModelParams p = params(0.5);
  const Matrix rho0 = gram_schmidt_dark_state(p, 2);
  auto final_state = [&](double dt) {
    EvolveOptions o;
    o.t_end = 5.0;
    o.dt = dt;
    o.sample_every = 0.1;
    return evolve(p, rho0, o).final_state;
  };
  const Matrix reference = final_state(0.0125);
  const double factor = max_abs(Matrix(final_state(0.1) - reference)) / max_abs(Matrix(final_state(0.05) - reference));
  CHECK(factor >= 12.0);
  CHECK(factor <= 20.0);
}

TEST_CASE("parity endpoints") {
  const ParityEndpoint even = parity_endpoint(params(0.5), 2);
  CHECK(even.ground_pop >= 0.99);
  CHECK(even.n1_dark_pop <= 0.01);

  const ParityEndpoint odd = parity_endpoint(params(0.5), 3);
  CHECK(odd.n1_dark_pop > 0.1);
  CHECK(std::abs(odd.n1_dark_drift) < 1e-6);
  // Golden value from the converged default-step run.
  CHECK(odd.n1_dark_pop == doctest::Approx(0.99999921).epsilon(1e-6));

  CHECK_THROWS_AS(parity_endpoint(params(0.5), 0), ConfigError);
}

TEST_CASE("single-excitation dark state never decays") {
  const BasisMap b(6);
  for (double u : {0.0, 0.7}) {
    const Trajectory t = evolve(params(u), projector(dark_state(b, 1)), EvolveOptions{5.0});
    for (const Observables& obs : t.observables) CHECK(std::abs(obs.pop_n1_dark - 1.0) < 1e-12);
  }
}

TEST_CASE("integrator guards") {
  const BasisMap b(6);
  Vector top = Vector::Zero(36);
  top(b.index_of(5, 5)) = 1.0;
  EvolveOptions unstable;
  unstable.t_end = 500.0;
  unstable.dt = 1.0;
  unstable.sample_every = 1.0;
  CHECK_THROWS_AS(evolve(params(0.0), projector(top), unstable), NumericalError);

  EvolveOptions ragged;
  ragged.t_end = 1.0;
  ragged.dt = 0.3;
  CHECK_THROWS_AS(evolve(params(0.0), projector(top), ragged), ConfigError);
  CHECK_THROWS_AS(evolve(params(0.0), Matrix::Identity(4, 4), EvolveOptions{}), ConfigError);
  CHECK_THROWS_AS(parse_mode("euler"), ConfigError);
  CHECK(parse_mode(to_string(EvolutionMode::kNonHermitianRenormalized)) == EvolutionMode::kNonHermitianRenormalized);
}

TEST_CASE("renormalized non-Hermitian mode keeps unit trace") {
  const ModelParams p = params(0.5);
  EvolveOptions o;
  o.t_end = 5.0;
  o.mode = EvolutionMode::kNonHermitianRenormalized;
  const Trajectory t = evolve(p, assemble_state(p, 2, 2), o);
  for (const Observables& obs : t.observables) CHECK(std::abs(obs.trace - 1.0) < 1e-12);
}

TEST_CASE("trajectory CSV layout") {
  const BasisMap b(2);
  const ModelParams p{0.0, 0.0, 1.0, 2};
  EvolveOptions o;
  o.t_end = 0.01;
  o.sample_every = 0.01;
  const std::string csv = trajectory_csv(evolve(p, projector(dark_state(b, 0)), o));
  CHECK(csv.rfind("t,trace,purity,total_n,intensity,pop_ground,pop_n1_dark,pop_manifold_0,pop_manifold_1,"
                  "pop_manifold_2\n0,1,1,0,0,1,0,1,0,0\n",
                  0) == 0);
}

// Registered as its own ctest entry.
TEST_CASE("two-mode agreement" * doctest::test_suite("two_mode")) {
  const ModelParams p = params(0.5);
  const Matrix rho0 = gram_schmidt_dark_state(p, 2);
  EvolveOptions o;
  o.t_end = 20.0;
  const Trajectory lindblad = evolve(p, rho0, o);
  o.mode = EvolutionMode::kNonHermitianRenormalized;
  const Trajectory renormalized = evolve(p, rho0, o);
  CHECK(max_population_gap(lindblad, renormalized) <= 0.02);
}
