#include "darkstate/dynamics.hpp"

#include <cmath>

#include <fmt/format.h>

#include "darkstate/biortho.hpp"
#include "darkstate/linalg.hpp"
#include "darkstate/perturbation.hpp"
#include "darkstate/spectra.hpp"

namespace darkstate {

namespace {

constexpr double kTraceAbort = 1e-6;

Eigen::SparseMatrix<Complex> sparse(const Matrix& m) { return m.sparseView(Complex(1e-300), 1.0); }

long whole_steps(double span, double dt, const char* what) {
  const double ratio = span / dt;
  const long steps = std::lround(ratio);
  if (std::abs(ratio - static_cast<double>(steps)) > 1e-6 * std::max(1.0, ratio)) {
    throw ConfigError(fmt::format("{} = {} is not a whole number of steps dt = {}", what, span, dt));
  }
  return steps;
}

}  // namespace

EvolutionMode parse_mode(const std::string& name) {
  if (name == "lindblad") return EvolutionMode::kLindblad;
  if (name == "nonhermitian_renormalized") return EvolutionMode::kNonHermitianRenormalized;
  throw ConfigError(fmt::format("unknown evolution mode '{}'", name));
}

std::string to_string(EvolutionMode mode) {
  return mode == EvolutionMode::kLindblad ? "lindblad" : "nonhermitian_renormalized";
}

MasterEquation::MasterEquation(const ModelParams& params, EvolutionMode mode)
    : basis_(params.local_dim), mode_(mode) {
  params.validate();
  const Matrix c = build_collective_op(params, basis_);
  const Matrix k = mode == EvolutionMode::kLindblad ? Matrix(build_h_bh(params, basis_) - 0.5 * kI * c.adjoint() * c)
                                                    : build_h_eff(params, basis_);
  generator_ = sparse(k);
  jump_ = sparse(c);
}

// Only sparse * dense products: rho K^dag = (K rho^dag)^dag and C rho C^dag = C (C rho^dag)^dag.
Matrix MasterEquation::apply(const Matrix& rho) const {
  const Matrix rho_adj = rho.adjoint();
  Matrix k_rho(rho.rows(), rho.cols());
  Matrix k_rho_adj(rho.rows(), rho.cols());
  Matrix c_rho_adj(rho.rows(), rho.cols());
  k_rho.noalias() = generator_ * rho;
  k_rho_adj.noalias() = generator_ * rho_adj;
  c_rho_adj.noalias() = jump_ * rho_adj;
  const Matrix rho_c_adj = c_rho_adj.adjoint();
  Matrix out(rho.rows(), rho.cols());
  out.noalias() = jump_ * rho_c_adj;
  out += -kI * k_rho + kI * k_rho_adj.adjoint();
  return out;
}

Matrix lindblad_rhs(const ModelParams& params, const Matrix& rho) {
  return MasterEquation(params, EvolutionMode::kLindblad).apply(rho);
}

namespace {

// Operators needed for observables, built once per trajectory.
class Observer {
 public:
  explicit Observer(const ModelParams& params)
      : basis_(params.local_dim), n1_dark_(dark_state(basis_, 1)), ground_(basis_.index_of(0, 0)) {
    const Matrix c = build_collective_op(params, basis_);
    emission_ = c.adjoint() * c;
  }

  [[nodiscard]] const BasisMap& basis() const { return basis_; }

  [[nodiscard]] Observables operator()(const Matrix& rho, double t) const {
    Observables o;
    o.t = t;
    o.pop_by_manifold.assign(static_cast<std::size_t>(basis_.max_manifold() + 1), 0.0);
    for (int i = 0; i < basis_.size(); ++i) {
      const double p = rho(i, i).real();
      o.pop_by_manifold[static_cast<std::size_t>(basis_.label(i).total())] += p;
      o.total_n += basis_.label(i).total() * p;
    }
    o.pop_ground = rho(ground_, ground_).real();
    o.pop_n1_dark = n1_dark_.dot(rho * n1_dark_).real();
    o.intensity = expectation(emission_, rho).real();
    o.trace = rho.trace().real();
    o.purity = expectation(rho, rho).real();
    o.hermiticity_defect = hermiticity_defect(rho);
    o.min_eigenvalue = min_hermitian_eigenvalue(rho);
    return o;
  }

 private:
  BasisMap basis_;
  Vector n1_dark_;
  int ground_;
  Matrix emission_;  // C^dag C
};

}  // namespace

Observables observe(const ModelParams& params, const Matrix& rho, double t) { return Observer(params)(rho, t); }

Matrix prepare_initial_state(const Matrix& rho) { return clip_to_density(rho, 1e-12); }

Trajectory evolve(const ModelParams& params, const Matrix& rho0, const EvolveOptions& options) {
  params.validate();
  const BasisMap basis(params.local_dim);
  if (rho0.rows() != basis.size() || rho0.cols() != basis.size()) {
    throw ConfigError("initial state dimension does not match the basis");
  }
  if (!(options.dt > 0.0) || !(options.t_end >= 0.0) || !(options.sample_every > 0.0)) {
    throw ConfigError("evolve needs dt > 0, t_end >= 0 and sample_every > 0");
  }
  if (hermiticity_defect(rho0) > 1e-8) throw ConfigError("initial state is not Hermitian");

  const long total = whole_steps(options.t_end, options.dt, "t_end");
  const long per_sample = std::max(1L, whole_steps(options.sample_every, options.dt, "sample_every"));

  const MasterEquation generator(params, options.mode);
  const Observer observer(params);
  Matrix rho = prepare_initial_state(rho0);
  if (min_hermitian_eigenvalue(rho) < -1e-10) throw ConfigError("initial state is not positive semidefinite");

  Trajectory traj;
  traj.max_manifold = basis.max_manifold();
  auto record = [&](long step) {
    const double t = static_cast<double>(step) * options.dt;
    traj.times.push_back(t);
    traj.observables.push_back(observer(rho, t));
    if (options.keep_states) traj.states.push_back(rho);
  };

  record(0);
  const double h = options.dt;
  for (long step = 1; step <= total; ++step) {
    const Matrix k1 = generator.apply(rho);
    const Matrix k2 = generator.apply(rho + (0.5 * h) * k1);
    const Matrix k3 = generator.apply(rho + (0.5 * h) * k2);
    const Matrix k4 = generator.apply(rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const Complex tr = rho.trace();
    if (options.mode == EvolutionMode::kNonHermitianRenormalized) {
      rho /= tr;
    } else if (!(std::abs(tr - 1.0) <= kTraceAbort)) {
      throw NumericalError(fmt::format("trace drift {:.3e} at t = {} exceeds {:.0e}; reduce dt", std::abs(tr - 1.0),
                                       static_cast<double>(step) * h, kTraceAbort));
    }
    if (step % per_sample == 0 || step == total) record(step);
  }
  traj.final_state = rho;
  return traj;
}

TimeSeries intensity(const Trajectory& trajectory) {
  TimeSeries s;
  for (const auto& o : trajectory.observables) {
    s.t.push_back(o.t);
    s.value.push_back(o.intensity);
  }
  return s;
}

BurstMetrics burst_metrics(const TimeSeries& series) {
  if (series.value.empty() || series.t.size() != series.value.size()) {
    throw ConfigError("burst_metrics needs a non-empty series");
  }
  BurstMetrics m;
  m.i_initial = series.value.front();
  m.i_peak = series.value.front();
  m.t_peak = series.t.front();
  for (std::size_t i = 1; i < series.value.size(); ++i) {
    if (series.value[i] > m.i_peak) {
      m.i_peak = series.value[i];
      m.t_peak = series.t[i];
    }
  }
  m.is_burst = m.i_peak > m.i_initial + 1e-6 && m.t_peak > 0.0;
  return m;
}

ParityEndpoint parity_endpoint(const ModelParams& params, int manifold, double t_end) {
  if (manifold < 1) throw ConfigError("parity_endpoint needs N >= 1");
  EvolveOptions options;
  options.t_end = t_end;
  const Trajectory traj = evolve(params, assemble_state(params, manifold, 2), options);
  const auto& last = traj.observables.back();
  const auto& before = traj.observables[traj.observables.size() - 2];
  return {last.pop_ground, last.pop_n1_dark, (last.pop_n1_dark - before.pop_n1_dark) / (last.t - before.t)};
}

Matrix gram_schmidt_dark_state(const ModelParams& params, int manifold) {
  const BasisMap basis(params.local_dim);
  const EigenSystem system = manifold_spectrum(params, basis, manifold);
  const BiorthoBasis corrected = biorthogonalize(system);
  const Vector right = corrected.rights[static_cast<std::size_t>(system.index_of_dark())];
  const Vector full = embed_from_manifold(basis, right, manifold);
  return full * full.adjoint();
}

std::string trajectory_csv(const Trajectory& trajectory) {
  std::string out = "t,trace,purity,total_n,intensity,pop_ground,pop_n1_dark";
  for (int n = 0; n <= trajectory.max_manifold; ++n) out += fmt::format(",pop_manifold_{}", n);
  out += '\n';
  for (const auto& o : trajectory.observables) {
    out += fmt::format("{:.10g},{:.15g},{:.15g},{:.15g},{:.15g},{:.15g},{:.15g}", o.t, o.trace, o.purity, o.total_n,
                       o.intensity, o.pop_ground, o.pop_n1_dark);
    for (double p : o.pop_by_manifold) out += fmt::format(",{:.15g}", p);
    out += '\n';
  }
  return out;
}

}  // namespace darkstate
