#pragma once

#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "darkstate/fock_space.hpp"
#include "darkstate/model.hpp"
#include "darkstate/types.hpp"

namespace darkstate {

enum class EvolutionMode {
  kLindblad,                 // -i[H_BH, rho] + C rho C^dag - 1/2 {C^dag C, rho}
  kNonHermitianRenormalized  // -i(H_eff rho - rho H_eff^dag) + C rho C^dag, trace reset every step
};

EvolutionMode parse_mode(const std::string& name);
std::string to_string(EvolutionMode mode);

/// Generator of the density-matrix dynamics with cached sparse operators.
class MasterEquation {
 public:
  MasterEquation(const ModelParams& params, EvolutionMode mode = EvolutionMode::kLindblad);

  [[nodiscard]] Matrix apply(const Matrix& rho) const;
  [[nodiscard]] const BasisMap& basis() const { return basis_; }
  [[nodiscard]] EvolutionMode mode() const { return mode_; }

 private:
  using Sparse = Eigen::SparseMatrix<Complex>;

  BasisMap basis_;
  EvolutionMode mode_;
  // rhs = -i(K rho - rho K^dag) + C rho C^dag, with K = H_BH - (i/2) C^dag C (lindblad) or H_eff.
  Sparse generator_;
  Sparse jump_;
};

/// Lindblad right-hand side for a single collective channel.
Matrix lindblad_rhs(const ModelParams& params, const Matrix& rho);

struct EvolveOptions {
  double t_end = 10.0;
  double dt = 0.005;
  double sample_every = 0.05;
  EvolutionMode mode = EvolutionMode::kLindblad;
  bool keep_states = false;
};

struct Observables {
  double t = 0.0;
  std::vector<double> pop_by_manifold;
  double pop_ground = 0.0;
  double pop_n1_dark = 0.0;
  double total_n = 0.0;
  double intensity = 0.0;  // gamma <b^dag b>
  double trace = 0.0;
  double purity = 0.0;
  double hermiticity_defect = 0.0;
  double min_eigenvalue = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Matrix> states;  // empty unless keep_states
  std::vector<Observables> observables;
  Matrix final_state;
  int max_manifold = 0;
};

/// Observables of a single density matrix.
Observables observe(const ModelParams& params, const Matrix& rho, double t = 0.0);

/// Renormalizes and clips a candidate initial state (threshold 1e-12).
Matrix prepare_initial_state(const Matrix& rho);

/// Fixed-step RK4. Lindblad mode aborts with NumericalError once |tr rho - 1| exceeds 1e-6.
Trajectory evolve(const ModelParams& params, const Matrix& rho0, const EvolveOptions& options);

struct TimeSeries {
  std::vector<double> t;
  std::vector<double> value;
};

/// Photon emission intensity gamma <b^dag b>(t); positive while photons leave.
TimeSeries intensity(const Trajectory& trajectory);

struct BurstMetrics {
  double t_peak = 0.0;
  double i_peak = 0.0;
  double i_initial = 0.0;
  bool is_burst = false;
};

BurstMetrics burst_metrics(const TimeSeries& series);

struct ParityEndpoint {
  double ground_pop = 0.0;
  double n1_dark_pop = 0.0;
  double n1_dark_drift = 0.0;  // per unit time over the last sample interval
};

/// Evolves the second-order perturbative dark state of manifold N (Lindblad mode, default step).
ParityEndpoint parity_endpoint(const ModelParams& params, int manifold, double t_end = 50.0);

/// Dark-descended right eigenvector of the manifold after biorthogonal Gram-Schmidt, as a
/// projector on the full basis. Throws ExceptionalPointError near a coalescence.
Matrix gram_schmidt_dark_state(const ModelParams& params, int manifold);

/// Rows "t,trace,purity,total_n,intensity,pop_ground,pop_n1_dark,pop_manifold_0..".
std::string trajectory_csv(const Trajectory& trajectory);

}  // namespace darkstate
