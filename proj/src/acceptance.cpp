#include "darkstate/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <utility>

#include <fmt/format.h>

#include "darkstate/biortho.hpp"
#include "darkstate/dynamics.hpp"
#include "darkstate/experiments.hpp"
#include "darkstate/linalg.hpp"
#include "darkstate/perturbation.hpp"
#include "darkstate/spectra.hpp"

namespace darkstate {

namespace {

// Sparse Fock kets keyed by (n1, n2), used to cross-check matrix elements without any of the
// library's operator matrices.
using Ket = std::map<std::pair<int, int>, Complex>;

Ket raise_collective(const Ket& in, double sign) {
  Ket out;
  const double r = 1.0 / std::sqrt(2.0);
  for (const auto& [occ, c] : in) {
    const auto [n1, n2] = occ;
    out[{n1 + 1, n2}] += r * std::sqrt(n1 + 1.0) * c;
    out[{n1, n2 + 1}] += sign * r * std::sqrt(n2 + 1.0) * c;
  }
  return out;
}

Ket collective_ket(int k_bright, int m_dark) {
  Ket ket{{{0, 0}, 1.0}};
  for (int i = 0; i < k_bright; ++i) ket = raise_collective(ket, 1.0);
  for (int i = 0; i < m_dark; ++i) ket = raise_collective(ket, -1.0);
  double norm = 0.0;
  for (const auto& [occ, c] : ket) norm += std::norm(c);
  for (auto& [occ, c] : ket) c /= std::sqrt(norm);
  return ket;
}

Complex anharmonic_element(const Ket& bra, const Ket& ket, double u) {
  Complex sum = 0.0;
  for (const auto& [occ, c] : ket) {
    const auto it = bra.find(occ);
    if (it == bra.end()) continue;
    const auto [n1, n2] = occ;
    const double diag = -0.5 * u * (n1 * (n1 - 1.0) + n2 * (n2 - 1.0));
    sum += std::conj(it->second) * diag * c;
  }
  return sum;
}

struct Recorder {
  std::vector<CriterionResult> results;

  void add(int id, std::string name, const std::function<std::pair<bool, std::string>()>& check) {
    CriterionResult r{id, std::move(name), false, {}};
    try {
      std::tie(r.passed, r.detail) = check();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = fmt::format("exception: {}", e.what());
    }
    results.push_back(std::move(r));
  }
};

double max_population_gap(const Trajectory& a, const Trajectory& b) {
  double gap = 0.0;
  const std::size_t n = std::min(a.observables.size(), b.observables.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& pa = a.observables[i].pop_by_manifold;
    const auto& pb = b.observables[i].pop_by_manifold;
    for (std::size_t k = 0; k < std::min(pa.size(), pb.size()); ++k) gap = std::max(gap, std::abs(pa[k] - pb[k]));
  }
  return gap;
}

}  // namespace

std::string format_result(const CriterionResult& r) {
  return fmt::format("{}  {:>2}  {}  ({})", r.passed ? "PASS" : "FAIL", r.id, r.name, r.detail);
}

std::vector<CriterionResult> run_acceptance() {
  Recorder rec;
  const ModelParams base{1.0, 0.0, 1.0, 6};

  rec.add(1, "harmonic decay-rate ladder", [&] {
    const BasisMap basis(base.local_dim);
    double worst = 0.0;
    bool unique_dark = true;
    for (int n = 0; n <= 5; ++n) {
      const EigenSystem sys = manifold_spectrum(base, basis, n);
      int dark_count = 0;
      for (int i = 0; i < sys.size(); ++i) {
        const double rate = sys.pairs[static_cast<std::size_t>(i)].decay_rate;
        worst = std::max(worst, std::abs(rate - i * base.gamma));
        if (std::abs(rate) < 1e-10) ++dark_count;
      }
      unique_dark = unique_dark && dark_count == 1 && sys.size() == n + 1;
    }
    return std::pair{worst <= 1e-10 && unique_dark,
                     fmt::format("max |Gamma - k gamma| = {:.2e}, one dark state per manifold: {}", worst, unique_dark)};
  });

  rec.add(2, "N=2 closed forms", [&] {
    const BasisMap basis(base.local_dim);
    double worst_lambda = 0.0;
    double worst_vector = 0.0;
    for (double u : {0.0, 0.5, 1.0, 1.9, 2.5}) {
      const ModelParams p = base.with_u(u);
      const EigenSystem numeric = manifold_spectrum(p, basis, 2);
      const EigenSystem exact = analytic_n2(p).system();
      for (const EigenPair& e : exact.pairs) {
        const auto match = std::min_element(numeric.pairs.begin(), numeric.pairs.end(), [&](const auto& a, const auto& b) {
          return std::abs(a.lambda - e.lambda) < std::abs(b.lambda - e.lambda);
        });
        worst_lambda = std::max(worst_lambda, std::abs(match->lambda - e.lambda));
        worst_vector = std::max(worst_vector, phase_insensitive_distance(e.right, match->right));
      }
    }
    return std::pair{worst_lambda <= 1e-10 && worst_vector <= 1e-8,
                     fmt::format("eigenvalue error {:.2e}, eigenvector error {:.2e}", worst_lambda, worst_vector)};
  });

  rec.add(3, "exceptional point location", [&] {
    const auto eps = exceptional_point_scan(base, 2, 0.0, 2.5);
    for (const ExceptionalPoint& ep : eps) {
      if (std::abs(ep.u - 2.0 * base.gamma) <= 1e-6) {
        return std::pair{ep.self_overlap < 1e-3,
                         fmt::format("u* = {:.12f}, gap {:.2e}, |<L|R>| = {:.2e}", ep.u, ep.gap, ep.self_overlap)};
      }
    }
    return std::pair{false, fmt::format("no coalescence within 1e-6 of 2 gamma ({} found)", eps.size())};
  });

  rec.add(4, "N=2 perturbative closed forms", [&] {
    const ModelParams p = base.with_u(0.3);
    const BasisMap basis(p.local_dim);
    const Vector ds = collective_mode_state(basis, 0, 2);
    const Vector bs = collective_mode_state(basis, 2, 0);
    const double r = p.u / (4.0 * p.gamma);
    const Complex lambda_c = total_energy_correction(p, 2);
    const double e_err = std::abs(lambda_c - Complex(-p.u / 2.0, -p.u * p.u / (8.0 * p.gamma)));
    const double phi1_err = max_abs(first_order_state(p, 2) - kI * r * bs);
    const double phi2_err = max_abs(second_order_state(p, 2) - Complex(-0.5 * r * r) * ds);
    const double worst = std::max({e_err, phi1_err, phi2_err});
    return std::pair{worst <= 1e-12,
                     fmt::format("lambda_c {:.2e}, phi1 {:.2e}, phi2 {:.2e}", e_err, phi1_err, phi2_err)};
  });

  rec.add(5, "small-U order of accuracy", [&] {
    bool ok = true;
    std::string detail;
    for (int n = 2; n <= 4; ++n) {
      const std::vector<double> u{0.025, 0.05, 0.075, 0.1};
      const auto numeric = numeric_dark_shift(base, n, u);
      std::vector<double> residual;
      for (std::size_t g = 0; g < u.size(); ++g) {
        residual.push_back(std::abs(numeric[g] - total_energy_correction(base.with_u(u[g]), n)));
      }
      const double factor = residual[3] / residual[1];
      const double overlay = *std::max_element(residual.begin(), residual.end());
      const bool pass = factor >= 6.0 && factor <= 10.0 && overlay <= 1e-3;
      ok = ok && pass;
      detail += fmt::format("{}N={}: factor {:.2f}, max residual {:.2e}", detail.empty() ? "" : "; ", n, factor, overlay);
    }
    return std::pair{ok, detail};
  });

  rec.add(6, "collective selection rule", [&] {
    const double u = 0.7;
    const ModelParams p = base.with_u(u);
    const BasisMap basis(p.local_dim);
    const Matrix h1 = split_h0_h1(p, basis).h1;
    double forbidden = 0.0;
    double magnitude_err = 0.0;
    double oracle_err = 0.0;
    for (int n = 0; n <= 5; ++n) {
      const Vector ds = collective_mode_state(basis, 0, n);
      const Ket ds_ket = collective_ket(0, n);
      for (int k = 0; k <= n; ++k) {
        const Complex amp = braket(collective_mode_state(basis, k, n - k), h1 * ds);
        const Complex reference = anharmonic_element(collective_ket(k, n - k), ds_ket, u);
        oracle_err = std::max(oracle_err, std::abs(amp - reference));
        if (k == 2) {
          magnitude_err =
              std::max(magnitude_err, std::abs(std::abs(amp) - u * std::sqrt(n * (n - 1.0)) / (2.0 * std::sqrt(2.0))));
        } else if (k != 0) {
          forbidden = std::max(forbidden, std::abs(amp));
        }
      }
    }
    return std::pair{forbidden <= 1e-12 && magnitude_err <= 1e-12 && oracle_err <= 1e-12,
                     fmt::format("forbidden {:.2e}, k=2 magnitude {:.2e}, oracle {:.2e}", forbidden, magnitude_err,
                                 oracle_err)};
  });

  rec.add(7, "biorthogonal Gram-Schmidt", [&] {
    const ModelParams p = base.with_u(0.5);
    const EigenSystem sys = manifold_spectrum(p, BasisMap(p.local_dim), 2);
    const BiorthoBasis out = biorthogonalize(sys);
    double delta = 0.0;
    for (int i = 0; i < sys.size(); ++i) {
      for (int j = 0; j < sys.size(); ++j) {
        const Complex overlap = braket(out.lefts[static_cast<std::size_t>(i)], out.rights[static_cast<std::size_t>(j)]);
        delta = std::max(delta, std::abs(overlap - (i == j ? 1.0 : 0.0)));
      }
    }
    double ends = 0.0;
    for (int idx : {out.order.front(), out.order.back()}) {
      const auto s = static_cast<std::size_t>(idx);
      ends = std::max(ends, max_abs(out.rights[s] - sys.pairs[s].right));
      ends = std::max(ends, max_abs(out.lefts[s] - sys.pairs[s].left));
    }
    return std::pair{delta <= 1e-10 && ends < 1e-12,
                     fmt::format("max |<L_i|R_j> - delta_ij| = {:.2e}, first/last change {:.2e}", delta, ends)};
  });

  // Shared dynamics runs: the N=2, U=0.5 scenario from both initializations, its U=0 control,
  // and the N=3 long run.
  ModelParams dyn = base;
  dyn.omega = 0.0;
  const ModelParams dyn_u = dyn.with_u(0.5);
  EvolveOptions options;
  options.t_end = 20.0;
  std::vector<Trajectory> runs;
  auto run = [&](const ModelParams& p, const Matrix& rho0, double t_end) -> const Trajectory& {
    EvolveOptions o = options;
    o.t_end = t_end;
    runs.push_back(evolve(p, rho0, o));
    return runs.back();
  };

  std::optional<Trajectory> numerical;
  std::optional<Trajectory> perturbative;
  auto scenario = [&] {
    if (!numerical) numerical = run(dyn_u, gram_schmidt_dark_state(dyn_u, 2), 20.0);
    if (!perturbative) perturbative = run(dyn_u, assemble_state(dyn_u, 2, 2), 20.0);
  };

  rec.add(8, "numerical vs perturbative dynamics", [&] {
    scenario();
    const double gap = max_population_gap(*numerical, *perturbative);
    const double g_num = numerical->observables.back().pop_ground;
    const double g_pert = perturbative->observables.back().pop_ground;
    return std::pair{gap <= 0.02 && g_num >= 0.99 && g_pert >= 0.99,
                     fmt::format("max population gap {:.2e}, ground at t=20: {:.4f} / {:.4f}", gap, g_num, g_pert)};
  });

  rec.add(9, "superradiant burst", [&] {
    scenario();
    const BurstMetrics a = burst_metrics(intensity(*numerical));
    const BurstMetrics b = burst_metrics(intensity(*perturbative));
    const Trajectory control = run(dyn, gram_schmidt_dark_state(dyn, 2), 20.0);
    const auto flat = intensity(control).value;
    const double control_max = *std::max_element(flat.begin(), flat.end(), [](double x, double y) {
      return std::abs(x) < std::abs(y);
    });
    auto burst = [](const BurstMetrics& m) { return m.is_burst && m.t_peak > 0.0 && m.i_peak > m.i_initial; };
    return std::pair{burst(a) && burst(b) && std::abs(control_max) < 1e-12,
                     fmt::format("peak {:.4f} at t={:.2f} from {:.4f}; U=0 control max {:.1e}", a.i_peak, a.t_peak,
                                 a.i_initial, std::abs(control_max))};
  });

  rec.add(10, "parity trapping", [&] {
    const ParityEndpoint odd = parity_endpoint(dyn_u, 3, 50.0);
    const ParityEndpoint even = parity_endpoint(dyn_u, 2, 50.0);
    run(dyn_u, assemble_state(dyn_u, 3, 2), 50.0);
    return std::pair{odd.n1_dark_pop > 0.1 && std::abs(odd.n1_dark_drift) < 1e-6 && even.ground_pop >= 0.99,
                     fmt::format("N=3 n1 dark {:.6f} (drift {:.1e}); N=2 ground {:.5f}", odd.n1_dark_pop,
                                 odd.n1_dark_drift, even.ground_pop)};
  });

  rec.add(11, "integrator hygiene", [&] {
    double trace_drift = 0.0;
    double herm = 0.0;
    double min_eig = 0.0;
    for (const Trajectory& t : runs) {
      for (const Observables& o : t.observables) {
        trace_drift = std::max(trace_drift, std::abs(o.trace - 1.0));
        herm = std::max(herm, o.hermiticity_defect);
        min_eig = std::min(min_eig, o.min_eigenvalue);
      }
    }
    const Matrix rho0 = gram_schmidt_dark_state(dyn_u, 2);
    auto final_state = [&](double dt) {
      EvolveOptions o;
      o.t_end = 5.0;
      o.dt = dt;
      o.sample_every = 0.1;
      return evolve(dyn_u, rho0, o).final_state;
    };
    const Matrix reference = final_state(0.0125);
    const double factor = max_abs(final_state(0.1) - reference) / max_abs(final_state(0.05) - reference);
    const bool ok = !runs.empty() && trace_drift <= 1e-8 && herm <= 1e-10 && min_eig >= -1e-8 && factor >= 12.0 &&
                    factor <= 20.0;
    return std::pair{ok, fmt::format("{} runs: trace drift {:.1e}, hermiticity {:.1e}, min eigenvalue {:.1e}; "
                                     "RK4 factor {:.2f}",
                                     runs.size(), trace_drift, herm, min_eig, factor)};
  });

  rec.add(12, "commutator diagnostic", [&] {
    const double harmonic = commutator_norm(base, BasisMap(6));
    ModelParams qubit = base.with_u(1.0);
    qubit.local_dim = 2;
    const double two_level = commutator_norm(qubit, BasisMap(2));
    const double anharmonic = commutator_norm(base.with_u(1.0), BasisMap(6));
    return std::pair{harmonic == 0.0 && two_level == 0.0 && anharmonic > 0.0,
                     fmt::format("U=0: {:.1e}, local_dim=2: {:.1e}, U=gamma: {:.4f}", harmonic, two_level, anharmonic)};
  });

  return rec.results;
}

}  // namespace darkstate
