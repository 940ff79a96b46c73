#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "darkstate/fock_space.hpp"
#include "darkstate/model.hpp"
#include "darkstate/types.hpp"

namespace darkstate {

enum class StateKind { kDark, kFaint, kBright };

struct StateClass {
  StateKind kind = StateKind::kFaint;
  int faint_index = 0;  // 1-based rank among faint states, 0 otherwise

  [[nodiscard]] std::string label() const;
  bool operator==(const StateClass&) const = default;
};

/// Complex eigenvalue lambda = E - i Gamma with its right and left eigenvectors.
///
/// Right vectors have unit norm and their first significant component is real-positive.
/// Left vectors are scaled so that <left|right> = 1, except when the pair is
/// (numerically) self-orthogonal, in which case the left vector is kept at unit norm.
struct EigenPair {
  Complex lambda;
  Vector right;
  Vector left;
  int manifold = 0;
  double decay_rate = 0.0;
  StateClass state_class;
  /// |<left|right>| with both vectors at unit norm; vanishes at an exceptional point.
  double self_overlap = 1.0;
};

struct EigenSystem {
  int manifold = 0;
  double u = 0.0;
  std::vector<EigenPair> pairs;  // ascending decay rate

  [[nodiscard]] int size() const { return static_cast<int>(pairs.size()); }
  [[nodiscard]] const EigenPair& dark() const;
  [[nodiscard]] int index_of_dark() const;
};

/// Full eigensystem of a small dense non-Hermitian matrix (complex Schur + triangular solves).
/// Throws NumericalError if the QR iteration does not converge.
EigenSystem eig_nonhermitian(const Matrix& block, int manifold = 0, double u = 0.0);

/// Labels the smallest decay rate Dark, the largest Bright, the rest Faint(k) in ascending order.
/// A one-state system is Dark.
EigenSystem classify(EigenSystem system);

/// Builds H_eff, extracts the manifold block, diagonalizes and classifies it.
EigenSystem manifold_spectrum(const ModelParams& params, const BasisMap& basis, int manifold);

double right_residual(const Matrix& block, const EigenPair& pair);
double left_residual(const Matrix& block, const EigenPair& pair);

/// Entry (i, j) is <left_i|right_j>.
Matrix biorthogonality_matrix(const EigenSystem& system);

struct SweepResult {
  int manifold = 0;
  std::vector<double> u;
  std::vector<EigenSystem> systems;
  /// branch_ids[g][i] is the branch followed by pair i of systems[g].
  std::vector<std::vector<int>> branch_ids;
  /// Grid points where overlap-based matching had no dominant assignment.
  std::vector<bool> ambiguous;

  [[nodiscard]] bool any_ambiguous() const;
  /// Pair of systems[g] that belongs to `branch`.
  [[nodiscard]] const EigenPair& on_branch(std::size_t g, int branch) const;
};

SweepResult sweep_u(const ModelParams& params, int manifold, std::span<const double> u_grid);

/// Closed-form N = 2 eigenpairs.
struct AnalyticN2 {
  std::array<EigenPair, 3> psi;  // psi_1 (antisymmetric), psi_2, psi_3 (dark-descended)
  bool degenerate = false;       // U = 2 gamma: psi_2 == psi_3

  /// The same pairs sorted and classified like eig_nonhermitian output.
  [[nodiscard]] EigenSystem system() const;
};

AnalyticN2 analytic_n2(const ModelParams& params);

struct ExceptionalPoint {
  double u = 0.0;
  int first = 0;   // pair indices in the sorted eigensystem at u
  int second = 0;
  double gap = 0.0;
  double self_overlap = 0.0;  // max |<L|R>| over the coalescing pair (unit vectors)
};

inline constexpr double kEpGapTolerance = 1e-6;

/// Locates coalescences in [u_lo, u_hi]: grid minima of the smallest eigenvalue gap are refined
/// by golden-section bracketing and kept if the gap drops below kEpGapTolerance.
std::vector<ExceptionalPoint> exceptional_point_scan(const ModelParams& params, int manifold, double u_lo,
                                                     double u_hi, int grid_points = 501);

/// Smallest |lambda_i - lambda_j| and the indices achieving it.
struct EigenGap {
  double gap = 0.0;
  int first = 0;
  int second = 0;
};
EigenGap min_eigen_gap(const EigenSystem& system);

/// Rows "manifold,branch_id,u,re_lambda,im_lambda,decay_rate,class".
inline constexpr const char* kSpectrumCsvHeader = "manifold,branch_id,u,re_lambda,im_lambda,decay_rate,class";
std::string spectrum_csv_rows(const EigenSystem& system, std::span<const int> branch_ids = {});

}  // namespace darkstate
