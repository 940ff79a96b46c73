#include "darkstate/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "darkstate/linalg.hpp"

namespace darkstate {

namespace {

constexpr double kSignificantComponent = 1e-8;
constexpr double kSelfOrthogonalFloor = 1e-12;
constexpr double kAmbiguityMargin = 0.1;

void fix_right_phase(Vector& v) {
  v.normalize();
  const double biggest = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > kSignificantComponent * biggest) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = std::abs(v(i));
      return;
    }
  }
}

// Scales `left` so that <left|right> = 1 and returns the unit-vector overlap magnitude.
double pair_left_with_right(Vector& left, const Vector& right) {
  left.normalize();
  const Complex overlap = left.dot(right) / right.norm();
  const double magnitude = std::abs(overlap);
  if (magnitude > kSelfOrthogonalFloor) left /= std::conj(left.dot(right));
  return magnitude;
}

EigenPair make_pair(Complex lambda, Vector right, Vector left, int manifold) {
  EigenPair pair;
  pair.lambda = lambda;
  pair.manifold = manifold;
  pair.decay_rate = -lambda.imag();
  fix_right_phase(right);
  pair.self_overlap = pair_left_with_right(left, right);
  pair.right = std::move(right);
  pair.left = std::move(left);
  return pair;
}

void sort_by_decay(std::vector<EigenPair>& pairs) {
  auto key = [](const EigenPair& p) {
    return std::make_tuple(std::llround(p.decay_rate * 1e9), p.lambda.real());
  };
  std::stable_sort(pairs.begin(), pairs.end(),
                   [&](const EigenPair& a, const EigenPair& b) { return key(a) < key(b); });
}

// Overlap-maximizing assignment prev -> current. Exhaustive for small blocks.
std::vector<int> best_assignment(const RealVector& flat, int n) {
  auto overlap = [&](int i, int j) { return flat(i * n + j); };
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  if (n <= 8) {
    std::vector<int> best = perm;
    double best_score = -1.0;
    do {
      double score = 0.0;
      for (int i = 0; i < n; ++i) score += overlap(i, perm[static_cast<std::size_t>(i)]);
      if (score > best_score + 1e-14) {
        best_score = score;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (int i = 0; i < n; ++i) {
    int choice = -1;
    for (int j = 0; j < n; ++j) {
      if (!used[static_cast<std::size_t>(j)] && (choice < 0 || overlap(i, j) > overlap(i, choice))) choice = j;
    }
    used[static_cast<std::size_t>(choice)] = true;
    perm[static_cast<std::size_t>(i)] = choice;
  }
  return perm;
}

}  // namespace

std::string StateClass::label() const {
  switch (kind) {
    case StateKind::kDark:
      return "dark";
    case StateKind::kBright:
      return "bright";
    case StateKind::kFaint:
      return fmt::format("faint{}", faint_index);
  }
  return "unknown";
}

int EigenSystem::index_of_dark() const {
  for (int i = 0; i < size(); ++i) {
    if (pairs[static_cast<std::size_t>(i)].state_class.kind == StateKind::kDark) return i;
  }
  return 0;
}

const EigenPair& EigenSystem::dark() const { return pairs.at(static_cast<std::size_t>(index_of_dark())); }

EigenSystem eig_nonhermitian(const Matrix& block, int manifold, double u) {
  if (block.rows() != block.cols() || block.rows() == 0) {
    throw ConfigError("eig_nonhermitian needs a non-empty square matrix");
  }
  if (!block.allFinite()) throw NumericalError("matrix has non-finite entries");

  const Eigen::Index n = block.rows();
  Eigen::ComplexSchur<Matrix> schur(n);
  schur.setMaxIterations(60 * n);
  schur.compute(block, true);
  if (schur.info() != Eigen::Success) {
    throw NumericalError(fmt::format("complex QR iteration did not converge (manifold {}, u = {})", manifold, u));
  }
  const Matrix& t = schur.matrixT();
  const Matrix& q = schur.matrixU();
  const double t_norm = std::max(t.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  const double small_pivot = std::numeric_limits<double>::epsilon() * t_norm;
  auto guarded = [&](Complex d) { return std::abs(d) < small_pivot ? Complex(small_pivot, 0.0) : d; };

  EigenSystem system;
  system.manifold = manifold;
  system.u = u;
  system.pairs.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex lambda = t(k, k);

    // Right: T x = lambda x, back substitution over the leading k+1 rows.
    Vector x = Vector::Zero(n);
    x(k) = 1.0;
    for (Eigen::Index i = k - 1; i >= 0; --i) {
      Complex s = 0.0;
      for (Eigen::Index j = i + 1; j <= k; ++j) s += t(i, j) * x(j);
      x(i) = -s / guarded(t(i, i) - lambda);
    }

    // Left: T^dagger y = conj(lambda) y, forward substitution from row k.
    Vector y = Vector::Zero(n);
    y(k) = 1.0;
    for (Eigen::Index i = k + 1; i < n; ++i) {
      Complex s = 0.0;
      for (Eigen::Index j = k; j < i; ++j) s += std::conj(t(j, i)) * y(j);
      y(i) = -s / guarded(std::conj(t(i, i)) - std::conj(lambda));
    }

    system.pairs.push_back(make_pair(lambda, q * x, q * y, manifold));
  }
  sort_by_decay(system.pairs);
  return system;
}

EigenSystem classify(EigenSystem system) {
  const int n = system.size();
  for (int i = 0; i < n; ++i) {
    auto& c = system.pairs[static_cast<std::size_t>(i)].state_class;
    if (i == 0) {
      c = {StateKind::kDark, 0};
    } else if (i == n - 1) {
      c = {StateKind::kBright, 0};
    } else {
      c = {StateKind::kFaint, i};
    }
  }
  return system;
}

EigenSystem manifold_spectrum(const ModelParams& params, const BasisMap& basis, int manifold) {
  const ManifoldBlock block = manifold_block(basis, build_h_eff(params, basis), manifold);
  return classify(eig_nonhermitian(block.matrix, manifold, params.u));
}

double right_residual(const Matrix& block, const EigenPair& pair) {
  return (block * pair.right - pair.lambda * pair.right).norm() / pair.right.norm();
}

double left_residual(const Matrix& block, const EigenPair& pair) {
  return (block.adjoint() * pair.left - std::conj(pair.lambda) * pair.left).norm() / pair.left.norm();
}

Matrix biorthogonality_matrix(const EigenSystem& system) {
  const int n = system.size();
  Matrix b(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      b(i, j) = system.pairs[static_cast<std::size_t>(i)].left.dot(system.pairs[static_cast<std::size_t>(j)].right);
    }
  }
  return b;
}

bool SweepResult::any_ambiguous() const { return std::find(ambiguous.begin(), ambiguous.end(), true) != ambiguous.end(); }

const EigenPair& SweepResult::on_branch(std::size_t g, int branch) const {
  const auto& ids = branch_ids.at(g);
  const auto it = std::find(ids.begin(), ids.end(), branch);
  if (it == ids.end()) throw ConfigError(fmt::format("branch {} not present at grid point {}", branch, g));
  return systems[g].pairs[static_cast<std::size_t>(it - ids.begin())];
}

SweepResult sweep_u(const ModelParams& params, int manifold, std::span<const double> u_grid) {
  if (u_grid.empty()) throw ConfigError("u grid is empty");
  for (double u : u_grid) {
    if (!(u >= 0.0) || !std::isfinite(u)) throw ConfigError(fmt::format("u grid value {} must be >= 0", u));
  }
  const BasisMap basis(params.local_dim);

  SweepResult result;
  result.manifold = manifold;
  for (double u : u_grid) {
    result.u.push_back(u);
    result.systems.push_back(manifold_spectrum(params.with_u(u), basis, manifold));
  }

  const int n = result.systems.front().size();
  std::vector<int> first(static_cast<std::size_t>(n));
  std::iota(first.begin(), first.end(), 0);
  result.branch_ids.push_back(first);
  result.ambiguous.push_back(false);

  for (std::size_t g = 1; g < result.systems.size(); ++g) {
    const auto& prev = result.systems[g - 1].pairs;
    const auto& cur = result.systems[g].pairs;
    RealVector flat(n * n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        flat(i * n + j) = std::abs(prev[static_cast<std::size_t>(i)].right.dot(cur[static_cast<std::size_t>(j)].right));
      }
    }
    const std::vector<int> perm = best_assignment(flat, n);

    bool ambiguous = false;
    std::vector<int> ids(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
      const int j = perm[static_cast<std::size_t>(i)];
      ids[static_cast<std::size_t>(j)] = result.branch_ids[g - 1][static_cast<std::size_t>(i)];
      double alternative = 0.0;
      for (int k = 0; k < n; ++k) {
        if (k != j) alternative = std::max(alternative, flat(i * n + k));
      }
      if (flat(i * n + j) - alternative < kAmbiguityMargin) ambiguous = true;
    }
    result.branch_ids.push_back(std::move(ids));
    result.ambiguous.push_back(ambiguous);
  }
  return result;
}

EigenSystem AnalyticN2::system() const {
  EigenSystem s;
  s.manifold = 2;
  s.u = 0.0;
  s.pairs.assign(psi.begin(), psi.end());
  sort_by_decay(s.pairs);
  return classify(std::move(s));
}

AnalyticN2 analytic_n2(const ModelParams& params) {
  params.validate();
  const double u = params.u;
  const double g = params.gamma;
  const double w2 = 2.0 * params.omega;
  // Principal branch: sqrt(U^2 - 4 g^2) = i sqrt(4 g^2 - U^2) below the exceptional point.
  const Complex root = std::sqrt(Complex(u * u - 4.0 * g * g, 0.0));

  // N = 2 sub-basis order is (0,2), (1,1), (2,0).
  auto symmetric = [&](Complex middle) {
    Vector v(3);
    v << 1.0, middle, 1.0;
    return v;
  };
  Vector psi1(3);
  psi1 << -1.0, 0.0, 1.0;
  const Vector psi2 = symmetric(kI * (u - root) / (std::sqrt(2.0) * g));
  const Vector psi3 = symmetric(kI * (u + root) / (std::sqrt(2.0) * g));

  const std::array<Complex, 3> lambdas = {w2 - u - kI * g, w2 - u / 2.0 - kI * g - root / 2.0,
                                          w2 - u / 2.0 - kI * g + root / 2.0};
  const std::array<Vector, 3> rights = {psi1, psi2, psi3};

  AnalyticN2 out;
  out.degenerate = std::abs(u - 2.0 * g) <= 1e-12 * g;
  for (std::size_t i = 0; i < 3; ++i) {
    out.psi[i] = make_pair(lambdas[i], rights[i], rights[i].conjugate(), 2);
  }
  const EigenSystem sorted = out.system();
  for (auto& p : out.psi) {
    for (const auto& s : sorted.pairs) {
      if (s.lambda == p.lambda && s.right == p.right) p.state_class = s.state_class;
    }
  }
  return out;
}

EigenGap min_eigen_gap(const EigenSystem& system) {
  EigenGap best{std::numeric_limits<double>::infinity(), 0, 0};
  for (int i = 0; i < system.size(); ++i) {
    for (int j = i + 1; j < system.size(); ++j) {
      const double gap = std::abs(system.pairs[static_cast<std::size_t>(i)].lambda -
                                  system.pairs[static_cast<std::size_t>(j)].lambda);
      if (gap < best.gap) best = {gap, i, j};
    }
  }
  return best;
}

std::vector<ExceptionalPoint> exceptional_point_scan(const ModelParams& params, int manifold, double u_lo,
                                                     double u_hi, int grid_points) {
  if (!(u_lo < u_hi)) throw ConfigError(fmt::format("need u_lo < u_hi, got ({}, {})", u_lo, u_hi));
  if (u_lo < 0.0) throw ConfigError("u_lo must be >= 0");
  if (grid_points < 3) throw ConfigError("EP scan needs at least 3 grid points");

  const BasisMap basis(params.local_dim);
  auto spectrum_at = [&](double u) { return manifold_spectrum(params.with_u(u), basis, manifold); };
  auto gap_at = [&](double u) { return min_eigen_gap(spectrum_at(u)).gap; };

  std::vector<double> grid(static_cast<std::size_t>(grid_points));
  std::vector<double> gaps(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    grid[k] = u_lo + (u_hi - u_lo) * static_cast<double>(k) / static_cast<double>(grid_points - 1);
    gaps[k] = gap_at(grid[k]);
  }
  if (!std::isfinite(gaps.front())) return {};  // one-dimensional block

  std::vector<ExceptionalPoint> found;
  const std::size_t last = grid.size() - 1;
  for (std::size_t k = 0; k <= last; ++k) {
    const double left = k > 0 ? gaps[k - 1] : std::numeric_limits<double>::infinity();
    const double right = k < last ? gaps[k + 1] : std::numeric_limits<double>::infinity();
    if (!(gaps[k] < std::min(left, right) - 1e-12 || (gaps[k] < kEpGapTolerance))) continue;

    // Golden-section search on the gap cusp inside the bracketing grid cells.
    double a = grid[k > 0 ? k - 1 : 0];
    double b = grid[k < last ? k + 1 : last];
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double fc = gap_at(c);
    double fd = gap_at(d);
    for (int iter = 0; iter < 200 && (b - a) > 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, b);
         ++iter) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - ratio * (b - a);
        fc = gap_at(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + ratio * (b - a);
        fd = gap_at(d);
      }
    }
    double u_star = 0.5 * (a + b);
    double best = gap_at(u_star);
    for (double candidate : {a, b, c, d}) {
      const double value = gap_at(candidate);
      if (value < best) {
        best = value;
        u_star = candidate;
      }
    }
    if (best >= kEpGapTolerance) continue;
    const bool duplicate = std::any_of(found.begin(), found.end(), [&](const ExceptionalPoint& ep) {
      return std::abs(ep.u - u_star) < 1e-6;
    });
    if (duplicate) continue;

    const EigenSystem system = spectrum_at(u_star);
    const EigenGap pair = min_eigen_gap(system);
    found.push_back({u_star, pair.first, pair.second, pair.gap,
                     std::max(system.pairs[static_cast<std::size_t>(pair.first)].self_overlap,
                              system.pairs[static_cast<std::size_t>(pair.second)].self_overlap)});
  }
  return found;
}

std::string spectrum_csv_rows(const EigenSystem& system, std::span<const int> branch_ids) {
  std::string out;
  for (int i = 0; i < system.size(); ++i) {
    const EigenPair& p = system.pairs[static_cast<std::size_t>(i)];
    const int branch = branch_ids.empty() ? i : branch_ids[static_cast<std::size_t>(i)];
    out += fmt::format("{},{},{:.15g},{:.15g},{:.15g},{:.15g},{}\n", system.manifold, branch, system.u,
                       p.lambda.real(), p.lambda.imag(), p.decay_rate, p.state_class.label());
  }
  return out;
}

}  // namespace darkstate
