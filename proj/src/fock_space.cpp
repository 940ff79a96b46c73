#include "darkstate/fock_space.hpp"

#include <cmath>

#include <fmt/format.h>

namespace darkstate {

BasisMap::BasisMap(int local_dim) : local_dim_(local_dim) {
  if (local_dim < 2) throw ConfigError(fmt::format("local_dim must be >= 2, got {}", local_dim));
  labels_.reserve(static_cast<std::size_t>(local_dim) * local_dim);
  for (int n1 = 0; n1 < local_dim; ++n1) {
    for (int n2 = 0; n2 < local_dim; ++n2) {
      manifold_index_[n1 + n2].push_back(static_cast<int>(labels_.size()));
      labels_.push_back({n1, n2});
    }
  }
}

int BasisMap::index_of(int n1, int n2) const {
  if (n1 < 0 || n2 < 0 || n1 >= local_dim_ || n2 >= local_dim_) {
    throw TruncationError(fmt::format("|{},{}> outside the truncated basis", n1, n2));
  }
  return n1 * local_dim_ + n2;
}

const std::vector<int>& BasisMap::manifold(int manifold) const {
  static const std::vector<int> empty;
  const auto it = manifold_index_.find(manifold);
  return it == manifold_index_.end() ? empty : it->second;
}

BasisMap enumerate_basis(int local_dim) { return BasisMap(local_dim); }

Matrix site_annihilation(const BasisMap& basis, int site) {
  if (site != 1 && site != 2) throw ConfigError(fmt::format("site must be 1 or 2, got {}", site));
  const int dim = basis.size();
  Matrix a = Matrix::Zero(dim, dim);
  for (int col = 0; col < dim; ++col) {
    const FockLabel& ket = basis.label(col);
    const int n = site == 1 ? ket.n1 : ket.n2;
    if (n == 0) continue;
    const int row = site == 1 ? basis.index_of(n - 1, ket.n2) : basis.index_of(ket.n1, n - 1);
    a(row, col) = std::sqrt(static_cast<double>(n));
  }
  return a;
}

Matrix site_number(const BasisMap& basis, int site) {
  if (site != 1 && site != 2) throw ConfigError(fmt::format("site must be 1 or 2, got {}", site));
  Vector diag(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    diag(i) = site == 1 ? basis.label(i).n1 : basis.label(i).n2;
  }
  return diag.asDiagonal();
}

Matrix total_number(const BasisMap& basis) { return site_number(basis, 1) + site_number(basis, 2); }

Matrix bright_mode(const BasisMap& basis) {
  return (site_annihilation(basis, 1) + site_annihilation(basis, 2)) / std::sqrt(2.0);
}

Matrix dark_mode(const BasisMap& basis) {
  return (site_annihilation(basis, 1) - site_annihilation(basis, 2)) / std::sqrt(2.0);
}

Vector collective_mode_state(const BasisMap& basis, int k_bright, int m_dark) {
  if (k_bright < 0 || m_dark < 0) {
    throw ConfigError(fmt::format("mode occupations must be non-negative ({}, {})", k_bright, m_dark));
  }
  // (b^dagger)^k (d^dagger)^m contains (a1^dagger)^(k+m) with nonzero weight.
  if (k_bright + m_dark >= basis.local_dim()) {
    throw TruncationError(fmt::format("collective state (k={}, m={}) needs occupation {} but local_dim is {}",
                                      k_bright, m_dark, k_bright + m_dark, basis.local_dim()));
  }
  const Matrix b_dag = bright_mode(basis).adjoint();
  const Matrix d_dag = dark_mode(basis).adjoint();
  Vector v = Vector::Zero(basis.size());
  v(basis.index_of(0, 0)) = 1.0;
  for (int i = 0; i < m_dark; ++i) v = d_dag * v;
  for (int i = 0; i < k_bright; ++i) v = b_dag * v;
  return v.normalized();
}

double cross_manifold_magnitude(const BasisMap& basis, const Matrix& op) {
  double worst = 0.0;
  for (int r = 0; r < op.rows(); ++r) {
    for (int c = 0; c < op.cols(); ++c) {
      if (basis.label(r).total() != basis.label(c).total()) worst = std::max(worst, std::abs(op(r, c)));
    }
  }
  return worst;
}

ManifoldBlock manifold_block(const BasisMap& basis, const Matrix& op, int manifold, double tolerance) {
  if (op.rows() != basis.size() || op.cols() != basis.size()) {
    throw ConfigError("operator dimension does not match the basis");
  }
  const double leak = cross_manifold_magnitude(basis, op);
  if (leak > tolerance) {
    throw BlockStructureError(
        fmt::format("operator is not block-diagonal in excitation number (cross entry {:.3e})", leak));
  }
  ManifoldBlock block;
  block.manifold = manifold;
  block.positions = basis.manifold(manifold);
  if (block.positions.empty()) {
    throw ConfigError(fmt::format("manifold {} is empty for local_dim {}", manifold, basis.local_dim()));
  }
  const auto n = static_cast<Eigen::Index>(block.positions.size());
  block.matrix.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) block.matrix(i, j) = op(block.positions[i], block.positions[j]);
  }
  return block;
}

Vector restrict_to_manifold(const BasisMap& basis, const Vector& v, int manifold) {
  const auto& positions = basis.manifold(manifold);
  Vector out(static_cast<Eigen::Index>(positions.size()));
  for (std::size_t i = 0; i < positions.size(); ++i) out(static_cast<Eigen::Index>(i)) = v(positions[i]);
  return out;
}

Vector embed_from_manifold(const BasisMap& basis, const Vector& v, int manifold) {
  const auto& positions = basis.manifold(manifold);
  if (static_cast<std::size_t>(v.size()) != positions.size()) {
    throw ConfigError("vector length does not match the manifold size");
  }
  Vector out = Vector::Zero(basis.size());
  for (std::size_t i = 0; i < positions.size(); ++i) out(positions[i]) = v(static_cast<Eigen::Index>(i));
  return out;
}

std::string matrix_dump_csv(const Matrix& m) {
  std::string out = "row,col,re,im\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (std::abs(m(r, c)) > 1e-14) {
        out += fmt::format("{},{},{:.17g},{:.17g}\n", r, c, m(r, c).real(), m(r, c).imag());
      }
    }
  }
  return out;
}

}  // namespace darkstate
