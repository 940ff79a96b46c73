#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "darkstate/types.hpp"

namespace darkstate {

/// Two-site Fock label (n1, n2).
struct FockLabel {
  int n1 = 0;
  int n2 = 0;
  [[nodiscard]] int total() const { return n1 + n2; }
  auto operator<=>(const FockLabel&) const = default;
};

/// Two-site bosonic basis ordered lexicographically in (n1, n2).
class BasisMap {
 public:
  explicit BasisMap(int local_dim);

  [[nodiscard]] int local_dim() const { return local_dim_; }
  [[nodiscard]] int size() const { return static_cast<int>(labels_.size()); }
  [[nodiscard]] int max_manifold() const { return 2 * (local_dim_ - 1); }
  [[nodiscard]] const std::vector<FockLabel>& labels() const { return labels_; }
  [[nodiscard]] const FockLabel& label(int position) const { return labels_.at(position); }
  [[nodiscard]] int index_of(int n1, int n2) const;

  /// Ordered basis positions with n1 + n2 = manifold (empty if out of range).
  [[nodiscard]] const std::vector<int>& manifold(int manifold) const;
  [[nodiscard]] int manifold_size(int manifold) const {
    return static_cast<int>(this->manifold(manifold).size());
  }

 private:
  int local_dim_;
  std::vector<FockLabel> labels_;
  std::map<int, std::vector<int>> manifold_index_;
};

/// Throws ConfigError for local_dim < 2.
BasisMap enumerate_basis(int local_dim);

/// Annihilation operator on site 1 or 2, identity on the other.
Matrix site_annihilation(const BasisMap& basis, int site);
Matrix site_number(const BasisMap& basis, int site);
Matrix total_number(const BasisMap& basis);

/// b = (a1 + a2)/sqrt(2)
Matrix bright_mode(const BasisMap& basis);
/// d = (a1 - a2)/sqrt(2)
Matrix dark_mode(const BasisMap& basis);

/// Normalized (b^dagger)^k (d^dagger)^m |00>, supported on manifold k + m.
/// Throws TruncationError when any site occupation would reach local_dim.
Vector collective_mode_state(const BasisMap& basis, int k_bright, int m_dark);

/// A square operator restricted to a single excitation manifold.
struct ManifoldBlock {
  int manifold = 0;
  std::vector<int> positions;  // full-basis positions, in manifold order
  Matrix matrix;
};

/// Extracts the manifold block; throws BlockStructureError if `op` couples manifolds
/// (any cross-manifold entry above `tolerance`).
ManifoldBlock manifold_block(const BasisMap& basis, const Matrix& op, int manifold,
                             double tolerance = 1e-12);

/// Largest |entry| that connects different excitation manifolds.
double cross_manifold_magnitude(const BasisMap& basis, const Matrix& op);

/// Restricts a full-basis vector to a manifold's ordered sub-basis.
Vector restrict_to_manifold(const BasisMap& basis, const Vector& v, int manifold);
/// Embeds a manifold vector into the full basis (zeros elsewhere).
Vector embed_from_manifold(const BasisMap& basis, const Vector& v, int manifold);

/// "row,col,re,im" rows for entries with |entry| > 1e-14.
std::string matrix_dump_csv(const Matrix& m);

}  // namespace darkstate
