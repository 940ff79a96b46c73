#pragma once

#include <vector>

#include "darkstate/spectra.hpp"
#include "darkstate/types.hpp"

namespace darkstate {

/// Pivot magnitude (unit vectors) at or below which biorthogonalization aborts.
inline constexpr double kBiorthoPivotFloor = 1e-10;
/// Pivot magnitude below which the result is flagged as near an exceptional point.
inline constexpr double kBiorthoPivotWarning = 0.1;

struct BiorthoBasis {
  /// Indexed like the inputs: rights[i] is the corrected version of input i.
  std::vector<Vector> rights;
  std::vector<Vector> lefts;
  std::vector<int> order;
  /// |<phi_L|phi_R>| / (|phi_L| |phi_R|) for each input, before rescaling.
  std::vector<double> pivots;
  bool near_exceptional_point = false;
};

/// Simultaneous left/right Gram-Schmidt. Processing follows `order`; each new right vector is
/// deflated against the already corrected left vectors and vice versa. Outputs have unit-norm
/// rights and lefts scaled so that <L_i|R_i> = 1.
/// Throws ExceptionalPointError if a pivot falls to kBiorthoPivotFloor.
BiorthoBasis biorthogonalize(const std::vector<Vector>& rights, const std::vector<Vector>& lefts,
                             const std::vector<int>& order);

/// Processing order for a classified manifold eigensystem: states of opposite exchange parity to
/// the dark state first (ascending decay), then same-parity states by descending decay, ending on
/// the dark-descended state. Identity for N <= 1, where the block does not depend on U.
std::vector<int> default_order(const EigenSystem& system);

/// Biorthogonalizes a whole eigensystem in its default order.
BiorthoBasis biorthogonalize(const EigenSystem& system);

}  // namespace darkstate
