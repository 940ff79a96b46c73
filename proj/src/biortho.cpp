#include "darkstate/biortho.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

namespace darkstate {

namespace {

// Expectation of the site-exchange operator; manifold members reversed are their mirror images.
double exchange_parity(const Vector& v) {
  return v.dot(v.reverse()).real() / v.squaredNorm();
}

}  // namespace

BiorthoBasis biorthogonalize(const std::vector<Vector>& rights, const std::vector<Vector>& lefts,
                             const std::vector<int>& order) {
  const std::size_t n = rights.size();
  if (lefts.size() != n || order.size() != n) throw ConfigError("biorthogonalize: list lengths differ");
  std::vector<int> check = order;
  std::sort(check.begin(), check.end());
  for (std::size_t i = 0; i < n; ++i) {
    if (check[i] != static_cast<int>(i)) throw ConfigError("biorthogonalize: order is not a permutation");
    if (rights[i].size() != rights.front().size() || lefts[i].size() != rights.front().size()) {
      throw ConfigError("biorthogonalize: vector dimensions differ");
    }
  }

  BiorthoBasis out;
  out.order = order;
  out.rights.resize(n);
  out.lefts.resize(n);
  out.pivots.assign(n, 0.0);

  std::vector<Vector> phi_r;
  std::vector<Vector> phi_l;
  for (int idx : order) {
    const auto k = static_cast<std::size_t>(idx);
    Vector r = rights[k];
    Vector l = lefts[k];
    for (std::size_t j = 0; j < phi_r.size(); ++j) {
      r -= (phi_l[j].dot(rights[k]) / phi_l[j].dot(phi_r[j])) * phi_r[j];
      l -= (phi_r[j].dot(lefts[k]) / phi_r[j].dot(phi_l[j])) * phi_l[j];
    }
    const double pivot = std::abs(l.dot(r)) / (l.norm() * r.norm());
    out.pivots[k] = pivot;
    if (!(pivot > kBiorthoPivotFloor)) {
      throw ExceptionalPointError(fmt::format(
          "biorthogonal pivot {:.3e} for vector {} is at the self-orthogonality floor (exceptional point)", pivot,
          idx));
    }
    if (pivot < kBiorthoPivotWarning) out.near_exceptional_point = true;
    phi_r.push_back(r);
    phi_l.push_back(l);

    r.normalize();
    l /= std::conj(l.dot(r));
    out.rights[k] = std::move(r);
    out.lefts[k] = std::move(l);
  }
  return out;
}

std::vector<int> default_order(const EigenSystem& system) {
  const int n = system.size();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  if (system.manifold <= 1 || n <= 1) return order;

  const int dark = system.index_of_dark();
  const double dark_parity = exchange_parity(system.pairs[static_cast<std::size_t>(dark)].right);
  std::vector<int> opposite;
  std::vector<int> same;
  for (int i = 0; i < n; ++i) {
    if (i == dark) continue;
    const double parity = exchange_parity(system.pairs[static_cast<std::size_t>(i)].right);
    (parity * dark_parity < 0.0 ? opposite : same).push_back(i);
  }
  auto decay = [&](int i) { return system.pairs[static_cast<std::size_t>(i)].decay_rate; };
  std::stable_sort(opposite.begin(), opposite.end(), [&](int a, int b) { return decay(a) < decay(b); });
  std::stable_sort(same.begin(), same.end(), [&](int a, int b) { return decay(a) > decay(b); });

  order.clear();
  order.insert(order.end(), opposite.begin(), opposite.end());
  order.insert(order.end(), same.begin(), same.end());
  order.push_back(dark);
  return order;
}

BiorthoBasis biorthogonalize(const EigenSystem& system) {
  std::vector<Vector> rights;
  std::vector<Vector> lefts;
  for (const auto& p : system.pairs) {
    rights.push_back(p.right);
    lefts.push_back(p.left);
  }
  return biorthogonalize(rights, lefts, default_order(system));
}

}  // namespace darkstate
