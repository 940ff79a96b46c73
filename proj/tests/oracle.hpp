#pragma once

// Brute-force two-mode Fock algebra on sparse kets. Shares no code with the library.

#include <cmath>
#include <complex>
#include <map>
#include <utility>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using Occupation = std::pair<int, int>;
using Ket = std::map<Occupation, Complex>;

inline Ket vacuum() { return Ket{{{0, 0}, 1.0}}; }

inline Ket lower(const Ket& in, int site) {
  Ket out;
  for (const auto& [occ, c] : in) {
    auto [n1, n2] = occ;
    const int n = site == 1 ? n1 : n2;
    if (n == 0) continue;
    (site == 1 ? n1 : n2) -= 1;
    out[{n1, n2}] += std::sqrt(double(n)) * c;
  }
  return out;
}

inline Ket raise(const Ket& in, int site) {
  Ket out;
  for (const auto& [occ, c] : in) {
    auto [n1, n2] = occ;
    const int n = site == 1 ? n1 : n2;
    (site == 1 ? n1 : n2) += 1;
    out[{n1, n2}] += std::sqrt(n + 1.0) * c;
  }
  return out;
}

inline Ket add(Ket a, const Ket& b, Complex scale = 1.0) {
  for (const auto& [occ, c] : b) a[occ] += scale * c;
  return a;
}

inline Ket scaled(Ket a, Complex s) {
  for (auto& [occ, c] : a) c *= s;
  return a;
}

inline double norm(const Ket& a) {
  double s = 0;
  for (const auto& [occ, c] : a) s += std::norm(c);
  return std::sqrt(s);
}

inline Complex inner(const Ket& bra, const Ket& ket) {
  Complex s = 0;
  for (const auto& [occ, c] : ket) {
    auto it = bra.find(occ);
    if (it != bra.end()) s += std::conj(it->second) * c;
  }
  return s;
}

// (a1^dag +/- a2^dag)/sqrt(2)
inline Ket raise_mode(const Ket& in, double sign) {
  return scaled(add(raise(in, 1), raise(in, 2), sign), 1.0 / std::sqrt(2.0));
}

inline Ket mode_state(int k_bright, int m_dark) {
  Ket k = vacuum();
  for (int i = 0; i < k_bright; ++i) k = raise_mode(k, 1.0);
  for (int i = 0; i < m_dark; ++i) k = raise_mode(k, -1.0);
  return scaled(k, 1.0 / norm(k));
}

// -(U/2) sum_i n_i (n_i - 1)
inline Ket anharmonic(const Ket& in, double u) {
  Ket out;
  for (const auto& [occ, c] : in) {
    const auto [n1, n2] = occ;
    out[occ] = -0.5 * u * (n1 * (n1 - 1.0) + n2 * (n2 - 1.0)) * c;
  }
  return out;
}

// Dense vector in the (n1, n2) lexicographic basis with cutoff local_dim.
inline Eigen::VectorXcd dense(const Ket& k, int local_dim) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(local_dim * local_dim);
  for (const auto& [occ, c] : k) {
    if (occ.first < local_dim && occ.second < local_dim) v(occ.first * local_dim + occ.second) += c;
  }
  return v;
}

inline Ket basis_ket(int n1, int n2) { return Ket{{{n1, n2}, 1.0}}; }

}  // namespace oracle
