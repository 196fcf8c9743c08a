#pragma once

// Self-contained cyclic Jacobi eigensolver, used as an independent oracle for
// the eigenvalue-based routines in the library. Deliberately avoids Eigen's
// decompositions.

#include <algorithm>
#include <cmath>
#include <vector>

#include "stein/matrix.hpp"

namespace oracle {

// Eigenvalues of a symmetric matrix, ascending.
inline std::vector<double> jacobi_eigenvalues(stein::Matrix a, int sweeps = 64) {
  const int n = static_cast<int>(a.rows());
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-280) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-280) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Largest singular value through the Jacobi eigenvalues of AᵀA.
inline double operator_norm(const stein::Matrix& a) {
  const auto ev = jacobi_eigenvalues(stein::Matrix(a.transpose() * a));
  return std::sqrt(std::max(0.0, ev.back()));
}

}  // namespace oracle
