#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "wkgeom/errors.hpp"

namespace wkgeom {

/// Dense row-major n-by-n solve by Gaussian elimination with partial
/// pivoting.  Intended for the small (<= 4) moment systems.
inline std::vector<double> solve_dense(std::vector<double> A, std::vector<double> b) {
  const size_t n = b.size();
  for (size_t k = 0; k < n; ++k) {
    size_t p = k;
    for (size_t i = k + 1; i < n; ++i)
      if (std::abs(A[i * n + k]) > std::abs(A[p * n + k])) p = i;
    if (A[p * n + k] == 0.0) throw SingularGramError("singular linear system");
    if (p != k) {
      for (size_t j = 0; j < n; ++j) std::swap(A[k * n + j], A[p * n + j]);
      std::swap(b[k], b[p]);
    }
    for (size_t i = k + 1; i < n; ++i) {
      const double m = A[i * n + k] / A[k * n + k];
      for (size_t j = k; j < n; ++j) A[i * n + j] -= m * A[k * n + j];
      b[i] -= m * b[k];
    }
  }
  std::vector<double> x(n, 0.0);
  for (size_t i = n; i-- > 0;) {
    double s = b[i];
    for (size_t j = i + 1; j < n; ++j) s -= A[i * n + j] * x[j];
    x[i] = s / A[i * n + i];
  }
  return x;
}

/// Eigenvalues of a small symmetric matrix (row-major) by cyclic Jacobi.
inline std::vector<double> symmetric_eigenvalues(std::vector<double> A, size_t n) {
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (size_t p = 0; p < n; ++p)
      for (size_t q = p + 1; q < n; ++q) off += A[p * n + q] * A[p * n + q];
    if (off < 1e-300) break;
    for (size_t p = 0; p < n; ++p) {
      for (size_t q = p + 1; q < n; ++q) {
        const double apq = A[p * n + q];
        if (std::abs(apq) < 1e-300) continue;
        const double theta = 0.5 * (A[q * n + q] - A[p * n + p]) / apq;
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (size_t k = 0; k < n; ++k) {
          const double akp = A[k * n + p], akq = A[k * n + q];
          A[k * n + p] = c * akp - s * akq;
          A[k * n + q] = s * akp + c * akq;
        }
        for (size_t k = 0; k < n; ++k) {
          const double apk = A[p * n + k], aqk = A[q * n + k];
          A[p * n + k] = c * apk - s * aqk;
          A[q * n + k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (size_t i = 0; i < n; ++i) ev[i] = A[i * n + i];
  return ev;
}

/// Banded LU solve with partial pivoting, LAPACK-style storage: the matrix
/// has kl subdiagonals and ku superdiagonals; `ab` holds 2*kl+ku+1 rows of
/// length n, with A(i,j) at ab[kl + ku + i - j][j] for max(0,j-ku) <= i <=
/// min(n-1, j+kl).  Used by the eps-geodesic Newton step.
class BandedMatrix {
 public:
  BandedMatrix(size_t n, size_t kl, size_t ku)
      : n_(n), kl_(kl), ku_(ku), ab_((2 * kl + ku + 1) * n, 0.0) {}

  double& at(size_t i, size_t j) { return ab_[(kl_ + ku_ + i - j) * n_ + j]; }

  void add(size_t i, size_t j, double v) {
    if (i < n_ && j < n_) at(i, j) += v;
  }

  /// In-place factor-and-solve.
  std::vector<double> solve(std::vector<double> b) {
    const size_t rows = 2 * kl_ + ku_ + 1;
    auto elem = [&](size_t r, size_t j) -> double& { return ab_[r * n_ + j]; };
    std::vector<size_t> piv(n_);
    for (size_t k = 0; k < n_; ++k) {
      // pivot search within the column band
      const size_t imax = std::min(n_ - 1, k + kl_);
      size_t p = k;
      for (size_t i = k + 1; i <= imax; ++i)
        if (std::abs(elem(kl_ + ku_ + i - k, k)) > std::abs(elem(kl_ + ku_ + p - k, k))) p = i;
      piv[k] = p;
      if (elem(kl_ + ku_ + p - k, k) == 0.0) throw Error("banded LU: zero pivot");
      if (p != k) {
        const size_t jmax = std::min(n_ - 1, k + kl_ + ku_);
        for (size_t j = k; j <= jmax; ++j) {
          const size_t rk = kl_ + ku_ + k - j, rp = kl_ + ku_ + p - j;
          if (rk < rows && rp < rows) std::swap(elem(rk, j), elem(rp, j));
        }
        std::swap(b[k], b[p]);
      }
      const double pivval = elem(kl_ + ku_, k);
      for (size_t i = k + 1; i <= imax; ++i) {
        const double m = elem(kl_ + ku_ + i - k, k) / pivval;
        elem(kl_ + ku_ + i - k, k) = m;
        const size_t jmax = std::min(n_ - 1, k + kl_ + ku_);
        for (size_t j = k + 1; j <= jmax; ++j)
          elem(kl_ + ku_ + i - j, j) -= m * elem(kl_ + ku_ + k - j, j);
        b[i] -= m * b[k];
      }
    }
    for (size_t i = n_; i-- > 0;) {
      double s = b[i];
      const size_t jmax = std::min(n_ - 1, i + kl_ + ku_);
      for (size_t j = i + 1; j <= jmax; ++j) s -= elem(kl_ + ku_ + i - j, j) * b[j];
      b[i] = s / elem(kl_ + ku_, i);
    }
    return b;
  }

 private:
  size_t n_, kl_, ku_;
  std::vector<double> ab_;
};

}  // namespace wkgeom
