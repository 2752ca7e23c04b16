#pragma once

#include <functional>

#include "kreinspec/types.hpp"

namespace kreinspec {

/// Largest singular value. Exact SVD for small matrices, power iteration
/// on M*M for large ones (deterministic start vector, no RNG).
double spectral_norm(const Matrix& m);
double spectral_norm(const RealMatrix& m);

/// Smallest singular value of a square matrix.
double smallest_singular_value(const Matrix& m);

/// Spectral norm of (a - lambda)^{-1}, i.e. 1 / sigma_min(a - lambda).
double resolvent_norm(const Matrix& a, Complex lambda);

bool is_hermitian(const Matrix& m, double tol);

/// Thin orthonormal basis of the column span (Householder QR).
Matrix orthonormal_columns(const Matrix& b);

/// LU factorization of a complex tridiagonal matrix with partial pivoting.
/// Row i holds (lower[i-1], diag[i], upper[i]); pivoting introduces a second
/// superdiagonal, as in the usual gttrf layout.
class TridiagonalLU {
 public:
  TridiagonalLU() = default;
  TridiagonalLU(const Vector& lower, const Vector& diag, const Vector& upper);

  void solve_in_place(Vector& rhs) const;
  Vector solve(const Vector& rhs) const;
  int size() const { return static_cast<int>(d_.size()); }
  bool singular() const { return singular_; }

 private:
  Vector l_, d_, u_, u2_;
  std::vector<int> pivot_;
  bool singular_ = false;
};

/// Largest eigenvalue of a Hermitian positive semidefinite operator given by
/// its matrix-vector product, via power iteration with a fixed start vector.
double power_iteration_largest(const std::function<void(const Vector&, Vector&)>& apply,
                               int n, int max_iter = 400, double rtol = 1e-11);

}  // namespace kreinspec
