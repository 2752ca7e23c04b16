#include "kreinspec/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace kreinspec {

namespace {

// Deterministic, loosely equidistributed start vector for power iterations.
Vector power_start(int n) {
  Vector v(n);
  double s = 0.7390851332151607;  // fixed point of cos, as good a seed as any
  for (int i = 0; i < n; ++i) {
    s = std::cos(s + i);
    v(i) = Complex(1.0 + 0.25 * s, 0.125 * s);
  }
  v /= v.norm();
  return v;
}

}  // namespace

double power_iteration_largest(const std::function<void(const Vector&, Vector&)>& apply,
                               int n, int max_iter, double rtol) {
  if (n == 0) return 0.0;
  Vector v = power_start(n), w(n);
  double prev = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    apply(v, w);
    double lambda = std::real(v.dot(w));  // Rayleigh quotient, Hermitian operator
    double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
    if (it > 4 && std::abs(lambda - prev) <= rtol * std::max(1.0, std::abs(lambda))) return lambda;
    prev = lambda;
  }
  return prev;
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() <= 192 && m.cols() <= 192) {
    return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
  }
  auto apply = [&m](const Vector& x, Vector& y) {
    Vector t = m * x;
    y = m.adjoint() * t;
  };
  double lam = power_iteration_largest(apply, static_cast<int>(m.cols()));
  return std::sqrt(std::max(0.0, lam));
}

double spectral_norm(const RealMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() <= 192 && m.cols() <= 192) {
    return Eigen::JacobiSVD<RealMatrix>(m).singularValues()(0);
  }
  auto apply = [&m](const Vector& x, Vector& y) {
    Vector t = m * x;
    y = m.transpose() * t;
  };
  double lam = power_iteration_largest(apply, static_cast<int>(m.cols()));
  return std::sqrt(std::max(0.0, lam));
}

double smallest_singular_value(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("smallest_singular_value: square matrix required");
  const int n = static_cast<int>(m.rows());
  if (n == 0) return 0.0;
  if (n <= 192) {
    return Eigen::JacobiSVD<Matrix>(m).singularValues()(n - 1);
  }
  Eigen::PartialPivLU<Matrix> lu(m);
  // power iteration on (M M*)^{-1}; its largest eigenvalue is 1/sigma_min^2
  auto apply = [&lu](const Vector& x, Vector& y) {
    Vector t = lu.adjoint().solve(x);
    y = lu.solve(t);
  };
  double lam = power_iteration_largest(apply, n);
  if (lam <= 0.0) return 0.0;
  return 1.0 / std::sqrt(lam);
}

double resolvent_norm(const Matrix& a, Complex lambda) {
  Matrix shifted = a;
  shifted.diagonal().array() -= lambda;
  double smin = smallest_singular_value(shifted);
  if (smin == 0.0) throw std::runtime_error("resolvent_norm: lambda is an eigenvalue");
  return 1.0 / smin;
}

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  double scale = 1.0 + m.cwiseAbs().maxCoeff();
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

Matrix orthonormal_columns(const Matrix& b) {
  Eigen::HouseholderQR<Matrix> qr(b);
  Matrix q = qr.householderQ() * Matrix::Identity(b.rows(), b.cols());
  return q;
}

TridiagonalLU::TridiagonalLU(const Vector& lower, const Vector& diag, const Vector& upper) {
  const int n = static_cast<int>(diag.size());
  if (lower.size() != n - 1 || upper.size() != n - 1)
    throw std::invalid_argument("TridiagonalLU: band sizes inconsistent");
  l_ = lower;
  d_ = diag;
  u_ = upper;
  u2_ = Vector::Zero(std::max(0, n - 2));
  pivot_.assign(n, 0);
  // gttrf-style elimination with row interchanges
  for (int i = 0; i < n - 1; ++i) {
    if (std::abs(d_(i)) >= std::abs(l_(i))) {
      pivot_[i] = 0;
      if (d_(i) == Complex(0.0, 0.0)) { singular_ = true; continue; }
      Complex f = l_(i) / d_(i);
      l_(i) = f;
      d_(i + 1) -= f * u_(i);
      if (i < n - 2) u2_(i) = Complex(0.0, 0.0);
    } else {
      pivot_[i] = 1;
      Complex f = d_(i) / l_(i);
      d_(i) = l_(i);
      l_(i) = f;
      Complex tmp = u_(i);
      u_(i) = d_(i + 1);
      d_(i + 1) = tmp - f * d_(i + 1);
      if (i < n - 2) {
        u2_(i) = u_(i + 1);
        u_(i + 1) = -f * u_(i + 1);
      }
    }
  }
  if (n > 0 && d_(n - 1) == Complex(0.0, 0.0)) singular_ = true;
}

void TridiagonalLU::solve_in_place(Vector& rhs) const {
  const int n = size();
  if (rhs.size() != n) throw std::invalid_argument("TridiagonalLU::solve: size mismatch");
  if (singular_) throw std::runtime_error("TridiagonalLU::solve: singular factorization");
  for (int i = 0; i < n - 1; ++i) {
    if (pivot_[i] == 0) {
      rhs(i + 1) -= l_(i) * rhs(i);
    } else {
      Complex tmp = rhs(i);
      rhs(i) = rhs(i + 1);
      rhs(i + 1) = tmp - l_(i) * rhs(i);
    }
  }
  rhs(n - 1) /= d_(n - 1);
  if (n > 1) {
    rhs(n - 2) = (rhs(n - 2) - u_(n - 2) * rhs(n - 1)) / d_(n - 2);
    for (int i = n - 3; i >= 0; --i) {
      rhs(i) = (rhs(i) - u_(i) * rhs(i + 1) - u2_(i) * rhs(i + 2)) / d_(i);
    }
  }
}

Vector TridiagonalLU::solve(const Vector& rhs) const {
  Vector x = rhs;
  solve_in_place(x);
  return x;
}

}  // namespace kreinspec
