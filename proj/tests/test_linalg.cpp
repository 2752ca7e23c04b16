#include <doctest.h>

#include <cmath>

#include "kreinspec/ensembles.hpp"
#include "kreinspec/linalg.hpp"
#include "kreinspec/quadrature.hpp"

using namespace kreinspec;

TEST_CASE("tridiagonal LU matches a dense solve") {
  Rng rng(11);
  for (int n : {1, 2, 3, 17, 80}) {
    Vector diag(n), lower(std::max(0, n - 1)), upper(std::max(0, n - 1));
    for (int i = 0; i < n; ++i) diag(i) = rng.cnormal();
    for (int i = 0; i < n - 1; ++i) {
      lower(i) = rng.cnormal();
      upper(i) = rng.cnormal();
    }
    // stress pivoting: make one diagonal entry tiny
    if (n > 2) diag(n / 2) = Complex(1e-14, 0.0);

    Matrix dense = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      dense(i, i) = diag(i);
      if (i + 1 < n) {
        dense(i + 1, i) = lower(i);
        dense(i, i + 1) = upper(i);
      }
    }
    Vector rhs(n);
    for (int i = 0; i < n; ++i) rhs(i) = rng.cnormal();

    TridiagonalLU lu(lower, diag, upper);
    Vector x = lu.solve(rhs);
    Vector ref = dense.partialPivLu().solve(rhs);
    CHECK((x - ref).norm() <= 1e-9 * (1.0 + ref.norm()));
    CHECK((dense * x - rhs).norm() <= 1e-9 * rhs.norm());
  }
}

TEST_CASE("spectral norm: power-iteration path agrees with SVD") {
  Rng rng(5);
  Matrix m = random_complex_gaussian(rng, 250, 250);  // above the direct-SVD cutoff
  double pi_norm = spectral_norm(m);
  double svd_norm = Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
  CHECK(pi_norm == doctest::Approx(svd_norm).epsilon(1e-8));

  double smin_pi = smallest_singular_value(m);
  double smin_svd = Eigen::JacobiSVD<Matrix>(m).singularValues()(249);
  CHECK(smin_pi == doctest::Approx(smin_svd).epsilon(1e-6));
}

TEST_CASE("Gauss-Legendre panels integrate exactly and on log grids") {
  const GaussLegendre& gl = GaussLegendre::order(16);
  REQUIRE(gl.nodes.size() == 16);
  double wsum = 0.0;
  for (double w : gl.weights) wsum += w;
  CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));

  // polynomial of degree 31 is integrated exactly by order 16
  auto poly = [](double x) { return std::pow(x, 31) + 3.0 * std::pow(x, 8) - x; };
  double val = integrate_scalar(poly, linear_panels(0.0, 1.0, 1));
  CHECK(val == doctest::Approx(1.0 / 32 + 3.0 / 9 - 0.5).epsilon(1e-13));

  // int_a^b dt/t = log(b/a) over 12 decades
  double logint = integrate_scalar([](double t) { return 1.0 / t; }, log_panels(1e-6, 1e6, 16));
  CHECK(logint == doctest::Approx(std::log(1e12)).epsilon(1e-12));
}

TEST_CASE("matrix quadrature reproduces the scalar arctangent integral") {
  // For A0 = diag(s, -s'), (1/pi) int_{1/n}^{n} 2 A0 (A0^2+t^2)^{-1} dt has
  // diagonal entries phi(s) = (2/pi)(atan(n/s) - atan(1/(n s))) up to sign.
  const double n_cut = 1e4;
  auto phi = [&](double s) {
    return (2.0 / M_PI) * (std::atan(n_cut / s) - std::atan(1.0 / (n_cut * s)));
  };
  Matrix a0 = Matrix::Zero(2, 2);
  a0(0, 0) = Complex(2.0, 0.0);
  a0(1, 1) = Complex(-3.0, 0.0);
  Matrix a0sq = a0 * a0;
  auto eval = [&](double t, Matrix& out) {
    Matrix shifted = a0sq + t * t * Matrix::Identity(2, 2);
    out = shifted.partialPivLu().solve((2.0 / M_PI) * a0);
  };
  MatrixIntegralEstimate est =
      integrate_matrix_norm(eval, 2, log_panels(1.0 / n_cut, n_cut, 12), 1e-9, 4);
  CHECK(est.norm == doctest::Approx(std::max(phi(2.0), phi(3.0))).epsilon(1e-10));
  CHECK(est.residual <= 1e-9 * est.norm + 1e-15);
}

TEST_CASE("orthonormal_columns returns an isometry") {
  Rng rng(3);
  Matrix b = random_complex_gaussian(rng, 9, 4);
  Matrix q = orthonormal_columns(b);
  CHECK((q.adjoint() * q - Matrix::Identity(4, 4)).norm() <= 1e-13);
}
