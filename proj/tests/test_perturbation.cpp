#include <doctest.h>

#include <cmath>

#include "kreinspec/ensembles.hpp"
#include "kreinspec/linalg.hpp"
#include "kreinspec/perturbation.hpp"

using namespace kreinspec;

namespace {

KreinOperator two_by_two_a0() {
  // A0 = J [[2,1],[1,2]] with J = diag(1,-1)
  FundamentalSymmetry j = FundamentalSymmetry::block(1, 1);
  Matrix a0(2, 2);
  a0 << Complex(2, 0), Complex(1, 0), Complex(-1, 0), Complex(-2, 0);
  return KreinOperator::checked(a0, j);
}

}  // namespace

TEST_CASE("spectral projections: diagonal case") {
  FundamentalSymmetry j = FundamentalSymmetry::block(1, 1);
  Matrix a0 = Matrix::Zero(2, 2);
  a0(0, 0) = 2.0;
  a0(1, 1) = -3.0;
  SpectralProjections proj = spectral_projections(KreinOperator::checked(a0, j));
  Matrix eplus = Matrix::Zero(2, 2), jt = Matrix::Zero(2, 2);
  eplus(0, 0) = 1.0;
  jt(0, 0) = 1.0;
  jt(1, 1) = -1.0;
  CHECK((proj.e_plus - eplus).cwiseAbs().maxCoeff() <= 1e-13);
  CHECK((proj.j_tilde - jt).cwiseAbs().maxCoeff() <= 1e-13);
  CHECK(proj.j_tilde_norm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spectral projections: coupled 2x2 with analytic J-tilde") {
  // Eigenvalues +-sqrt(3); a direct computation of E+ - E- gives
  // J~ = (1/sqrt 3) [[2, 1], [-1, -2]] and ||J~|| = sqrt(3).
  KreinOperator a0 = two_by_two_a0();
  SpectralProjections proj = spectral_projections(a0);
  const double s3 = std::sqrt(3.0);
  Matrix expect(2, 2);
  expect << Complex(2 / s3, 0), Complex(1 / s3, 0), Complex(-1 / s3, 0), Complex(-2 / s3, 0);
  CHECK((proj.j_tilde - expect).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(proj.j_tilde_norm == doctest::Approx(s3).epsilon(1e-12));

  Matrix id = Matrix::Identity(2, 2);
  CHECK((proj.e_plus + proj.e_minus - id).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((proj.e_plus * proj.e_plus - proj.e_plus).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((proj.j_tilde * proj.j_tilde - id).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((krein_adjoint(proj.e_plus, a0.symmetry) - proj.e_plus).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("spectral projections: Hilbert-space positive operator") {
  Rng rng(8);
  Matrix h = random_hpd(rng, 5, 0.5, 4.0);
  KreinOperator a0{h, FundamentalSymmetry::identity(5)};
  SpectralProjections proj = spectral_projections(a0);
  CHECK((proj.e_plus - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(proj.j_tilde_norm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spectral projections: invariants on a random ensemble") {
  for (uint64_t t = 0; t < 10; ++t) {
    Rng rng = Rng::for_trial(404, t);
    NonNegativePair pair = random_nonnegative_pair(rng, 16);
    SpectralProjections proj = spectral_projections(pair.a0);
    const int n = pair.a0.dim();
    Matrix id = Matrix::Identity(n, n);
    CHECK((proj.j_tilde * proj.j_tilde - id).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(proj.j_tilde_norm >= 1.0 - 1e-12);
    // J J~ is Hermitian positive definite with smallest eigenvalue 1/||J~||
    Matrix jjt = pair.a0.symmetry.apply_left(proj.j_tilde);
    CHECK(is_hermitian(jjt, 1e-9));
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (jjt + jjt.adjoint()));
    CHECK(es.eigenvalues()(0) >= (1.0 / proj.j_tilde_norm) * (1.0 - 1e-9));
  }
}

TEST_CASE("zero eigenvalue and indefinite Hermitian form are rejected") {
  FundamentalSymmetry j = FundamentalSymmetry::block(1, 1);
  Matrix singular = Matrix::Zero(2, 2);
  singular(0, 0) = 1.0;  // J*A0 = diag(1, 0) is only semidefinite
  CHECK_THROWS_AS(spectral_projections(KreinOperator{singular, j}), std::invalid_argument);
}

TEST_CASE("tau quadrature: diagonal operator against the arctangent value") {
  FundamentalSymmetry j = FundamentalSymmetry::block(1, 1);
  Matrix a0 = Matrix::Zero(2, 2);
  a0(0, 0) = 2.0;
  a0(1, 1) = -3.0;
  KreinOperator op = KreinOperator::checked(a0, j);
  TauEstimate tau = tau_quadrature(op, 1e6);
  CHECK(std::abs(tau.value - 1.0) <= 1e-3);
  auto phi = [](double s, double n) {
    return (2.0 / M_PI) * (std::atan(n / s) - std::atan(1.0 / (n * s)));
  };
  CHECK(tau.value == doctest::Approx(std::max(phi(2.0, 1e6), phi(3.0, 1e6))).epsilon(1e-8));
  CHECK(tau.value >= 1.0 - 1e-3);
}

TEST_CASE("tau quadrature converges to the J-tilde norm") {
  KreinOperator a0 = two_by_two_a0();
  TauEstimate tau = tau_quadrature(a0, 1e8);
  CHECK(std::abs(tau.value - std::sqrt(3.0)) <= 0.005 * std::sqrt(3.0));

  for (uint64_t t = 0; t < 5; ++t) {
    Rng rng = Rng::for_trial(515, t);
    NonNegativePair pair = random_nonnegative_pair(rng, 12);
    TauEstimate est = tau_quadrature(pair.a0, 1e8);
    double direct = spectral_projections(pair.a0).j_tilde_norm;
    CHECK(std::abs(est.value - direct) <= 0.005 * direct);
  }
}

TEST_CASE("tau_eta quadrature") {
  FundamentalSymmetry j = FundamentalSymmetry::block(1, 1);
  Matrix jm = j.diagonal().asDiagonal().toDenseMatrix().cast<Complex>();

  // G = J and A = diag(2,-3): A + J = diag(3,-4) is the tau0 integrand
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = -3.0;
  KreinOperator op = KreinOperator::checked(a, j);
  TauEstimate te = tau_eta_quadrature(op, jm, 1.0, 1e6);
  Matrix shifted = Matrix::Zero(2, 2);
  shifted(0, 0) = 3.0;
  shifted(1, 1) = -4.0;
  TauEstimate t0 = tau_quadrature(KreinOperator::checked(shifted, j), 1e6);
  CHECK(std::abs(te.value - t0.value) <= 2e-3);

  // empty operator is rejected
  KreinOperator empty{Matrix::Zero(0, 0), FundamentalSymmetry::identity(0)};
  CHECK_THROWS_AS(tau_eta_quadrature(empty, Matrix::Zero(0, 0), 1.0, 1e4),
                  std::invalid_argument);

  // Hilbert-space control: uniformly positive with G = I gives 1
  Matrix pos = Matrix::Zero(2, 2);
  pos(0, 0) = 1.0;
  pos(1, 1) = 2.0;
  KreinOperator hop{pos, FundamentalSymmetry::identity(2)};
  TauEstimate th = tau_eta_quadrature(hop, Matrix::Identity(2, 2), 1.0, 1e6);
  CHECK(std::abs(th.value - 1.0) <= 1e-3);

  // positivity precondition violated
  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 0) = -5.0;
  neg(1, 1) = 2.0;
  KreinOperator nop{neg, FundamentalSymmetry::identity(2)};
  CHECK_THROWS_AS(tau_eta_quadrature(nop, Matrix::Identity(2, 2), 1.0, 1e4),
                  std::invalid_argument);
}

TEST_CASE("single-sided resolvent integral reconstructs E+ - E-") {
  // for uniformly J-positive A0, the [-n, n] integral of (A0 - it)^{-1}
  // converges to the same J-tilde the projections produce
  for (uint64_t t = 0; t < 3; ++t) {
    Rng rng = Rng::for_trial(808, t);
    NonNegativePair pair = random_nonnegative_pair(rng, 10);
    const Matrix& a0 = pair.a0.matrix;
    Matrix jm = pair.a0.symmetry.diagonal().asDiagonal().toDenseMatrix().cast<Complex>();
    KreinOperator shifted{a0 - jm, pair.a0.symmetry};  // A = A0 - eta J with eta = 1
    TauEstimate te = tau_eta_quadrature(shifted, jm, 1.0, 1e8);
    double direct = spectral_projections(pair.a0).j_tilde_norm;
    CHECK(std::abs(te.value - direct) <= 0.005 * direct);
  }
}

TEST_CASE("bounds_main1: trivial branch and the epsilon example") {
  KreinOperator a0 = two_by_two_a0();

  // V = 0 keeps the operator non-negative
  NonNegativePair none = NonNegativePair::checked(a0, Matrix::Zero(2, 2));
  PerturbationBounds b0 = bounds_main1(none);
  CHECK(b0.trivial_branch);
  CHECK(b0.r == 0.0);
  CHECK(b0.d == 0.0);
  Main1Report rep0 = verify_main1(none);
  CHECK(rep0.clean());
  for (const SpectralPoint& p : rep0.classification.points)
    CHECK(p.type != SpectralType::NonReal);

  // V = J diag(0, -eps): d = (1 + sqrt 3)/2 eps with tau0 = sqrt 3
  const double eps = 0.3, s3 = std::sqrt(3.0);
  Matrix w = Matrix::Zero(2, 2);
  w(1, 1) = -eps;
  Matrix v = a0.symmetry.diagonal().asDiagonal() * w;
  NonNegativePair pair = NonNegativePair::checked(a0, v);
  PerturbationBounds b = bounds_main1(pair);
  CHECK_FALSE(b.trivial_branch);
  CHECK(b.tau0 == doctest::Approx(s3).epsilon(1e-12));
  CHECK(b.min_sigma_jv == doctest::Approx(-eps).epsilon(1e-12));
  CHECK(b.d == doctest::Approx(0.5 * (1.0 + s3) * eps).epsilon(1e-12));
  CHECK(b.r == doctest::Approx(0.5 * (1.0 + s3) * eps).epsilon(1e-12));

  // r and d are monotone in the perturbation size
  NonNegativePair bigger = NonNegativePair::checked(a0, 1.5 * v);
  PerturbationBounds b2 = bounds_main1(bigger);
  CHECK(b2.r >= b.r);
  CHECK(b2.d >= b.d);
}

TEST_CASE("verify_main1: hand-built instance with a non-real pair") {
  // A0 = J, V = J [[0, 2], [2, 0]]: A0 + V is the sharp coupling matrix
  FundamentalSymmetry j = FundamentalSymmetry::block(1, 1);
  Matrix a0 = j.diagonal().asDiagonal().toDenseMatrix().cast<Complex>();
  Matrix w(2, 2);
  w << Complex(0, 0), Complex(2, 0), Complex(2, 0), Complex(0, 0);
  Matrix v = j.diagonal().asDiagonal() * w;
  NonNegativePair pair = NonNegativePair::checked(KreinOperator{a0, j}, v);
  PerturbationBounds b = bounds_main1(pair);
  CHECK(b.tau0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.r == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(b.d == doctest::Approx(2.0).epsilon(1e-12));

  Main1Report rep = verify_main1(pair);
  CHECK(rep.clean());
  int nonreal = 0;
  for (const SpectralPoint& p : rep.classification.points) {
    if (p.type == SpectralType::NonReal) {
      ++nonreal;
      CHECK(std::abs(std::abs(p.lambda.imag()) - std::sqrt(3.0)) <= 1e-12);
      CHECK(rep.bounds.region.contains(p.lambda));
      CHECK(std::abs(p.lambda.imag()) <= rep.bounds.d + rep.bounds.r);
    }
  }
  CHECK(nonreal == 2);
}

TEST_CASE("verify_main1: clean on a random ensemble") {
  for (uint64_t t = 0; t < 30; ++t) {
    Rng rng = Rng::for_trial(620, t);
    NonNegativePair pair = random_nonnegative_pair(rng, 14);
    Main1Report rep = verify_main1(pair);
    CHECK(rep.violations.empty());
  }
}

TEST_CASE("NonNegativePair validation") {
  FundamentalSymmetry j = FundamentalSymmetry::block(1, 1);
  Matrix not_nonneg(2, 2);
  not_nonneg << Complex(-1, 0), Complex(0, 0), Complex(0, 0), Complex(1, 0);  // J A0 = -I
  CHECK_THROWS_AS(NonNegativePair::checked(KreinOperator{not_nonneg, j}, Matrix::Zero(2, 2)),
                  std::invalid_argument);
}

TEST_CASE("bounds_main2: diagonal reduction and scaling in G") {
  FundamentalSymmetry j = FundamentalSymmetry::block(1, 1);
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = -3.0;
  Matrix g = j.diagonal().asDiagonal().toDenseMatrix().cast<Complex>();

  // [Af,f] = (diag(2,3) f, f) >= 0, so any gamma > 0 works; tau_eta = 1
  Main2Report r1 = bounds_main2(a, g, 0.1, 1.0);
  CHECK(r1.clean());
  CHECK(r1.tau_eta == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r1.r == doctest::Approx(1.0).epsilon(1e-12));  // eta (1+1)/2 * 1

  // doubling G halves ||G^{-1}|| and hence r (diagonal case keeps tau at 1)
  Main2Report r2 = bounds_main2(a, 2.0 * g, 0.1, 1.0);
  CHECK(r2.r == doctest::Approx(0.5 * r1.r).epsilon(1e-12));

  CHECK_THROWS_AS(bounds_main2(a, g, 1.0, 0.5), std::invalid_argument);  // eta <= gamma
}

TEST_CASE("bounds_main2: random Gram ensemble stays clean") {
  for (uint64_t t = 0; t < 15; ++t) {
    Rng rng = Rng::for_trial(733, t);
    int n = rng.uniform_int(2, 10);
    // G Hermitian invertible with condition number <= 10
    RealVector vals(n);
    for (int i = 0; i < n; ++i) vals(i) = rng.sign() * rng.uniform(0.5, 5.0);
    Matrix u = random_unitary(rng, n);
    Matrix g = u * vals.cast<Complex>().asDiagonal() * u.adjoint();
    g = 0.5 * (g + g.adjoint()).eval();

    // A = G^{-1} T with T Hermitian bounded below by -gamma0
    double gamma0 = rng.uniform(0.2, 1.5);
    Matrix tmat = random_hermitian(rng, n, 3.0);
    Eigen::SelfAdjointEigenSolver<Matrix> et(tmat);
    tmat += (gamma0 + et.eigenvalues()(0) < 0.0 ? -(et.eigenvalues()(0) + gamma0) : 0.0) *
            Matrix::Identity(n, n);
    // now min eig(T) >= -gamma0
    Matrix ainv = g.partialPivLu().solve(tmat);
    Main2Report rep = bounds_main2(ainv, g, gamma0 + 0.05, gamma0 + rng.uniform(0.2, 1.0));
    CHECK(rep.violations.empty());
    CHECK(rep.tau_eta >= 1.0 - 1e-10);
  }
}
