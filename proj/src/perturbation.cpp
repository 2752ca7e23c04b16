#include "kreinspec/perturbation.hpp"

#include <cmath>
#include <stdexcept>

#include "kreinspec/linalg.hpp"
#include "kreinspec/quadrature.hpp"

namespace kreinspec {

namespace {

// Hermitian part of G*A, the quadratic form of A in the (G.,.) product.
Matrix gram_form(const Matrix& a, const Matrix& gram) {
  Matrix h = gram * a;
  return 0.5 * (h + h.adjoint());
}

SpectralProjections projections_impl(const Matrix& a0, const Matrix& gram,
                                     const Matrix& gram_inv) {
  const int n = static_cast<int>(a0.rows());
  Matrix h = gram_form(a0, gram);
  Eigen::SelfAdjointEigenSolver<Matrix> eh(h);
  if (eh.info() != Eigen::Success)
    throw std::runtime_error("spectral_projections: eigensolver failed");
  const RealVector hev = eh.eigenvalues();
  double hmax = hev.cwiseAbs().maxCoeff();
  if (hev(0) <= 1e-12 * hmax)
    throw std::invalid_argument(
        "spectral_projections: Hermitian form is not positive definite (operator "
        "not non-negative or not invertible)");

  RealVector sq = hev.cwiseSqrt();
  Matrix sqrt_h = eh.eigenvectors() * sq.asDiagonal() * eh.eigenvectors().adjoint();
  Matrix isqrt_h = eh.eigenvectors() * sq.cwiseInverse().asDiagonal() * eh.eigenvectors().adjoint();

  // K = H^{1/2} G^{-1} H^{1/2} is Hermitian and similar to A0
  Matrix k = sqrt_h * gram_inv * sqrt_h;
  k = 0.5 * (k + k.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> ek(k);
  if (ek.info() != Eigen::Success)
    throw std::runtime_error("spectral_projections: eigensolver failed");
  const RealVector kev = ek.eigenvalues();
  double kmax = kev.cwiseAbs().maxCoeff();
  for (int i = 0; i < n; ++i) {
    if (std::abs(kev(i)) <= 1e-12 * kmax)
      throw std::invalid_argument("spectral_projections: zero eigenvalue within tolerance");
  }

  RealVector sign(n), ppos(n);
  for (int i = 0; i < n; ++i) {
    sign(i) = kev(i) > 0.0 ? 1.0 : -1.0;
    ppos(i) = kev(i) > 0.0 ? 1.0 : 0.0;
  }
  Matrix sgn_k = ek.eigenvectors() * sign.asDiagonal() * ek.eigenvectors().adjoint();
  Matrix pp_k = ek.eigenvectors() * ppos.asDiagonal() * ek.eigenvectors().adjoint();

  SpectralProjections out;
  out.e_plus = isqrt_h * pp_k * sqrt_h;
  out.e_minus = Matrix::Identity(n, n) - out.e_plus;
  out.j_tilde = isqrt_h * sgn_k * sqrt_h;
  out.j_tilde_norm = spectral_norm(out.j_tilde);
  return out;
}

Matrix signature_gram(const FundamentalSymmetry& j) {
  return j.diagonal().asDiagonal().toDenseMatrix().cast<Complex>();
}

// 2 A0 (A0^2 + t^2)^{-1}, accumulated with the 1/pi prefactor.
class ResolventPairIntegrand {
 public:
  explicit ResolventPairIntegrand(const Matrix& a0)
      : a0_(a0), a0_sq_(a0 * a0), id_(Matrix::Identity(a0.rows(), a0.cols())) {}

  void operator()(double t, Matrix& out) const {
    Matrix shifted = a0_sq_ + (t * t) * id_;
    out = shifted.partialPivLu().solve((2.0 / M_PI) * a0_);
  }

 private:
  Matrix a0_;
  Matrix a0_sq_;
  Matrix id_;
};

}  // namespace

NonNegativePair NonNegativePair::checked(KreinOperator a0, Matrix v, double tol) {
  const int n = a0.dim();
  if (v.rows() != n || v.cols() != n)
    throw std::invalid_argument("NonNegativePair: dimension mismatch");
  Matrix h = a0.symmetry.apply_left(a0.matrix);
  if (!is_hermitian(h, tol))
    throw std::invalid_argument("NonNegativePair: J*A0 is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<Matrix> eh(0.5 * (h + h.adjoint()));
  double hmax = std::max(eh.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  if (eh.eigenvalues()(0) < -1e-10 * hmax)
    throw std::invalid_argument("NonNegativePair: J*A0 is not positive semidefinite");
  if (eh.eigenvalues().cwiseAbs().minCoeff() <= 1e-10 * hmax)
    throw std::invalid_argument("NonNegativePair: A0 is not invertible within tolerance");
  Matrix jv = a0.symmetry.apply_left(v);
  if (!is_hermitian(jv, tol))
    throw std::invalid_argument("NonNegativePair: J*V is not Hermitian within tolerance");
  return NonNegativePair{std::move(a0), std::move(v)};
}

SpectralProjections spectral_projections(const KreinOperator& a0) {
  Matrix gram = signature_gram(a0.symmetry);
  return projections_impl(a0.matrix, gram, gram);  // J^{-1} = J
}

SpectralProjections spectral_projections_gram(const Matrix& a0, const Matrix& gram) {
  if (a0.rows() != a0.cols() || gram.rows() != a0.rows() || gram.cols() != a0.cols())
    throw std::invalid_argument("spectral_projections_gram: dimension mismatch");
  Matrix gram_inv = gram.partialPivLu().solve(Matrix::Identity(gram.rows(), gram.cols()));
  return projections_impl(a0, gram, gram_inv);
}

TauEstimate tau_quadrature(const KreinOperator& a0, double n, int panels) {
  if (!(n > 1.0)) throw std::invalid_argument("tau_quadrature: cutoff must exceed 1");
  const double t_lo = 1.0 / n, t_hi = n;
  if (panels <= 0) {
    double decades = std::log10(t_hi / t_lo);
    panels = std::max(8, static_cast<int>(std::ceil(1.25 * decades)));
  }
  ResolventPairIntegrand integrand(a0.matrix);
  MatrixIntegralEstimate est = integrate_matrix_norm(
      [&integrand](double t, Matrix& out) { integrand(t, out); }, a0.dim(),
      log_panels(t_lo, t_hi, panels), /*rtol=*/1e-7, /*max_refine=*/4);
  if (est.residual > 1e-4 * std::max(1.0, est.norm))
    throw std::runtime_error("tau_quadrature: failed to reach the requested residual");
  TauEstimate tau;
  tau.value = est.norm;
  tau.cutoff = n;
  tau.panels = est.panels;
  tau.scheme = "gauss-legendre-16/log-panels";
  tau.residual = est.residual;
  return tau;
}

TauEstimate tau_eta_quadrature(const KreinOperator& a, const Matrix& g_inv, double eta,
                               double n) {
  const int dim = a.dim();
  if (dim == 0) throw std::invalid_argument("tau_eta_quadrature: empty operator");
  if (g_inv.rows() != dim || g_inv.cols() != dim)
    throw std::invalid_argument("tau_eta_quadrature: dimension mismatch");
  if (!(n > 1.0)) throw std::invalid_argument("tau_eta_quadrature: cutoff must exceed 1");

  Matrix a0 = a.matrix + eta * g_inv;
  Matrix gram = g_inv.partialPivLu().solve(Matrix::Identity(dim, dim));
  gram = 0.5 * (gram + gram.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> ef(gram_form(a0, gram));
  if (ef.eigenvalues()(0) <= 0.0)
    throw std::invalid_argument("tau_eta_quadrature: A + eta G^{-1} is not uniformly positive");

  // int_{-n}^{n} (A0 - it)^{-1} dt = int_0^n 2 A0 (A0^2 + t^2)^{-1} dt
  ResolventPairIntegrand integrand(a0);
  Panels panels = linear_panels(0.0, std::min(1.0, n), 4);
  if (n > 1.0) {
    Panels tail = log_panels(1.0, n, std::max(6, static_cast<int>(std::ceil(1.25 * std::log10(n)))));
    panels.insert(panels.end(), tail.begin(), tail.end());
  }
  MatrixIntegralEstimate est = integrate_matrix_norm(
      [&integrand](double t, Matrix& out) { integrand(t, out); }, dim, std::move(panels),
      /*rtol=*/1e-7, /*max_refine=*/4);
  TauEstimate tau;
  tau.value = est.norm;
  tau.cutoff = n;
  tau.panels = est.panels;
  tau.scheme = "gauss-legendre-16/linear+log-panels";
  tau.residual = est.residual;
  return tau;
}

PerturbationBounds bounds_main1(const NonNegativePair& pair) {
  PerturbationBounds b;
  Matrix jv = pair.a0.symmetry.apply_left(pair.v);
  Eigen::SelfAdjointEigenSolver<Matrix> ejv(0.5 * (jv + jv.adjoint()));
  b.min_sigma_jv = ejv.eigenvalues()(0);
  b.v_norm = spectral_norm(pair.v);

  SpectralProjections proj = spectral_projections(pair.a0);
  b.tau0 = proj.j_tilde_norm;

  double jv_scale = std::max(ejv.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  if (b.min_sigma_jv >= -1e-12 * jv_scale) {
    b.trivial_branch = true;  // V is non-negative: the sum stays non-negative
    b.r = 0.0;
    b.d = 0.0;
    b.region = StadiumRegion::symmetric(0.0, 0.0);
    return b;
  }
  b.trivial_branch = false;
  b.r = 0.5 * (1.0 + b.tau0) * b.v_norm;
  b.d = -0.5 * (1.0 + b.tau0) * b.min_sigma_jv;
  b.region = StadiumRegion::symmetric(b.d, b.r);
  return b;
}

Main1Report verify_main1(const NonNegativePair& pair, const ClassifyOptions& opts) {
  Main1Report rep;
  rep.bounds = bounds_main1(pair);

  KreinOperator perturbed{pair.a0.matrix + pair.v, pair.a0.symmetry};
  rep.classification = classify_spectrum(perturbed, opts);
  rep.inflation = std::max(1e-8, 1e-10 * rep.classification.spectral_radius);

  const double edge = rep.bounds.d + rep.bounds.r + rep.inflation;
  for (const SpectralPoint& p : rep.classification.points) {
    if (p.type == SpectralType::NonReal) {
      if (rep.bounds.trivial_branch) {
        rep.violations.push_back({p.lambda, "real-spectrum-expected", std::abs(p.lambda.imag())});
      } else if (!rep.bounds.region.contains(p.lambda, rep.inflation)) {
        rep.violations.push_back(
            {p.lambda, "nonreal-enclosure",
             rep.bounds.region.distance(p.lambda) - rep.bounds.region.r - rep.inflation});
      }
      continue;
    }
    if (rep.bounds.trivial_branch) continue;
    double x = p.lambda.real();
    if (x > edge && p.j_norm <= 0.0)
      rep.violations.push_back({p.lambda, "positive-type", -p.j_norm});
    if (x < -edge && p.j_norm >= 0.0)
      rep.violations.push_back({p.lambda, "negative-type", p.j_norm});
  }
  return rep;
}

Main2Report bounds_main2(const Matrix& a, const Matrix& g, double gamma, double eta) {
  const int n = static_cast<int>(a.rows());
  if (a.rows() != a.cols() || g.rows() != n || g.cols() != n)
    throw std::invalid_argument("bounds_main2: dimension mismatch");
  if (!(eta > gamma))
    throw std::invalid_argument("bounds_main2: eta must exceed gamma");
  if (!is_hermitian(g, 1e-10))
    throw std::invalid_argument("bounds_main2: G must be Hermitian");

  Matrix gram = 0.5 * (g + g.adjoint());
  Matrix form_a = gram_form(a, gram);
  Eigen::SelfAdjointEigenSolver<Matrix> ef(form_a);
  double scale = std::max(ef.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  if (ef.eigenvalues()(0) < -gamma - 1e-10 * scale)
    throw std::invalid_argument(
        "bounds_main2: [Af,f] >= -gamma ||f||^2 fails (smallest form eigenvalue below -gamma)");

  Matrix g_inv = gram.partialPivLu().solve(Matrix::Identity(n, n));
  g_inv = 0.5 * (g_inv + g_inv.adjoint()).eval();
  Matrix a0 = a + eta * g_inv;
  Eigen::SelfAdjointEigenSolver<Matrix> ef0(gram_form(a0, gram));
  if (ef0.eigenvalues()(0) <= 0.0)
    throw std::invalid_argument("bounds_main2: A + eta G^{-1} is not uniformly positive");

  Main2Report rep;
  rep.gamma = gamma;
  rep.eta = eta;
  rep.g_inv_norm = spectral_norm(g_inv);
  rep.tau_eta = spectral_projections_gram(a0, gram).j_tilde_norm;
  rep.r = eta * 0.5 * (1.0 + rep.tau_eta) * rep.g_inv_norm;
  rep.region = StadiumRegion::symmetric(rep.r, rep.r);

  rep.classification = classify_spectrum_gram(a, gram);
  rep.inflation = std::max(1e-8, 1e-10 * rep.classification.spectral_radius);
  const double edge = 2.0 * rep.r + rep.inflation;
  for (const SpectralPoint& p : rep.classification.points) {
    if (p.type == SpectralType::NonReal) {
      if (!rep.region.contains(p.lambda, rep.inflation))
        rep.violations.push_back({p.lambda, "nonreal-enclosure",
                                  rep.region.distance(p.lambda) - rep.r - rep.inflation});
      continue;
    }
    double x = p.lambda.real();
    if (x > edge && p.j_norm <= 0.0)
      rep.violations.push_back({p.lambda, "positive-type", -p.j_norm});
    if (x < -edge && p.j_norm >= 0.0)
      rep.violations.push_back({p.lambda, "negative-type", p.j_norm});
  }
  return rep;
}

}  // namespace kreinspec
