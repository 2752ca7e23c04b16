#pragma once

#include <string>
#include <vector>

#include "kreinspec/core.hpp"

namespace kreinspec {

/// A J-non-negative invertible operator A0 (J*A0 Hermitian positive
/// definite up to tolerance) together with a J-selfadjoint perturbation V.
struct NonNegativePair {
  KreinOperator a0;
  Matrix v;

  static NonNegativePair checked(KreinOperator a0, Matrix v, double tol = 1e-10);
};

/// Spectral projections of an operator with real spectrum split by sign,
/// and the fundamental symmetry of the induced decomposition.
struct SpectralProjections {
  Matrix e_plus;
  Matrix e_minus;
  Matrix j_tilde;       // e_plus - e_minus
  double j_tilde_norm;  // spectral norm; >= 1 always
};

/// Riesz projections of a J-non-negative invertible operator onto its
/// positive and negative spectrum. Throws if a zero (or non-real)
/// eigenvalue is detected within tolerance.
SpectralProjections spectral_projections(const KreinOperator& a0);

/// Same with a general Hermitian invertible Gram matrix G, [f,g] = (Gf,g);
/// requires G*a0 Hermitian positive definite.
SpectralProjections spectral_projections_gram(const Matrix& a0, const Matrix& gram);

struct TauEstimate {
  double value = 0.0;     // norm of the resolvent integral / pi
  double cutoff = 0.0;    // integration over [1/cutoff, cutoff] (or [-cutoff, cutoff])
  int panels = 0;         // panel count of the final refinement level
  std::string scheme;     // quadrature rule identifier
  double residual = 0.0;  // change from the previous refinement level
};

/// (1/pi) || int_{1/n}^{n} ((A0+it)^{-1} + (A0-it)^{-1}) dt || by adaptive
/// Gauss-Legendre panels on a logarithmic grid, using the symmetrized
/// integrand 2 A0 (A0^2 + t^2)^{-1}. panels <= 0 picks a default from the
/// integration range. Converges to ||J-tilde|| as n grows.
TauEstimate tau_quadrature(const KreinOperator& a0, double n, int panels = 0);

/// (1/pi) || int_{-n}^{n} (A + eta G^{-1} - it)^{-1} dt ||; requires
/// A + eta G^{-1} uniformly positive in the (G.,.) inner product.
TauEstimate tau_eta_quadrature(const KreinOperator& a, const Matrix& g_inv, double eta,
                               double n);

struct PerturbationBounds {
  double tau0 = 1.0;
  double r = 0.0;
  double d = 0.0;
  StadiumRegion region;       // K_r((-d, d))
  double v_norm = 0.0;
  double min_sigma_jv = 0.0;  // smallest eigenvalue of the Hermitian form of V
  bool trivial_branch = false;  // V non-negative: perturbed operator stays non-negative
};

/// Enclosure constants r = (1+tau0)/2 ||V|| and d = -(1+tau0)/2 min sigma(JV)
/// with tau0 = ||J-tilde|| of A0.
PerturbationBounds bounds_main1(const NonNegativePair& pair);

struct PerturbationViolation {
  Complex lambda;
  std::string claim;
  double margin = 0.0;
};

struct Main1Report {
  PerturbationBounds bounds;
  SpectrumClassification classification;
  std::vector<PerturbationViolation> violations;
  double inflation = 0.0;

  bool clean() const { return violations.empty(); }
};

/// Verifies on the spectrum of A0 + V: non-real eigenvalues lie in
/// K_r((-d,d)); real eigenvalues beyond d+r (resp. below -(d+r)) have
/// positive (negative) type.
Main1Report verify_main1(const NonNegativePair& pair, const ClassifyOptions& opts = {});

struct Main2Report {
  double tau_eta = 1.0;
  double r = 0.0;
  StadiumRegion region;  // K_r((-r, r))
  double gamma = 0.0;
  double eta = 0.0;
  double g_inv_norm = 0.0;
  SpectrumClassification classification;
  std::vector<PerturbationViolation> violations;
  double inflation = 0.0;

  bool clean() const { return violations.empty(); }
};

/// Bounds for A selfadjoint in ((G.,.)) with [Af,f] >= -gamma ||f||^2:
/// r = eta (1+tau_eta)/2 ||G^{-1}|| for any eta > gamma making A + eta G^{-1}
/// uniformly positive. Verifies the enclosure on the spectrum of A.
Main2Report bounds_main2(const Matrix& a, const Matrix& g, double gamma, double eta);

}  // namespace kreinspec
