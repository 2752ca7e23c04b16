#pragma once

#include <string>
#include <vector>

#include "kreinspec/core.hpp"

namespace kreinspec {

/// 2x2 operator matrix S = [[S+, M], [-M*, S-]] with Hermitian diagonal
/// blocks. With J = diag(I, -I) the assembled matrix is J-selfadjoint by
/// construction; nu caches the spectral norm of the coupling block.
struct BlockOperator {
  Matrix s_plus;
  Matrix s_minus;
  Matrix m;
  double nu = 0.0;

  int n_plus() const { return static_cast<int>(s_plus.rows()); }
  int n_minus() const { return static_cast<int>(s_minus.rows()); }
  int dim() const { return n_plus() + n_minus(); }

  Matrix assembled() const;
  FundamentalSymmetry symmetry() const;
  KreinOperator krein() const;
};

/// Validates Hermitian diagonal blocks and builds the operator; the lower
/// left block is exactly -(m adjoint).
BlockOperator assemble(Matrix s_plus, Matrix s_minus, Matrix m, double tol_sym = 1e-10);

struct EnclosureViolation {
  Complex lambda;
  std::string claim;   // "nonreal-enclosure", "positive-type", "negative-type"
  double margin = 0.0; // how far beyond tolerance
};

struct EnclosureReport {
  RealVector sigma_plus;   // spectrum of S+
  RealVector sigma_minus;  // spectrum of S-
  double nu = 0.0;
  StadiumRegion hull_plus;   // K_nu over the hull interval of sigma(S+)
  StadiumRegion hull_minus;  // K_nu over the hull interval of sigma(S-)
  double inflation = 0.0;    // containment tolerance used
  SpectrumClassification classification;
  std::vector<EnclosureViolation> violations;

  bool clean() const { return violations.empty(); }
};

/// Distance from z to a finite set of reals.
double distance_to_spectrum(Complex z, const RealVector& spectrum);

/// Verifies against direct eigensolves that every non-real eigenvalue lies
/// within distance nu of both diagonal-block spectra, and that real
/// eigenvalues farther than nu from sigma(S-) (resp. sigma(S+)) have
/// positive (negative) type. Membership tests use the discrete spectra, not
/// their interval hulls; the hull stadiums are reported for plotting.
EnclosureReport enclosure(const BlockOperator& b, const ClassifyOptions& opts = {});

/// Lower bound (1-a)^2 (1+a) (7-a) / (8 (1+a^2)) on the J-inner square of
/// near-eigenvectors at relative distance a; positive on (0,1).
double r_alpha(double alpha);

namespace detail {
/// Residual threshold below which the definiteness bound r_alpha applies.
double type_threshold(double alpha, double nu);
}  // namespace detail

struct ResolventOrderOneReport {
  double c_all = 0.0;     // smallest C with ||(S-z)^{-1}|| <= C/|Im z| over all samples
  double c_far = 0.0;     // same over the |Im z| >= 2 nu subsample
  int sample_count = 0;
  int far_count = 0;
  bool far_bound_ok = false;  // c_far <= 2 + tol
};

/// Samples non-real z with dist(z, sigma(S-)) > nu + delta or
/// dist(z, sigma(S+)) > nu + delta on log-spaced radii and returns the
/// smallest first-order growth constant observed.
ResolventOrderOneReport resolvent_order_one(const BlockOperator& b, double delta,
                                            int sample_count);

/// The sharp two-dimensional family [[1, z], [-conj z, -1]].
BlockOperator sharp_example(Complex z);

}  // namespace kreinspec
