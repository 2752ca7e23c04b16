#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kreinspec/core.hpp"
#include "kreinspec/perturbation.hpp"

namespace kreinspec {

/// Potential q for the weighted operator sgn(x)(-f'' + q f). Named analytic
/// forms keep constant tails so the endpoint limits are well defined;
/// sampled potentials carry no tail information.
struct Potential {
  enum class Kind { Constant, Step, GaussianWell, Samples };

  Kind kind = Kind::Constant;
  double value = 0.0;                  // Constant
  double a = 0.0, b = 0.0;             // Step support [a, b]
  double depth = 0.0;                  // Step / GaussianWell value
  double center = 0.0, width = 1.0;    // GaussianWell
  RealVector samples;                  // Samples

  static Potential constant(double c);
  static Potential step(double a, double b, double depth);
  static Potential gaussian_well(double center, double width, double depth);
  static Potential from_samples(RealVector samples);
  /// "constant:-1", "step:-1,1,-5", "gaussian_well:0,1,-3"
  static Potential parse(const std::string& spec);

  bool analytic() const { return kind != Kind::Samples; }
  double operator()(double x) const;  // analytic kinds only
  std::string describe() const;
};

/// Truncated symmetric problem for sgn(x)(-f'' + q f) on (-L, L) with a
/// cell-centered grid x_i = -L + (i + 1/2) h, h = 2L/n. No node sits at
/// x = 0 and each half-line carries exactly n/2 nodes.
struct SturmLiouvilleProblem {
  double half_length = 40.0;
  int grid_size = 2000;
  Potential potential;

  SturmLiouvilleProblem() = default;
  SturmLiouvilleProblem(double L, int n, Potential q);

  double h() const { return 2.0 * half_length / grid_size; }
  double node(int i) const { return -half_length + (i + 0.5) * h(); }
  RealVector grid() const;
  RealVector q_samples() const;
  double q_inf_norm() const;  // max |q_i| over the samples
  double q_essinf() const;    // min q_i over the samples
};

/// T = second-difference with Dirichlet ends plus diag(q); A = J T with
/// J = diag(sgn(x_i)). A is J-selfadjoint by construction.
struct DiscreteIndefiniteOperator {
  RealVector t_diag;  // 2/h^2 + q_i
  double t_off = 0.0; // -1/h^2
  RealVector q;
  FundamentalSymmetry j_weights;

  int size() const { return static_cast<int>(t_diag.size()); }
  RealMatrix t_dense() const;
  RealMatrix a_dense() const;
  Vector apply_a(const Vector& x) const;        // J T x
  Vector apply_a_shifted(const Vector& x, Complex lambda) const;  // (A - lambda) x
};

DiscreteIndefiniteOperator discretize(const SturmLiouvilleProblem& p);

/// Enclosure constants r = 5 ||q||_inf, d = -5 essinf q and the strip
/// half-width 2 ||q||_inf, valid in the indefinite regime essinf q < 0.
/// When essinf q >= 0 the operator is non-negative and the spectrum is
/// real; trivial_regime marks that case and no region is fabricated.
struct SLEnclosure {
  bool trivial_regime = false;
  double r = 0.0;
  double d = 0.0;
  double strip = 0.0;
  StadiumRegion stadium;  // K_r((-d, d))

  bool contains(Complex z, double inflate, double strip_slack) const;
};

SLEnclosure sl_enclosure(const SturmLiouvilleProblem& p);

struct SLViolation {
  Complex lambda;
  std::string claim;
  double margin = 0.0;
};

struct SLSpectrumReport {
  SLEnclosure enclosure;
  std::vector<SpectralPoint> points;  // sorted by (Re, Im)
  std::vector<SLViolation> violations;
  int nonreal_count = 0;
  double containment_delta = 0.0;  // worst excess of a non-real eigenvalue
  double r_empirical = 0.0;        // tightest stadium radius over (-d, d)
  double strip_empirical = 0.0;    // largest |Im lambda|
  double inflation = 0.0;

  bool clean() const { return violations.empty(); }
};

/// Eigensolve of the discretized operator, type classification, and checks
/// of the enclosure constants against every computed eigenvalue.
SLSpectrumReport solve_and_verify(const SturmLiouvilleProblem& p);

/// Eigenvalues only (real nonsymmetric tridiagonal QR).
std::vector<Complex> sl_eigenvalues(const DiscreteIndefiniteOperator& op);

/// Square root with branch cut along the positive real axis: for
/// lambda = rho e^{it}, t in [0, 2pi), returns sqrt(rho) e^{it/2}. Maps
/// non-real lambda into the open upper half-plane.
Complex sqrt_upper(Complex lambda);

/// f_lambda(x) = exp(i sqrt(lambda) x) for x > 0, exp(-i sqrt(-lambda) x)
/// for x < 0, 1 at x = 0; decays at both infinities for non-real lambda.
Complex f_lambda(Complex lambda, double x);

/// Resolvent of the unperturbed operator sgn(x)(-d^2/dx^2) applied to a grid
/// function through the explicit half-line Dirichlet Green kernels and the
/// rank-one coupling term; quadrature is the composite midpoint rule the
/// cell-centered grid induces.
Vector krein_resolvent_a0(Complex lambda, const Vector& f, const SturmLiouvilleProblem& p);

struct ResolventBoundSample {
  Complex lambda;
  double norm = 0.0;
  double ratio = 0.0;  // norm * |Im lambda| / 2
};

struct ResolventBoundReport {
  std::vector<ResolventBoundSample> samples;
  double worst_ratio = 0.0;
};

/// Checks ||(A0,h - lambda)^{-1}|| <= 2/|Im lambda| for the discretized
/// q = 0 operator at the given sample points (potential of p is ignored).
ResolventBoundReport resolvent_norm_bound_check(std::span<const Complex> lambda_samples,
                                                const SturmLiouvilleProblem& p);

struct SLTauReport {
  TauEstimate quadrature;
  double j_tilde_norm = 0.0;  // direct value from the spectral projections
  double gap = 0.0;           // |quadrature.value - j_tilde_norm|
};

/// Resolvent-integral estimate of tau0 for the discretized q = 0 operator,
/// cross-checked against the directly computed ||J-tilde||. With
/// identity_weight the sign weight is replaced by +1; the operator is then
/// positive definite and both values must equal 1.
SLTauReport tau0_estimate_sl(const SturmLiouvilleProblem& p, double n_cutoff,
                             bool identity_weight = false);

struct TailLimits {
  double m_plus = 0.0;
  double m_minus = 0.0;
  std::string regime;  // "finite-nonreal-spectrum" or "accumulation-possible"
};

/// Regime from given endpoint limits: m_plus > -m_minus keeps the non-real
/// spectrum finite, otherwise it may accumulate to [m_plus, -m_minus].
TailLimits classify_tails(double m_plus, double m_minus);

/// Endpoint limits of the potential; requires declared (analytic) tails.
TailLimits m_endpoints(const SturmLiouvilleProblem& p);

struct SLRefinementReport {
  SLSpectrumReport base;
  SLSpectrumReport length_doubled;  // 2L, 2n (same h)
  SLSpectrumReport grid_refined;    // L, 2n (half h)
  double max_eigenvalue_move = 0.0; // non-real eigenvalues inside the region, L doubled
  bool deltas_shrink = false;
};

/// Truncation and discretization control: containment deltas must not grow
/// under L doubling or h halving.
SLRefinementReport refinement_check(const SturmLiouvilleProblem& p);

}  // namespace kreinspec
