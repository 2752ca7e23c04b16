#include "kreinspec/block.hpp"

#include <cmath>
#include <stdexcept>

#include "kreinspec/linalg.hpp"

namespace kreinspec {

Matrix BlockOperator::assembled() const {
  const int np = n_plus(), nm = n_minus();
  Matrix s = Matrix::Zero(np + nm, np + nm);
  s.topLeftCorner(np, np) = s_plus;
  s.topRightCorner(np, nm) = m;
  s.bottomLeftCorner(nm, np) = -m.adjoint();
  s.bottomRightCorner(nm, nm) = s_minus;
  return s;
}

FundamentalSymmetry BlockOperator::symmetry() const {
  return FundamentalSymmetry::block(n_plus(), n_minus());
}

KreinOperator BlockOperator::krein() const {
  return KreinOperator{assembled(), symmetry()};
}

BlockOperator assemble(Matrix s_plus, Matrix s_minus, Matrix m, double tol_sym) {
  if (s_plus.rows() != s_plus.cols() || s_minus.rows() != s_minus.cols())
    throw std::invalid_argument("assemble: diagonal blocks must be square");
  if (s_plus.rows() < 1 || s_minus.rows() < 1)
    throw std::invalid_argument("assemble: both diagonal blocks must be non-empty");
  if (m.rows() != s_plus.rows() || m.cols() != s_minus.rows())
    throw std::invalid_argument("assemble: coupling block has wrong shape");
  if (!is_hermitian(s_plus, tol_sym) || !is_hermitian(s_minus, tol_sym))
    throw std::invalid_argument("assemble: diagonal blocks must be Hermitian");
  BlockOperator b;
  b.s_plus = std::move(s_plus);
  b.s_minus = std::move(s_minus);
  b.m = std::move(m);
  b.nu = spectral_norm(b.m);
  return b;
}

double distance_to_spectrum(Complex z, const RealVector& spectrum) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < spectrum.size(); ++i)
    best = std::min(best, std::abs(z - Complex(spectrum(i), 0.0)));
  return best;
}

EnclosureReport enclosure(const BlockOperator& b, const ClassifyOptions& opts) {
  EnclosureReport rep;
  rep.nu = b.nu;

  Eigen::SelfAdjointEigenSolver<Matrix> esp(0.5 * (b.s_plus + b.s_plus.adjoint()));
  Eigen::SelfAdjointEigenSolver<Matrix> esm(0.5 * (b.s_minus + b.s_minus.adjoint()));
  if (esp.info() != Eigen::Success || esm.info() != Eigen::Success)
    throw std::runtime_error("enclosure: Hermitian eigensolver failed");
  rep.sigma_plus = esp.eigenvalues();
  rep.sigma_minus = esm.eigenvalues();

  rep.hull_plus = StadiumRegion{rep.sigma_plus.minCoeff(), rep.sigma_plus.maxCoeff(), b.nu};
  rep.hull_minus = StadiumRegion{rep.sigma_minus.minCoeff(), rep.sigma_minus.maxCoeff(), b.nu};

  rep.classification = classify_spectrum(b.krein(), opts);
  const double rho = rep.classification.spectral_radius;
  rep.inflation = std::max(1e-8, 1e-10 * rho);

  for (size_t i = 0; i < rep.classification.points.size(); ++i) {
    const SpectralPoint& p = rep.classification.points[i];
    double dp = distance_to_spectrum(p.lambda, rep.sigma_plus);
    double dm = distance_to_spectrum(p.lambda, rep.sigma_minus);
    if (p.type == SpectralType::NonReal) {
      double excess = std::max(dp, dm) - (b.nu + rep.inflation);
      if (excess > 0.0)
        rep.violations.push_back({p.lambda, "nonreal-enclosure", excess});
      continue;
    }
    // real eigenvalue: definite type is required outside the K_nu tubes
    if (dm > b.nu + rep.inflation && p.j_norm <= 0.0)
      rep.violations.push_back({p.lambda, "positive-type", -p.j_norm});
    if (dp > b.nu + rep.inflation && p.j_norm >= 0.0)
      rep.violations.push_back({p.lambda, "negative-type", p.j_norm});
  }
  return rep;
}

double r_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("r_alpha: alpha must lie in (0,1)");
  double one_m = 1.0 - alpha;
  return one_m * one_m * (1.0 + alpha) * (7.0 - alpha) / (8.0 * (1.0 + alpha * alpha));
}

namespace detail {
double type_threshold(double alpha, double nu) {
  return (1.0 - alpha * alpha) / (4.0 * alpha) * nu;
}
}  // namespace detail

ResolventOrderOneReport resolvent_order_one(const BlockOperator& b, double delta,
                                            int sample_count) {
  if (sample_count < 1) throw std::invalid_argument("resolvent_order_one: empty sample set");
  if (!(delta > 0.0)) throw std::invalid_argument("resolvent_order_one: delta must be > 0");

  Eigen::SelfAdjointEigenSolver<Matrix> esp(0.5 * (b.s_plus + b.s_plus.adjoint()));
  Eigen::SelfAdjointEigenSolver<Matrix> esm(0.5 * (b.s_minus + b.s_minus.adjoint()));
  RealVector sp = esp.eigenvalues(), sm = esm.eigenvalues();

  Matrix s = b.assembled();
  double rho = std::max({std::abs(sp.minCoeff()), std::abs(sp.maxCoeff()),
                         std::abs(sm.minCoeff()), std::abs(sm.maxCoeff()), b.nu});
  double r_lo = std::max(1e-3, 0.5 * std::max(b.nu, delta));
  double r_hi = 1e4 * std::max(1.0, rho);

  const int angles = 16;
  int radii = std::max(1, (sample_count + angles - 1) / angles);

  ResolventOrderOneReport rep;
  for (int ir = 0; ir < radii; ++ir) {
    double radius = radii == 1 ? r_hi : r_lo * std::pow(r_hi / r_lo, double(ir) / (radii - 1));
    for (int ia = 0; ia < angles; ++ia) {
      double theta = M_PI * (ia + 0.5) / angles;  // upper half plane; conjugation symmetry
      Complex z = radius * Complex(std::cos(theta), std::sin(theta));
      if (std::abs(z.imag()) < 1e-9 * radius) continue;
      bool admissible = distance_to_spectrum(z, sm) > b.nu + delta ||
                        distance_to_spectrum(z, sp) > b.nu + delta;
      if (!admissible) continue;
      double rn = resolvent_norm(s, z);
      double c = rn * std::abs(z.imag());
      rep.c_all = std::max(rep.c_all, c);
      ++rep.sample_count;
      if (std::abs(z.imag()) >= 2.0 * b.nu) {
        rep.c_far = std::max(rep.c_far, c);
        ++rep.far_count;
      }
    }
  }
  if (rep.sample_count == 0)
    throw std::runtime_error("resolvent_order_one: no admissible samples");
  rep.far_bound_ok = rep.far_count > 0 && rep.c_far <= 2.0 + 1e-6;
  return rep;
}

BlockOperator sharp_example(Complex z) {
  Matrix sp(1, 1), sm(1, 1), m(1, 1);
  sp(0, 0) = Complex(1.0, 0.0);
  sm(0, 0) = Complex(-1.0, 0.0);
  m(0, 0) = z;
  return assemble(std::move(sp), std::move(sm), std::move(m));
}

}  // namespace kreinspec
