#include "kreinspec/sturm_liouville.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <lapacke.h>

#include "kreinspec/linalg.hpp"
#include "kreinspec/quadrature.hpp"

namespace kreinspec {

// ---------------------------------------------------------------- potential

Potential Potential::constant(double c) {
  Potential q;
  q.kind = Kind::Constant;
  q.value = c;
  return q;
}

Potential Potential::step(double a, double b, double depth) {
  if (!(a < b)) throw std::invalid_argument("Potential::step: need a < b");
  Potential q;
  q.kind = Kind::Step;
  q.a = a;
  q.b = b;
  q.depth = depth;
  return q;
}

Potential Potential::gaussian_well(double center, double width, double depth) {
  if (!(width > 0.0)) throw std::invalid_argument("Potential::gaussian_well: width must be > 0");
  Potential q;
  q.kind = Kind::GaussianWell;
  q.center = center;
  q.width = width;
  q.depth = depth;
  return q;
}

Potential Potential::from_samples(RealVector samples) {
  Potential q;
  q.kind = Kind::Samples;
  q.samples = std::move(samples);
  return q;
}

Potential Potential::parse(const std::string& spec) {
  auto colon = spec.find(':');
  std::string name = spec.substr(0, colon);
  std::vector<double> args;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) args.push_back(std::stod(tok));
  }
  if (name == "constant" && args.size() == 1) return constant(args[0]);
  if (name == "step" && args.size() == 3) return step(args[0], args[1], args[2]);
  if (name == "gaussian_well" && args.size() == 3)
    return gaussian_well(args[0], args[1], args[2]);
  throw std::invalid_argument("Potential::parse: cannot parse '" + spec + "'");
}

double Potential::operator()(double x) const {
  switch (kind) {
    case Kind::Constant: return value;
    case Kind::Step: return (x >= a && x <= b) ? depth : 0.0;
    case Kind::GaussianWell: {
      double s = (x - center) / width;
      return depth * std::exp(-s * s);
    }
    case Kind::Samples:
      throw std::logic_error("Potential: sampled potential has no pointwise form");
  }
  return 0.0;
}

std::string Potential::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Constant: os << "constant:" << value; break;
    case Kind::Step: os << "step:" << a << "," << b << "," << depth; break;
    case Kind::GaussianWell: os << "gaussian_well:" << center << "," << width << "," << depth; break;
    case Kind::Samples: os << "samples[" << samples.size() << "]"; break;
  }
  return os.str();
}

// ------------------------------------------------------------------ problem

SturmLiouvilleProblem::SturmLiouvilleProblem(double L, int n, Potential q)
    : half_length(L), grid_size(n), potential(std::move(q)) {
  if (!(L > 0.0)) throw std::invalid_argument("SturmLiouvilleProblem: L must be > 0");
  if (n < 4 || n % 2 != 0)
    throw std::invalid_argument("SturmLiouvilleProblem: n must be even and >= 4");
  if (potential.kind == Potential::Kind::Samples && potential.samples.size() != n)
    throw std::invalid_argument("SturmLiouvilleProblem: sample count must equal n");
}

RealVector SturmLiouvilleProblem::grid() const {
  RealVector x(grid_size);
  for (int i = 0; i < grid_size; ++i) x(i) = node(i);
  return x;
}

RealVector SturmLiouvilleProblem::q_samples() const {
  if (potential.kind == Potential::Kind::Samples) return potential.samples;
  RealVector q(grid_size);
  for (int i = 0; i < grid_size; ++i) q(i) = potential(node(i));
  return q;
}

double SturmLiouvilleProblem::q_inf_norm() const { return q_samples().cwiseAbs().maxCoeff(); }

double SturmLiouvilleProblem::q_essinf() const { return q_samples().minCoeff(); }

// --------------------------------------------------------------- discretize

DiscreteIndefiniteOperator discretize(const SturmLiouvilleProblem& p) {
  const int n = p.grid_size;
  const double h = p.h();
  DiscreteIndefiniteOperator op;
  op.q = p.q_samples();
  op.t_off = -1.0 / (h * h);
  op.t_diag = RealVector::Constant(n, 2.0 / (h * h)) + op.q;
  IntVector signs(n);
  for (int i = 0; i < n; ++i) signs(i) = p.node(i) > 0.0 ? 1 : -1;
  op.j_weights = FundamentalSymmetry(signs);
  return op;
}

RealMatrix DiscreteIndefiniteOperator::t_dense() const {
  const int n = size();
  RealMatrix t = RealMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    t(i, i) = t_diag(i);
    if (i + 1 < n) {
      t(i, i + 1) = t_off;
      t(i + 1, i) = t_off;
    }
  }
  return t;
}

RealMatrix DiscreteIndefiniteOperator::a_dense() const {
  return j_weights.diagonal().asDiagonal() * t_dense();
}

Vector DiscreteIndefiniteOperator::apply_a(const Vector& x) const {
  const int n = size();
  Vector y(n);
  for (int i = 0; i < n; ++i) {
    Complex acc = t_diag(i) * x(i);
    if (i > 0) acc += t_off * x(i - 1);
    if (i + 1 < n) acc += t_off * x(i + 1);
    y(i) = static_cast<double>(j_weights.sign(i)) * acc;
  }
  return y;
}

Vector DiscreteIndefiniteOperator::apply_a_shifted(const Vector& x, Complex lambda) const {
  Vector y = apply_a(x);
  y -= lambda * x;
  return y;
}

// ---------------------------------------------------------------- enclosure

bool SLEnclosure::contains(Complex z, double inflate, double strip_slack) const {
  if (trivial_regime) return false;
  return stadium.contains(z, inflate) &&
         std::abs(z.imag()) <= strip * (1.0 + strip_slack) + inflate;
}

SLEnclosure sl_enclosure(const SturmLiouvilleProblem& p) {
  SLEnclosure e;
  double qinf = p.q_inf_norm();
  double qmin = p.q_essinf();
  if (qmin >= 0.0) {
    e.trivial_regime = true;  // operator non-negative, spectrum real
    return e;
  }
  e.r = 5.0 * qinf;
  e.d = -5.0 * qmin;
  e.strip = 2.0 * qinf;
  e.stadium = StadiumRegion::symmetric(e.d, e.r);
  return e;
}

// ------------------------------------------------------------- eigenvalues

std::vector<Complex> sl_eigenvalues(const DiscreteIndefiniteOperator& op) {
  const int n = op.size();
  std::vector<double> hmat(static_cast<size_t>(n) * n, 0.0);
  auto at = [&](int r, int c) -> double& { return hmat[static_cast<size_t>(c) * n + r]; };
  for (int i = 0; i < n; ++i) {
    double s = op.j_weights.sign(i);
    at(i, i) = s * op.t_diag(i);
    if (i + 1 < n) {
      at(i, i + 1) = s * op.t_off;
      at(i + 1, i) = op.j_weights.sign(i + 1) * op.t_off;
    }
  }
  std::vector<double> wr(n), wi(n);
  lapack_int info = LAPACKE_dhseqr(LAPACK_COL_MAJOR, 'E', 'N', n, 1, n, hmat.data(), n,
                                   wr.data(), wi.data(), nullptr, 1);
  if (info != 0)
    throw std::runtime_error("sl_eigenvalues: dhseqr failed with info=" + std::to_string(info));
  std::vector<Complex> eig(n);
  for (int i = 0; i < n; ++i) eig[i] = Complex(wr[i], wi[i]);
  return eig;
}

namespace {

Vector deterministic_start(int n, int variant = 0) {
  Vector v(n);
  double s = 0.31830988618 + variant;
  for (int i = 0; i < n; ++i) {
    s = std::cos(s * 1.7 + i);
    v(i) = Complex(1.0 + 0.3 * s, 0.2 * std::sin(0.9 * s + i));
  }
  return v / v.norm();
}

TridiagonalLU factor_t_shifted(const DiscreteIndefiniteOperator& op, Complex z) {
  // T - z J, tridiagonal complex
  const int n = op.size();
  Vector diag(n), lower(n - 1), upper(n - 1);
  for (int i = 0; i < n; ++i)
    diag(i) = Complex(op.t_diag(i), 0.0) - z * static_cast<double>(op.j_weights.sign(i));
  lower.setConstant(Complex(op.t_off, 0.0));
  upper.setConstant(Complex(op.t_off, 0.0));
  return TridiagonalLU(lower, diag, upper);
}

// One eigenvector by inverse iteration on (A - lambda), orthogonalized
// against previously accepted vectors of the same cluster.
Vector sl_eigenvector(const DiscreteIndefiniteOperator& op, Complex lambda,
                      const std::vector<Vector>& against) {
  const int n = op.size();
  Complex shift = lambda;
  TridiagonalLU lu = factor_t_shifted(op, shift);
  if (lu.singular()) {
    shift += Complex(1e-13 * (1.0 + std::abs(lambda)), 0.0);
    lu = factor_t_shifted(op, shift);
  }
  Vector v = deterministic_start(n);
  RealVector jd = op.j_weights.diagonal();
  for (int it = 0; it < 3; ++it) {
    Vector rhs = jd.asDiagonal() * v;  // (A - z) x = v  <=>  (T - z J) x = J v
    Vector x = lu.solve(rhs);
    for (const Vector& u : against) x -= u.dot(x) * u;
    double nx = x.norm();
    if (nx == 0.0) { v = deterministic_start(n, it + 1); continue; }
    v = x / nx;
  }
  return v;
}

struct SLClassified {
  std::vector<SpectralPoint> points;
  double spectral_radius = 0.0;
};

SLClassified classify_sl(const DiscreteIndefiniteOperator& op, std::vector<Complex> eigs) {
  const double tol_real = 1e-9, tol_type = 1e-10, cluster_scale = 1e-8;
  std::sort(eigs.begin(), eigs.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  SLClassified out;
  out.points.resize(eigs.size());
  for (size_t i = 0; i < eigs.size(); ++i) {
    out.points[i].lambda = eigs[i];
    out.spectral_radius = std::max(out.spectral_radius, std::abs(eigs[i]));
  }
  auto is_real = [&](Complex z) { return std::abs(z.imag()) <= tol_real * (1.0 + std::abs(z)); };
  const double gap = cluster_scale * std::max(out.spectral_radius, 1e-6);
  RealVector jd = op.j_weights.diagonal();
  auto jnorm = [&jd](const Vector& u) {
    double acc = 0.0;
    for (int i = 0; i < u.size(); ++i) acc += jd(i) * std::norm(u(i));
    return acc;
  };

  size_t i = 0;
  const size_t n = eigs.size();
  while (i < n) {
    if (!is_real(eigs[i])) {
      Vector u = sl_eigenvector(op, eigs[i], {});
      out.points[i].type = SpectralType::NonReal;
      out.points[i].j_norm = jnorm(u);
      ++i;
      continue;
    }
    size_t k = i + 1;
    while (k < n && is_real(eigs[k]) && std::abs(eigs[k].real() - eigs[k - 1].real()) <= gap) ++k;
    const size_t sz = k - i;
    std::vector<Vector> vecs;
    vecs.reserve(sz);
    for (size_t t = i; t < k; ++t) vecs.push_back(sl_eigenvector(op, eigs[t], vecs));
    if (sz == 1) {
      double jn = jnorm(vecs[0]);
      out.points[i].j_norm = jn;
      out.points[i].type = jn > tol_type    ? SpectralType::PositiveType
                           : jn < -tol_type ? SpectralType::NegativeType
                                            : SpectralType::Indefinite;
    } else {
      Matrix g(sz, sz);
      for (size_t r = 0; r < sz; ++r)
        for (size_t c = 0; c < sz; ++c)
          g(static_cast<long>(r), static_cast<long>(c)) =
              (jd.asDiagonal() * vecs[c]).dot(vecs[r]);
      g = 0.5 * (g + g.adjoint()).eval();
      Eigen::SelfAdjointEigenSolver<Matrix> ges(g);
      double gmin = ges.eigenvalues()(0), gmax = ges.eigenvalues()(static_cast<long>(sz) - 1);
      SpectralType type = gmin > tol_type    ? SpectralType::PositiveType
                          : gmax < -tol_type ? SpectralType::NegativeType
                                             : SpectralType::Indefinite;
      for (size_t t = i; t < k; ++t) {
        out.points[t].type = type;
        out.points[t].j_norm = jnorm(vecs[t - i]);
        out.points[t].multiplicity_hint = static_cast<int>(sz);
      }
    }
    i = k;
  }
  return out;
}

}  // namespace

// ------------------------------------------------------------ solve_verify

SLSpectrumReport solve_and_verify(const SturmLiouvilleProblem& p) {
  SLSpectrumReport rep;
  rep.enclosure = sl_enclosure(p);
  DiscreteIndefiniteOperator op = discretize(p);
  SLClassified cls = classify_sl(op, sl_eigenvalues(op));
  rep.points = std::move(cls.points);
  rep.inflation = std::max(1e-8, 1e-10 * cls.spectral_radius);

  for (const SpectralPoint& pt : rep.points) {
    if (pt.type == SpectralType::NonReal) {
      ++rep.nonreal_count;
      if (rep.enclosure.trivial_regime) {
        rep.violations.push_back(
            {pt.lambda, "real-spectrum-expected", std::abs(pt.lambda.imag())});
        continue;
      }
      double stadium_excess = rep.enclosure.stadium.distance(pt.lambda) - rep.enclosure.r;
      double strip_excess = std::abs(pt.lambda.imag()) - rep.enclosure.strip;
      rep.containment_delta =
          std::max(rep.containment_delta, std::max(0.0, std::max(stadium_excess, strip_excess)));
      rep.r_empirical = std::max(rep.r_empirical, rep.enclosure.stadium.distance(pt.lambda));
      rep.strip_empirical = std::max(rep.strip_empirical, std::abs(pt.lambda.imag()));
      if (stadium_excess > rep.inflation)
        rep.violations.push_back({pt.lambda, "nonreal-enclosure", stadium_excess - rep.inflation});
      if (strip_excess > rep.enclosure.strip * 1e-6 + rep.inflation)
        rep.violations.push_back({pt.lambda, "nonreal-strip", strip_excess});
      continue;
    }
    if (rep.enclosure.trivial_regime) continue;
    double x = pt.lambda.real();
    double edge = rep.enclosure.d + rep.enclosure.r + rep.inflation;
    if (x > edge && pt.j_norm <= 0.0)
      rep.violations.push_back({pt.lambda, "positive-type", -pt.j_norm});
    if (x < -edge && pt.j_norm >= 0.0)
      rep.violations.push_back({pt.lambda, "negative-type", pt.j_norm});
  }
  return rep;
}

// ------------------------------------------------------- branch and kernels

Complex sqrt_upper(Complex lambda) {
  double rho = std::abs(lambda);
  double t = std::arg(lambda);  // (-pi, pi]
  if (t < 0.0) t += 2.0 * M_PI;
  return std::sqrt(rho) * Complex(std::cos(0.5 * t), std::sin(0.5 * t));
}

Complex f_lambda(Complex lambda, double x) {
  if (lambda.imag() == 0.0) throw std::invalid_argument("f_lambda: lambda must be non-real");
  if (x > 0.0) return std::exp(Complex(0.0, 1.0) * sqrt_upper(lambda) * x);
  if (x < 0.0) return std::exp(Complex(0.0, -1.0) * sqrt_upper(-lambda) * x);
  return Complex(1.0, 0.0);
}

Vector krein_resolvent_a0(Complex lambda, const Vector& f, const SturmLiouvilleProblem& p) {
  if (lambda.imag() == 0.0)
    throw std::invalid_argument("krein_resolvent_a0: lambda must be non-real");
  const int n = p.grid_size;
  if (f.size() != n) throw std::invalid_argument("krein_resolvent_a0: grid size mismatch");
  const int half = n / 2;
  const double h = p.h();
  const Complex i_unit(0.0, 1.0);
  const Complex sl = sqrt_upper(lambda);    // Im > 0
  const Complex sml = sqrt_upper(-lambda);  // Im > 0

  RealVector x = p.grid();
  Vector out = Vector::Zero(n);

  // half-line Dirichlet kernel for (-d^2/dx^2 - lambda) with u(0) = 0:
  // (exp(i s |x-y|) - exp(i s (x+y))) / (-2 i s); the prefactor sign follows
  // from (-d^2 - lambda) e^{i s |x|} = -2 i s delta for s in the upper half
  // plane (at lambda = -1 the kernel must be +e^{-|x-y|}/2).
  const Complex den_p = -2.0 * i_unit * sl;
  for (int i = half; i < n; ++i) {
    Complex acc(0.0, 0.0);
    for (int j = half; j < n; ++j) {
      Complex g = (std::exp(i_unit * sl * std::abs(x(i) - x(j))) -
                   std::exp(i_unit * sl * (x(i) + x(j)))) / den_p;
      acc += g * f(j);
    }
    out(i) = h * acc;
  }
  // mirrored kernel with -lambda on the negative half-line
  const Complex den_m = -2.0 * i_unit * sml;
  for (int i = 0; i < half; ++i) {
    double xi = -x(i);
    Complex acc(0.0, 0.0);
    for (int j = 0; j < half; ++j) {
      double yj = -x(j);
      Complex g = (std::exp(i_unit * sml * std::abs(xi - yj)) -
                   std::exp(i_unit * sml * (xi + yj))) / den_m;
      acc += g * f(j);
    }
    out(i) = -h * acc;
  }

  // [f, f_conj(lambda)] = integral of f * f_lambda * sgn (midpoint rule)
  Complex ip(0.0, 0.0);
  for (int j = 0; j < n; ++j) {
    double sgn = x(j) > 0.0 ? 1.0 : -1.0;
    ip += sgn * f(j) * f_lambda(lambda, x(j));
  }
  ip *= h;

  const Complex coef = ip / (i_unit * (sl + sml));
  for (int i = 0; i < n; ++i) out(i) -= coef * f_lambda(lambda, x(i));
  return out;
}

// ------------------------------------------------------- resolvent bound

namespace {

double sl_resolvent_norm(const DiscreteIndefiniteOperator& op, Complex lambda) {
  TridiagonalLU lu = factor_t_shifted(op, lambda);
  TridiagonalLU lu_conj = factor_t_shifted(op, std::conj(lambda));
  if (lu.singular() || lu_conj.singular())
    throw std::runtime_error("sl_resolvent_norm: lambda too close to the spectrum");
  RealVector jd = op.j_weights.diagonal();
  // (M* M)^{-1}-free: power iteration on M^{-*} M^{-1} with
  // M^{-1} b = (T - z J)^{-1} (J b) and M^{-*} b = J (T - conj(z) J)^{-1} b
  auto apply = [&](const Vector& v, Vector& y) {
    Vector w = lu.solve(jd.asDiagonal() * v);
    y = jd.asDiagonal() * lu_conj.solve(w);
  };
  double lam = power_iteration_largest(apply, op.size(), /*max_iter=*/1000, /*rtol=*/1e-12);
  return std::sqrt(std::max(0.0, lam));
}

}  // namespace

ResolventBoundReport resolvent_norm_bound_check(std::span<const Complex> lambda_samples,
                                                const SturmLiouvilleProblem& p) {
  SturmLiouvilleProblem p0(p.half_length, p.grid_size, Potential::constant(0.0));
  DiscreteIndefiniteOperator op = discretize(p0);
  ResolventBoundReport rep;
  for (Complex lambda : lambda_samples) {
    if (lambda.imag() == 0.0)
      throw std::invalid_argument("resolvent_norm_bound_check: samples must be non-real");
    ResolventBoundSample s;
    s.lambda = lambda;
    s.norm = sl_resolvent_norm(op, lambda);
    s.ratio = s.norm * std::abs(lambda.imag()) / 2.0;
    rep.worst_ratio = std::max(rep.worst_ratio, s.ratio);
    rep.samples.push_back(s);
  }
  return rep;
}

// --------------------------------------------------------------- tau0 paths

namespace {

struct BidiagonalCholesky {
  RealVector d;  // diagonal of L
  RealVector e;  // subdiagonal of L

  explicit BidiagonalCholesky(const RealVector& t_diag, double t_off) {
    const int n = static_cast<int>(t_diag.size());
    d.resize(n);
    e.resize(std::max(0, n - 1));
    double prev = 0.0;
    for (int i = 0; i < n; ++i) {
      double v = t_diag(i) - prev;
      if (v <= 0.0)
        throw std::runtime_error("tau0_estimate_sl: T is not positive definite");
      d(i) = std::sqrt(v);
      if (i + 1 < n) {
        e(i) = t_off / d(i);
        prev = e(i) * e(i);
      }
    }
  }

  void solve_lower_in_place(RealVector& b) const {  // L x = b
    const int n = static_cast<int>(d.size());
    b(0) /= d(0);
    for (int i = 1; i < n; ++i) b(i) = (b(i) - e(i - 1) * b(i - 1)) / d(i);
  }
  void solve_upper_in_place(RealVector& b) const {  // L^T x = b
    const int n = static_cast<int>(d.size());
    b(n - 1) /= d(n - 1);
    for (int i = n - 2; i >= 0; --i) b(i) = (b(i) - e(i) * b(i + 1)) / d(i);
  }
  RealVector mul_lower(const RealVector& v) const {  // L v
    const int n = static_cast<int>(d.size());
    RealVector y(n);
    y(0) = d(0) * v(0);
    for (int i = 1; i < n; ++i) y(i) = d(i) * v(i) + e(i - 1) * v(i - 1);
    return y;
  }
  RealVector mul_upper(const RealVector& v) const {  // L^T v
    const int n = static_cast<int>(d.size());
    RealVector y(n);
    for (int i = 0; i < n - 1; ++i) y(i) = d(i) * v(i) + e(i) * v(i + 1);
    y(n - 1) = d(n - 1) * v(n - 1);
    return y;
  }
};

double real_power_iteration(const std::function<void(const RealVector&, RealVector&)>& apply,
                            int n, int max_iter = 500, double rtol = 1e-12) {
  RealVector v(n), w(n);
  double s = 0.36787944117;
  for (int i = 0; i < n; ++i) {
    s = std::cos(1.3 * s + i);
    v(i) = 1.0 + 0.37 * s;
  }
  v /= v.norm();
  double prev = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    apply(v, w);
    double lam = v.dot(w);
    double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
    if (it > 4 && std::abs(lam - prev) <= rtol * std::max(1.0, std::abs(lam))) return lam;
    prev = lam;
  }
  return prev;
}

// || J~ || for A0 = J T with T = L L^T: the pencil T v = lambda J v reduces
// to the symmetric eigenproblem for C = L^{-1} J L^{-T}, and
// J~ = L^{-T} W sgn(mu) W^T L^T.
double sl_j_tilde_norm(const DiscreteIndefiniteOperator& op, const RealVector& jd) {
  const int n = op.size();
  BidiagonalCholesky chol(op.t_diag, op.t_off);

  RealMatrix c(n, n);
  RealVector col(n);
  for (int j = 0; j < n; ++j) {
    col.setZero();
    col(j) = 1.0;
    chol.solve_upper_in_place(col);            // L^{-T} e_j
    col.array() *= jd.array();                 // J L^{-T} e_j
    chol.solve_lower_in_place(col);            // L^{-1} J L^{-T} e_j
    c.col(j) = col;
  }
  c = 0.5 * (c + c.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<RealMatrix> ec(c);
  if (ec.info() != Eigen::Success)
    throw std::runtime_error("tau0_estimate_sl: symmetric eigensolver failed");
  RealVector sgn(n);
  for (int i = 0; i < n; ++i) sgn(i) = ec.eigenvalues()(i) > 0.0 ? 1.0 : -1.0;
  const RealMatrix& w = ec.eigenvectors();

  auto apply_jt = [&](const RealVector& v, RealVector& out) {
    RealVector t = chol.mul_upper(v);          // L^T v
    RealVector u = w.transpose() * t;
    u.array() *= sgn.array();
    t = w * u;
    chol.solve_upper_in_place(t);              // L^{-T} ...
    out = t;
  };
  auto apply_jt_t = [&](const RealVector& v, RealVector& out) {
    RealVector t = v;
    chol.solve_lower_in_place(t);              // L^{-1} v
    RealVector u = w.transpose() * t;
    u.array() *= sgn.array();
    t = w * u;
    out = chol.mul_lower(t);                   // L ...
  };
  auto apply_jtjt = [&](const RealVector& v, RealVector& out) {
    RealVector mid(n);
    apply_jt(v, mid);
    apply_jt_t(mid, out);
  };
  double lam = real_power_iteration(apply_jtjt, n);
  return std::sqrt(std::max(0.0, lam));
}

}  // namespace

SLTauReport tau0_estimate_sl(const SturmLiouvilleProblem& p, double n_cutoff,
                             bool identity_weight) {
  if (!(n_cutoff > 1.0)) throw std::invalid_argument("tau0_estimate_sl: cutoff must exceed 1");
  SturmLiouvilleProblem p0(p.half_length, p.grid_size, Potential::constant(0.0));
  DiscreteIndefiniteOperator op = discretize(p0);
  if (identity_weight) op.j_weights = FundamentalSymmetry::identity(op.size());
  const int n = op.size();
  RealVector jd = op.j_weights.diagonal();

  // (1/pi) [(A0+it)^{-1} + (A0-it)^{-1}] = (2/pi) Re[(T - it J)^{-1} J]
  Vector col(n);
  auto integrand = [&](double t, Matrix& out) {
    TridiagonalLU lu = factor_t_shifted(op, Complex(0.0, t));
    for (int j = 0; j < n; ++j) {
      col.setZero();
      col(j) = Complex(jd(j), 0.0);
      lu.solve_in_place(col);
      out.col(j) = (2.0 / M_PI) * col.real().cast<Complex>();
    }
  };
  double decades = std::log10(n_cutoff * n_cutoff);
  int panels = std::max(8, static_cast<int>(std::ceil(1.2 * decades)));
  MatrixIntegralEstimate est =
      integrate_matrix_norm(integrand, n, log_panels(1.0 / n_cutoff, n_cutoff, panels),
                            /*rtol=*/1e-4, /*max_refine=*/1);

  SLTauReport rep;
  rep.quadrature.value = est.norm;
  rep.quadrature.cutoff = n_cutoff;
  rep.quadrature.panels = est.panels;
  rep.quadrature.scheme = "gauss-legendre-16/log-panels";
  rep.quadrature.residual = est.residual;
  rep.j_tilde_norm = sl_j_tilde_norm(op, jd);
  rep.gap = std::abs(rep.quadrature.value - rep.j_tilde_norm);
  return rep;
}

// ----------------------------------------------------------------- endpoints

TailLimits classify_tails(double m_plus, double m_minus) {
  TailLimits t;
  t.m_plus = m_plus;
  t.m_minus = m_minus;
  t.regime = m_plus > -m_minus ? "finite-nonreal-spectrum" : "accumulation-possible";
  return t;
}

TailLimits m_endpoints(const SturmLiouvilleProblem& p) {
  switch (p.potential.kind) {
    case Potential::Kind::Constant:
      return classify_tails(p.potential.value, p.potential.value);
    case Potential::Kind::Step:
    case Potential::Kind::GaussianWell:
      return classify_tails(0.0, 0.0);
    case Potential::Kind::Samples:
      break;
  }
  throw std::invalid_argument("m_endpoints: sampled potential has no declared tails");
}

// ----------------------------------------------------------------- refinement

SLRefinementReport refinement_check(const SturmLiouvilleProblem& p) {
  if (!p.potential.analytic())
    throw std::invalid_argument("refinement_check: analytic potential required");
  SLRefinementReport rep;
  rep.base = solve_and_verify(p);
  SturmLiouvilleProblem pl(2.0 * p.half_length, 2 * p.grid_size, p.potential);
  SturmLiouvilleProblem ph(p.half_length, 2 * p.grid_size, p.potential);
  rep.length_doubled = solve_and_verify(pl);
  rep.grid_refined = solve_and_verify(ph);

  for (const SpectralPoint& pt : rep.base.points) {
    if (pt.type != SpectralType::NonReal) continue;
    if (!rep.base.enclosure.trivial_regime &&
        !rep.base.enclosure.stadium.contains(pt.lambda, rep.base.inflation))
      continue;
    double best = std::numeric_limits<double>::infinity();
    for (const SpectralPoint& qt : rep.length_doubled.points) {
      if (qt.type != SpectralType::NonReal) continue;
      best = std::min(best, std::abs(pt.lambda - qt.lambda));
    }
    if (std::isfinite(best)) rep.max_eigenvalue_move = std::max(rep.max_eigenvalue_move, best);
  }
  rep.deltas_shrink = rep.length_doubled.containment_delta <= rep.base.containment_delta + 1e-12 &&
                      rep.grid_refined.containment_delta <= rep.base.containment_delta + 1e-12;
  return rep;
}

}  // namespace kreinspec
