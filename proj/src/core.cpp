#include "kreinspec/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kreinspec/linalg.hpp"

namespace kreinspec {

FundamentalSymmetry::FundamentalSymmetry(IntVector signs) : signs_(std::move(signs)) {
  for (int i = 0; i < signs_.size(); ++i) {
    if (signs_(i) != 1 && signs_(i) != -1)
      throw std::invalid_argument("FundamentalSymmetry: entries must be +1 or -1");
  }
}

FundamentalSymmetry FundamentalSymmetry::identity(int n) {
  return FundamentalSymmetry(IntVector::Ones(n));
}

FundamentalSymmetry FundamentalSymmetry::block(int n_plus, int n_minus) {
  IntVector s(n_plus + n_minus);
  s.head(n_plus).setOnes();
  s.tail(n_minus).setConstant(-1);
  return FundamentalSymmetry(s);
}

RealVector FundamentalSymmetry::diagonal() const { return signs_.cast<double>(); }

Matrix FundamentalSymmetry::apply_left(const Matrix& m) const {
  if (m.rows() != dim()) throw std::invalid_argument("FundamentalSymmetry: dimension mismatch");
  return diagonal().asDiagonal() * m;
}

Vector FundamentalSymmetry::apply(const Vector& v) const {
  if (v.size() != dim()) throw std::invalid_argument("FundamentalSymmetry: dimension mismatch");
  return diagonal().asDiagonal() * v;
}

Matrix krein_adjoint(const Matrix& a, const FundamentalSymmetry& j) {
  if (a.rows() != a.cols() || a.rows() != j.dim())
    throw std::invalid_argument("krein_adjoint: dimension mismatch");
  RealVector d = j.diagonal();
  return d.asDiagonal() * a.adjoint() * d.asDiagonal();
}

Complex krein_inner(const Vector& f, const Vector& g, const FundamentalSymmetry& j) {
  if (f.size() != g.size() || f.size() != j.dim())
    throw std::invalid_argument("krein_inner: length mismatch");
  Complex acc(0.0, 0.0);
  for (int i = 0; i < f.size(); ++i) acc += static_cast<double>(j.sign(i)) * f(i) * std::conj(g(i));
  return acc;
}

KreinOperator KreinOperator::checked(Matrix m, FundamentalSymmetry j, double tol_sym) {
  if (m.rows() != m.cols() || m.rows() != j.dim())
    throw std::invalid_argument("KreinOperator: dimension mismatch");
  Matrix jm = j.apply_left(m);
  if (!is_hermitian(jm, tol_sym))
    throw std::invalid_argument("KreinOperator: J*A is not Hermitian within tolerance");
  return KreinOperator{std::move(m), std::move(j)};
}

Matrix KreinOperator::hermitian_part() const {
  Matrix jm = symmetry.apply_left(matrix);
  return 0.5 * (jm + jm.adjoint());
}

StadiumRegion StadiumRegion::symmetric(double d, double r) {
  if (d < 0.0 || r < 0.0) throw std::invalid_argument("StadiumRegion: d and r must be >= 0");
  return StadiumRegion{-d, d, r};
}

double StadiumRegion::distance(Complex z) const {
  double x = z.real(), y = z.imag();
  if (x < lo) return std::hypot(x - lo, y);
  if (x > hi) return std::hypot(x - hi, y);
  return std::abs(y);
}

bool stadium_membership(Complex z, const StadiumRegion& region) { return region.contains(z); }

const char* to_string(SpectralType t) {
  switch (t) {
    case SpectralType::PositiveType: return "positive";
    case SpectralType::NegativeType: return "negative";
    case SpectralType::Indefinite: return "indefinite";
    case SpectralType::NonReal: return "nonreal";
  }
  return "unknown";
}

namespace {

struct EigenPair {
  Complex lambda;
  Vector vec;
};

SpectrumClassification classify_impl(const Matrix& a, const Matrix& gram,
                                     const ClassifyOptions& opts) {
  const int n = static_cast<int>(a.rows());
  Eigen::ComplexEigenSolver<Matrix> solver(a, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("classify_spectrum: eigensolver failed");

  std::vector<EigenPair> pairs(n);
  for (int i = 0; i < n; ++i) {
    pairs[i].lambda = solver.eigenvalues()(i);
    pairs[i].vec = solver.eigenvectors().col(i);
    pairs[i].vec /= pairs[i].vec.norm();
  }
  std::sort(pairs.begin(), pairs.end(), [](const EigenPair& p, const EigenPair& q) {
    if (p.lambda.real() != q.lambda.real()) return p.lambda.real() < q.lambda.real();
    return p.lambda.imag() < q.lambda.imag();
  });

  SpectrumClassification out;
  out.points.resize(n);
  out.eigenvectors.resize(n, n);
  for (int i = 0; i < n; ++i) {
    out.points[i].lambda = pairs[i].lambda;
    out.eigenvectors.col(i) = pairs[i].vec;
    out.spectral_radius = std::max(out.spectral_radius, std::abs(pairs[i].lambda));
  }

  auto jnorm = [&gram](const Vector& u) { return std::real(u.dot(gram * u)); };
  auto is_real = [&opts](Complex z) {
    return std::abs(z.imag()) <= opts.tol_real * (1.0 + std::abs(z));
  };

  const double cluster_gap = opts.cluster_radius * std::max(out.spectral_radius, 1e-6);

  int i = 0;
  while (i < n) {
    SpectralPoint& p = out.points[i];
    if (!is_real(p.lambda)) {
      p.type = SpectralType::NonReal;
      p.j_norm = jnorm(out.eigenvectors.col(i));
      ++i;
      continue;
    }
    // gather the cluster of real eigenvalues around position i
    int k = i + 1;
    while (k < n && is_real(out.points[k].lambda) &&
           std::abs(out.points[k].lambda.real() - out.points[k - 1].lambda.real()) <= cluster_gap)
      ++k;
    const int sz = k - i;
    if (sz == 1) {
      p.j_norm = jnorm(out.eigenvectors.col(i));
      if (p.j_norm > opts.tol_type) p.type = SpectralType::PositiveType;
      else if (p.j_norm < -opts.tol_type) p.type = SpectralType::NegativeType;
      else p.type = SpectralType::Indefinite;
    } else {
      Matrix u = out.eigenvectors.middleCols(i, sz);
      // near-dependent eigenvectors signal a (numerically) defective eigenvalue
      Eigen::JacobiSVD<Matrix> svd(u);
      bool defective = svd.singularValues()(sz - 1) < 1e-6 * svd.singularValues()(0);
      SpectralType type = SpectralType::Indefinite;
      if (!defective) {
        Matrix g = u.adjoint() * gram * u;
        g = 0.5 * (g + g.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<Matrix> ges(g);
        double gmin = ges.eigenvalues()(0), gmax = ges.eigenvalues()(sz - 1);
        if (gmin > opts.tol_type) type = SpectralType::PositiveType;
        else if (gmax < -opts.tol_type) type = SpectralType::NegativeType;
      }
      for (int t = i; t < k; ++t) {
        out.points[t].type = type;
        out.points[t].j_norm = jnorm(out.eigenvectors.col(t));
        out.points[t].multiplicity_hint = sz;
        out.points[t].defective = defective;
      }
      out.any_defective = out.any_defective || defective;
    }
    i = k;
  }
  return out;
}

}  // namespace

SpectrumClassification classify_spectrum(const KreinOperator& a, const ClassifyOptions& opts) {
  Matrix gram = a.symmetry.diagonal().asDiagonal().toDenseMatrix().cast<Complex>();
  return classify_impl(a.matrix, gram, opts);
}

SpectrumClassification classify_spectrum(const KreinOperator& a, double tol_real, double tol_type) {
  ClassifyOptions opts;
  opts.tol_real = tol_real;
  opts.tol_type = tol_type;
  return classify_spectrum(a, opts);
}

SpectrumClassification classify_spectrum_gram(const Matrix& a, const Matrix& gram,
                                              const ClassifyOptions& opts) {
  if (a.rows() != a.cols() || gram.rows() != a.rows() || gram.cols() != a.cols())
    throw std::invalid_argument("classify_spectrum_gram: dimension mismatch");
  return classify_impl(a, gram, opts);
}

bool conjugation_symmetric(std::span<const Complex> eigenvalues, double tol) {
  std::vector<Complex> rest(eigenvalues.begin(), eigenvalues.end());
  while (!rest.empty()) {
    Complex target = std::conj(rest.back());
    rest.pop_back();
    double best = std::numeric_limits<double>::infinity();
    size_t best_i = 0;
    for (size_t i = 0; i < rest.size(); ++i) {
      double dd = std::abs(rest[i] - target);
      if (dd < best) { best = dd; best_i = i; }
    }
    if (std::abs(target.imag()) <= tol && best > tol) continue;  // self-paired real value
    if (best > tol) return false;
    rest.erase(rest.begin() + static_cast<long>(best_i));
  }
  return true;
}

GrowthCheckReport resolvent_growth_check(const KreinOperator& a, int m,
                                         std::span<const Complex> samples, double M) {
  if (m < 1) throw std::invalid_argument("resolvent_growth_check: order m must be >= 1");
  GrowthCheckReport report;
  report.order = m;
  report.m_bound = M;
  report.min_m = 0.0;
  report.all_pass = true;
  for (Complex lambda : samples) {
    if (lambda.imag() == 0.0)
      throw std::invalid_argument("resolvent_growth_check: sample points must be non-real");
    GrowthSample s;
    s.lambda = lambda;
    s.resolvent_norm = resolvent_norm(a.matrix, lambda);
    double factor = std::pow(1.0 + std::abs(lambda), 2 * m - 2) /
                    std::pow(std::abs(lambda.imag()), m);
    s.bound = M * factor;
    s.pass = s.resolvent_norm <= s.bound;
    report.min_m = std::max(report.min_m, s.resolvent_norm / factor);
    report.all_pass = report.all_pass && s.pass;
    report.samples.push_back(s);
  }
  return report;
}

Matrix krein_orthogonal_projection_gram(const Matrix& basis, const Matrix& gram) {
  // B^+ = adjoint w.r.t. [f,g] = (G f, g): B^+ = B* G
  Matrix bplus = basis.adjoint() * gram;
  Matrix small = bplus * basis;
  Eigen::PartialPivLU<Matrix> lu(small);
  if (std::abs(lu.determinant()) == 0.0)
    throw std::runtime_error("krein_orthogonal_projection: B^+ B is singular (subspace not definite?)");
  return basis * lu.solve(bplus);
}

Matrix krein_orthogonal_projection(const Matrix& basis, const FundamentalSymmetry& j) {
  Matrix gram = j.diagonal().asDiagonal().toDenseMatrix().cast<Complex>();
  return krein_orthogonal_projection_gram(basis, gram);
}

}  // namespace kreinspec
