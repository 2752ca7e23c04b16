#pragma once

#include <span>
#include <string>
#include <vector>

#include "kreinspec/types.hpp"

namespace kreinspec {

/// Diagonal signature J = diag(+-1). J^2 = I and J = J* hold exactly;
/// it turns the indefinite inner product [f,g] = (Jf,g) into a Hilbert one.
class FundamentalSymmetry {
 public:
  FundamentalSymmetry() = default;
  explicit FundamentalSymmetry(IntVector signs);

  static FundamentalSymmetry identity(int n);
  /// diag(+1 x n_plus, -1 x n_minus)
  static FundamentalSymmetry block(int n_plus, int n_minus);

  int dim() const { return static_cast<int>(signs_.size()); }
  int sign(int i) const { return signs_(i); }
  const IntVector& signs() const { return signs_; }
  RealVector diagonal() const;

  /// J * m (row scaling).
  Matrix apply_left(const Matrix& m) const;
  Vector apply(const Vector& v) const;

 private:
  IntVector signs_;
};

/// J A* J, the adjoint with respect to [f,g] = (Jf,g).
Matrix krein_adjoint(const Matrix& a, const FundamentalSymmetry& j);

/// [f,g] = sum_i signs_i f_i conj(g_i).
Complex krein_inner(const Vector& f, const Vector& g, const FundamentalSymmetry& j);

/// A square matrix that equals its own J-adjoint, i.e. J*matrix is Hermitian.
struct KreinOperator {
  Matrix matrix;
  FundamentalSymmetry symmetry;

  /// Validates dimensions and J-selfadjointness up to tol_sym (relative).
  static KreinOperator checked(Matrix m, FundamentalSymmetry j, double tol_sym = 1e-10);
  int dim() const { return static_cast<int>(matrix.rows()); }
  Matrix hermitian_part() const;  // J * matrix, symmetrized
};

/// K_r([lo,hi]) = { z : dist(z, [lo,hi]) <= r }. Membership is an exact
/// closed-form distance test; the region is conjugation symmetric.
struct StadiumRegion {
  double lo = 0.0;
  double hi = 0.0;
  double r = 0.0;

  static StadiumRegion symmetric(double d, double r);  // interval (-d, d)

  double half_length() const { return 0.5 * (hi - lo); }
  double distance(Complex z) const;
  bool contains(Complex z) const { return distance(z) <= r; }
  bool contains(Complex z, double inflate) const { return distance(z) <= r + inflate; }
};

bool stadium_membership(Complex z, const StadiumRegion& region);

enum class SpectralType { PositiveType, NegativeType, Indefinite, NonReal };

const char* to_string(SpectralType t);

struct SpectralPoint {
  Complex lambda;
  SpectralType type = SpectralType::Indefinite;
  double j_norm = 0.0;  // [u,u] of the Hilbert-normalized eigenvector
  int multiplicity_hint = 1;
  bool defective = false;
};

struct ClassifyOptions {
  /// A point is treated as real when |Im lambda| <= tol_real * (1 + |lambda|).
  double tol_real = 1e-9;
  /// Sign threshold on [u,u] (Gram eigenvalues for clusters).
  double tol_type = 1e-10;
  /// Real eigenvalues closer than cluster_radius * spectral_radius are
  /// classified jointly through the Gram matrix of their eigenspace.
  double cluster_radius = 1e-8;
};

struct SpectrumClassification {
  std::vector<SpectralPoint> points;  // sorted by (Re, Im)
  Matrix eigenvectors;                // column i belongs to points[i]
  bool any_defective = false;
  double spectral_radius = 0.0;
};

/// Full eigendecomposition with type classification of the real spectrum via
/// the sign of the J-inner product on eigenspaces.
SpectrumClassification classify_spectrum(const KreinOperator& a, double tol_real, double tol_type);
SpectrumClassification classify_spectrum(const KreinOperator& a, const ClassifyOptions& opts = {});

/// Same classification against a general Hermitian invertible Gram matrix G,
/// with [f,g] = (Gf,g).
SpectrumClassification classify_spectrum_gram(const Matrix& a, const Matrix& gram,
                                              const ClassifyOptions& opts = {});

/// True when the eigenvalue multiset equals its conjugate multiset within tol.
bool conjugation_symmetric(std::span<const Complex> eigenvalues, double tol);

struct GrowthSample {
  Complex lambda;
  double resolvent_norm = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct GrowthCheckReport {
  int order = 1;
  double m_bound = 0.0;
  std::vector<GrowthSample> samples;
  double min_m = 0.0;  // smallest M that would pass every sample
  bool all_pass = false;
};

/// Checks ||(A-lambda)^{-1}|| <= M (1+|lambda|)^{2m-2} / |Im lambda|^m
/// at the given sample points.
GrowthCheckReport resolvent_growth_check(const KreinOperator& a, int m,
                                         std::span<const Complex> samples, double M);

/// [.,.]-orthogonal projection onto span(basis), E = B (B^+ B)^{-1} B^+ with
/// B^+ the adjoint in the indefinite product. Requires B^+ B invertible
/// (e.g. a uniformly definite subspace).
Matrix krein_orthogonal_projection(const Matrix& basis, const FundamentalSymmetry& j);
Matrix krein_orthogonal_projection_gram(const Matrix& basis, const Matrix& gram);

}  // namespace kreinspec
