#include "kreinspec/ensembles.hpp"

#include <cmath>
#include <stdexcept>

#include "kreinspec/linalg.hpp"

namespace kreinspec {

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng Rng::for_trial(uint64_t master_seed, uint64_t trial) {
  return Rng(splitmix64(master_seed ^ splitmix64(trial + 1)));
}

double Rng::uniform() {
  // 53-bit mantissa from one engine word
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int Rng::uniform_int(int lo, int hi) {
  if (hi < lo) throw std::invalid_argument("Rng::uniform_int: empty range");
  uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(engine_() % span);
}

double Rng::normal() {
  double u1 = 0.0;
  do { u1 = uniform(); } while (u1 <= 0.0);
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Complex Rng::cnormal() {
  double u1 = 0.0;
  do { u1 = uniform(); } while (u1 <= 0.0);
  double u2 = uniform();
  double r = std::sqrt(-std::log(u1));  // E|z|^2 = 1
  return Complex(r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2));
}

Matrix random_complex_gaussian(Rng& rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.cnormal();
  return m;
}

Matrix random_hermitian(Rng& rng, int n, double spectral_radius) {
  Matrix z = random_complex_gaussian(rng, n, n);
  Matrix h = 0.5 * (z + z.adjoint());
  double rho = spectral_norm(h);
  if (rho > 0.0) h *= spectral_radius / rho;
  return h;
}

Matrix random_hpd(Rng& rng, int n, double lo, double hi) {
  Matrix u = random_unitary(rng, n);
  RealVector vals(n);
  for (int i = 0; i < n; ++i) vals(i) = rng.uniform(lo, hi);
  return u * vals.cast<Complex>().asDiagonal() * u.adjoint();
}

Matrix random_unitary(Rng& rng, int n) {
  Matrix z = random_complex_gaussian(rng, n, n);
  Eigen::HouseholderQR<Matrix> qr(z);
  return qr.householderQ() * Matrix::Identity(n, n);
}

FundamentalSymmetry random_signature(Rng& rng, int n) {
  IntVector s(n);
  for (int i = 0; i < n; ++i) s(i) = rng.sign();
  return FundamentalSymmetry(s);
}

BlockOperator random_block_operator(Rng& rng, int max_block_dim) {
  int np = rng.uniform_int(1, max_block_dim);
  int nm = rng.uniform_int(1, max_block_dim);
  Matrix sp = random_hermitian(rng, np, rng.uniform(0.5, 10.0));
  Matrix sm = random_hermitian(rng, nm, rng.uniform(0.5, 10.0));
  Matrix m = random_complex_gaussian(rng, np, nm);
  double nu_target = rng.uniform(0.1, 5.0);
  double nu = spectral_norm(m);
  if (nu > 0.0) m *= nu_target / nu;
  return assemble(std::move(sp), std::move(sm), std::move(m));
}

NonNegativePair random_nonnegative_pair(Rng& rng, int max_dim) {
  int n = rng.uniform_int(2, max_dim);
  FundamentalSymmetry j = random_signature(rng, n);
  Matrix h = random_hpd(rng, n, 0.1, 10.0);
  Matrix a0 = j.diagonal().asDiagonal() * h;
  Matrix w = random_hermitian(rng, n, rng.uniform(0.1, 3.0));
  Matrix v = j.diagonal().asDiagonal() * w;
  return NonNegativePair::checked(KreinOperator{std::move(a0), j}, std::move(v));
}

PositiveSubspaceInstance random_uniformly_positive_subspace(Rng& rng, int max_dim) {
  int n = rng.uniform_int(2, max_dim);
  // Hermitian invertible G with mixed signature, at least one positive direction
  RealVector vals(n);
  int n_plus = 0;
  for (int i = 0; i < n; ++i) {
    double mag = rng.uniform(0.5, 5.0);
    int s = rng.sign();
    if (i == n - 1 && n_plus == 0) s = 1;
    if (s > 0) ++n_plus;
    vals(i) = s * mag;
  }
  Matrix u = random_unitary(rng, n);
  // order eigenvalues so positive ones come first
  std::vector<int> order(n);
  int head = 0;
  for (int i = 0; i < n; ++i) if (vals(i) > 0.0) order[head++] = i;
  for (int i = 0; i < n; ++i) if (vals(i) < 0.0) order[head++] = i;
  RealVector sorted(n);
  Matrix usorted(n, n);
  for (int i = 0; i < n; ++i) {
    sorted(i) = vals(order[i]);
    usorted.col(i) = u.col(order[i]);
  }
  Matrix g = usorted * sorted.cast<Complex>().asDiagonal() * usorted.adjoint();
  g = 0.5 * (g + g.adjoint()).eval();

  int k = rng.uniform_int(1, n_plus);
  // graph of a small contraction over the positive directions stays
  // uniformly positive: B*GB = D+ + K* D- K
  Matrix coeff = Matrix::Zero(n, k);
  coeff.topLeftCorner(k, k).setIdentity();
  int n_minus = n - n_plus;
  if (n_minus > 0) {
    Matrix kmap = random_complex_gaussian(rng, n_minus, k);
    double dplus_min = sorted.head(n_plus).minCoeff();
    double dminus_max = sorted.tail(n_minus).cwiseAbs().maxCoeff();
    double limit = 0.5 * std::sqrt(dplus_min / dminus_max);
    double norm = spectral_norm(kmap);
    if (norm > 0.0) kmap *= rng.uniform(0.1, 1.0) * limit / norm;
    coeff.bottomLeftCorner(n_minus, k) = kmap;
  }
  Matrix basis = orthonormal_columns(usorted * coeff);
  return PositiveSubspaceInstance{std::move(g), std::move(basis)};
}

}  // namespace kreinspec
