#pragma once

#include <cstdint>
#include <random>

#include "kreinspec/block.hpp"
#include "kreinspec/perturbation.hpp"

namespace kreinspec {

/// Deterministic random source. Gaussians come from an explicit Box-Muller
/// on mt19937_64 words, so streams are reproducible across standard
/// libraries; a trial index derives an independent stream from the master
/// seed via splitmix64.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  static Rng for_trial(uint64_t master_seed, uint64_t trial);

  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  int uniform_int(int lo, int hi);       // inclusive bounds
  double normal();
  Complex cnormal();
  int sign() { return uniform() < 0.5 ? -1 : 1; }

 private:
  std::mt19937_64 engine_;
};

Matrix random_complex_gaussian(Rng& rng, int rows, int cols);

/// GUE-style Hermitian matrix rescaled to the given spectral radius.
Matrix random_hermitian(Rng& rng, int n, double spectral_radius);

/// Hermitian positive definite matrix with eigenvalues in [lo, hi].
Matrix random_hpd(Rng& rng, int n, double lo, double hi);

/// Random unitary from QR of a complex Gaussian matrix.
Matrix random_unitary(Rng& rng, int n);

FundamentalSymmetry random_signature(Rng& rng, int n);

/// Hermitian blocks with spectral radius <= 10 (dims 1..20 per block),
/// coupling scaled so ||M|| lies in [0.1, 5].
BlockOperator random_block_operator(Rng& rng, int max_block_dim = 20);

/// A0 = J H with H Hermitian positive definite (eigenvalues in [0.1, 10]),
/// V = J W with W Hermitian and ||W|| in [0.1, 3]; dims 2..max_dim.
NonNegativePair random_nonnegative_pair(Rng& rng, int max_dim = 30);

struct PositiveSubspaceInstance {
  Matrix g;      // Hermitian invertible Gram matrix
  Matrix basis;  // orthonormal basis of a uniformly positive subspace
};

PositiveSubspaceInstance random_uniformly_positive_subspace(Rng& rng, int max_dim = 20);

}  // namespace kreinspec
