#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kreinspec/block.hpp"
#include "kreinspec/perturbation.hpp"
#include "kreinspec/sturm_liouville.hpp"

namespace kreinspec {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Block instance: header line "n_plus n_minus", then the row-major entries
/// of S+, S- and M as whitespace-separated "re,im" pairs.
BlockOperator read_block_operator(std::istream& in, double tol_sym = 1e-10);
BlockOperator read_block_operator_file(const std::string& path, double tol_sym = 1e-10);
void write_block_operator(std::ostream& out, const BlockOperator& b);

/// Perturbation pair: header line "n", a line of n signature entries
/// (+1/-1), then the row-major entries of A0 and V as "re,im" pairs.
NonNegativePair read_pair(std::istream& in, double tol_sym = 1e-10);
NonNegativePair read_pair_file(const std::string& path, double tol_sym = 1e-10);
void write_pair(std::ostream& out, const NonNegativePair& pair);

/// Problem definition, key-value lines:
///   L 40
///   n 2000
///   potential constant:-1
/// A sampled potential uses "potential samples" followed by n values.
SturmLiouvilleProblem read_problem(std::istream& in);
SturmLiouvilleProblem read_problem_file(const std::string& path);

/// Spectrum CSV with columns re_lambda,im_lambda,type,j_norm.
std::string spectrum_csv(const std::vector<SpectralPoint>& points);

}  // namespace kreinspec
