#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "kreinspec/types.hpp"

namespace kreinspec {

/// Gauss-Legendre nodes and weights on [-1, 1], computed once per order by
/// Newton iteration on the Legendre polynomial.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  static const GaussLegendre& order(int n);
};

using Panels = std::vector<std::pair<double, double>>;

/// Panels spaced geometrically over [a, b], a > 0.
Panels log_panels(double a, double b, int count);
/// Uniform panels over [a, b].
Panels linear_panels(double a, double b, int count);
Panels split_panels(const Panels& p);

/// One norm estimate of a matrix-valued integral, with the refinement
/// history that produced it.
struct MatrixIntegralEstimate {
  double norm = 0.0;
  int panels = 0;
  int gl_order = 0;
  double residual = 0.0;  // |norm - norm at previous refinement level|
  int refinements = 0;
};

/// Integrates the matrix-valued integrand over the panels with composite
/// Gauss-Legendre rules, doubling the panel count until the spectral norm of
/// the accumulated integral changes by less than rtol (relative), and returns
/// the norm of the final integral. eval(t, out) must overwrite out.
MatrixIntegralEstimate integrate_matrix_norm(
    const std::function<void(double, Matrix&)>& eval, int dim, Panels panels,
    double rtol, int max_refine = 3, int gl_order = 16);

double integrate_scalar(const std::function<double(double)>& f, const Panels& panels,
                        int gl_order = 16);

}  // namespace kreinspec
