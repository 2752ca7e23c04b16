#include "kreinspec/quadrature.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

#include "kreinspec/linalg.hpp"

namespace kreinspec {

namespace {

GaussLegendre compute_gauss_legendre(int n) {
  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    gl.nodes[i] = -x;
    gl.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    gl.weights[i] = w;
    gl.weights[n - 1 - i] = w;
  }
  return gl;
}

}  // namespace

const GaussLegendre& GaussLegendre::order(int n) {
  static std::mutex mu;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

Panels log_panels(double a, double b, int count) {
  if (!(a > 0.0) || !(b > a) || count < 1)
    throw std::invalid_argument("log_panels: need 0 < a < b and count >= 1");
  Panels p;
  p.reserve(count);
  double la = std::log(a), lb = std::log(b);
  for (int i = 0; i < count; ++i) {
    double u0 = la + (lb - la) * i / count;
    double u1 = la + (lb - la) * (i + 1) / count;
    p.emplace_back(std::exp(u0), std::exp(u1));
  }
  p.front().first = a;
  p.back().second = b;
  return p;
}

Panels linear_panels(double a, double b, int count) {
  if (!(b > a) || count < 1) throw std::invalid_argument("linear_panels: need a < b, count >= 1");
  Panels p;
  p.reserve(count);
  for (int i = 0; i < count; ++i)
    p.emplace_back(a + (b - a) * i / count, a + (b - a) * (i + 1) / count);
  return p;
}

Panels split_panels(const Panels& p) {
  Panels out;
  out.reserve(2 * p.size());
  for (auto [a, b] : p) {
    double m = 0.5 * (a + b);
    out.emplace_back(a, m);
    out.emplace_back(m, b);
  }
  return out;
}

MatrixIntegralEstimate integrate_matrix_norm(
    const std::function<void(double, Matrix&)>& eval, int dim, Panels panels,
    double rtol, int max_refine, int gl_order) {
  const GaussLegendre& gl = GaussLegendre::order(gl_order);
  Matrix acc(dim, dim), f(dim, dim);

  auto run = [&](const Panels& ps) {
    acc.setZero();
    for (auto [a, b] : ps) {
      double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      for (int k = 0; k < gl_order; ++k) {
        eval(mid + half * gl.nodes[k], f);
        acc.noalias() += (half * gl.weights[k]) * f;
      }
    }
    return spectral_norm(acc);
  };

  MatrixIntegralEstimate est;
  est.gl_order = gl_order;
  est.norm = run(panels);
  est.panels = static_cast<int>(panels.size());
  est.residual = std::numeric_limits<double>::infinity();
  for (int level = 0; level < max_refine; ++level) {
    Panels refined = split_panels(panels);
    double v = run(refined);
    est.residual = std::abs(v - est.norm);
    est.norm = v;
    est.panels = static_cast<int>(refined.size());
    est.refinements = level + 1;
    panels = std::move(refined);
    if (est.residual <= rtol * std::max(1.0, est.norm)) break;
  }
  return est;
}

double integrate_scalar(const std::function<double(double)>& f, const Panels& panels,
                        int gl_order) {
  const GaussLegendre& gl = GaussLegendre::order(gl_order);
  double acc = 0.0;
  for (auto [a, b] : panels) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int k = 0; k < gl_order; ++k) acc += half * gl.weights[k] * f(mid + half * gl.nodes[k]);
  }
  return acc;
}

}  // namespace kreinspec
