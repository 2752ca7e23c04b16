// Acceptance suite: runs every verification criterion at its stated
// tolerance and prints one pass/fail line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "kreinspec/block.hpp"
#include "kreinspec/ensembles.hpp"
#include "kreinspec/io.hpp"
#include "kreinspec/linalg.hpp"
#include "kreinspec/perturbation.hpp"
#include "kreinspec/report.hpp"
#include "kreinspec/sturm_liouville.hpp"

using namespace kreinspec;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double bump(double x, double c, double w) {
  double s = (x - c) / w;
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

Outcome sharp_family() {
  Outcome out;
  out.pass = true;
  double worst_eig = 0.0, worst_boundary = 0.0;
  for (double z : {0.25, 0.5, 1.0, 1.5, 2.0, 3.0}) {
    BlockOperator b = sharp_example(Complex(z, 0.0));
    SpectrumClassification cls = classify_spectrum(b.krein());
    for (const SpectralPoint& p : cls.points) {
      Complex expect = z <= 1.0 ? Complex(std::sqrt(1.0 - z * z), 0.0)
                                : Complex(0.0, std::sqrt(z * z - 1.0));
      double err = std::min(std::abs(p.lambda - expect), std::abs(p.lambda + expect));
      worst_eig = std::max(worst_eig, err);
      if (err > 1e-12) out.pass = false;
      if (z > 1.0) {
        double b1 = std::abs(std::abs(p.lambda - Complex(1, 0)) - z);
        double b2 = std::abs(std::abs(p.lambda + Complex(1, 0)) - z);
        worst_boundary = std::max({worst_boundary, b1, b2});
        if (b1 > 1e-10 || b2 > 1e-10) out.pass = false;
      }
    }
  }
  std::ostringstream os;
  os << "max eigenvalue error " << worst_eig << ", max boundary offset " << worst_boundary;
  out.detail = os.str();
  return out;
}

Outcome block_ensemble() {
  EnsembleConfig cfg;
  cfg.suite = "block";
  cfg.trials = 200;
  cfg.seed = 20240917;
  Json rep = run_ensemble(cfg);
  int violations = violation_count(rep);
  double worst_far = 0.0;
  for (const auto& t : rep["results"]["trials"])
    worst_far = std::max(worst_far, t["c_far"].get<double>());
  Outcome out;
  out.pass = violations == 0 && worst_far <= 2.0 + 1e-6;
  std::ostringstream os;
  os << "200 trials, " << violations << " violations, worst far-field C " << worst_far;
  out.detail = os.str();
  return out;
}

Outcome perturb_ensemble() {
  EnsembleConfig cfg;
  cfg.suite = "perturb";
  cfg.trials = 200;
  cfg.seed = 424242;
  Json rep = run_ensemble(cfg);
  int violations = violation_count(rep);
  Outcome out;
  out.pass = violations == 0;
  out.detail = "200 trials, " + std::to_string(violations) + " violations";
  return out;
}

Outcome tau_quadrature_gap() {
  Outcome out;
  out.pass = true;
  double worst_rel = 0.0;
  for (uint64_t t = 0; t < 20; ++t) {
    Rng rng = Rng::for_trial(777, t);
    NonNegativePair pair = random_nonnegative_pair(rng, 20);
    TauEstimate tau = tau_quadrature(pair.a0, 1e8);
    double direct = spectral_projections(pair.a0).j_tilde_norm;
    double rel = std::abs(tau.value - direct) / direct;
    worst_rel = std::max(worst_rel, rel);
    if (rel > 0.005) out.pass = false;
  }
  std::ostringstream os;
  os << "20 operators, worst relative gap " << worst_rel << " (limit 0.005)";
  out.detail = os.str();
  return out;
}

Outcome projection_inverse_identity() {
  Outcome out;
  out.pass = true;
  double worst = 0.0;
  for (uint64_t t = 0; t < 100; ++t) {
    Rng rng = Rng::for_trial(31337, t);
    PositiveSubspaceInstance inst = random_uniformly_positive_subspace(rng, 20);
    const Matrix& q = inst.basis;
    Matrix cp = q.adjoint() * inst.g * q;
    Matrix e = krein_orthogonal_projection_gram(q, inst.g);
    Matrix ce = q.adjoint() * (e * inst.g.partialPivLu().solve(q));
    double err = spectral_norm(Matrix(cp.inverse() - ce));
    worst = std::max(worst, err);
    if (err > 1e-10) out.pass = false;
  }
  std::ostringstream os;
  os << "100 instances, worst inverse error " << worst << " (limit 1e-10)";
  out.detail = os.str();
  return out;
}

Outcome sl_enclosure_corpus() {
  Outcome out;
  out.pass = true;
  std::ostringstream os;
  const Potential corpus[3] = {Potential::constant(-1.0), Potential::step(-1.0, 1.0, -5.0),
                               Potential::gaussian_well(0.0, 1.0, -3.0)};
  for (const Potential& q : corpus) {
    SturmLiouvilleProblem p(40.0, 2000, q);
    SLRefinementReport rep = refinement_check(p);
    bool clean = rep.base.clean() && rep.length_doubled.clean() && rep.grid_refined.clean();
    if (!clean || !rep.deltas_shrink) out.pass = false;
    os << q.describe() << ": nonreal " << rep.base.nonreal_count << ", violations "
       << rep.base.violations.size() + rep.length_doubled.violations.size() +
              rep.grid_refined.violations.size()
       << ", delta " << rep.base.containment_delta << "->"
       << rep.length_doubled.containment_delta << "/" << rep.grid_refined.containment_delta
       << "; ";
  }
  out.detail = os.str();
  return out;
}

Outcome krein_resolvent_formula() {
  Outcome out;
  out.pass = true;
  const Complex lambdas[4] = {{0, 1}, {0, 2}, {-1, 1}, {3, -2}};
  const double shapes[3][2] = {{12.5, 2.0}, {11.5, 2.5}, {14.0, 1.5}};
  SturmLiouvilleProblem coarse(40.0, 2000, Potential::constant(0.0));
  SturmLiouvilleProblem fine(40.0, 4000, Potential::constant(0.0));
  DiscreteIndefiniteOperator op_c = discretize(coarse);
  DiscreteIndefiniteOperator op_f = discretize(fine);
  double worst_res = 0.0, worst_ratio = 1e300;
  for (Complex lambda : lambdas) {
    // support on the half-line with the faster kernel decay
    double side = lambda.real() > 0.0 ? -1.0 : 1.0;
    for (auto [c, w] : shapes) {
      Vector f_c(coarse.grid_size), f_f(fine.grid_size);
      for (int i = 0; i < coarse.grid_size; ++i) f_c(i) = bump(coarse.node(i), side * c, w);
      for (int i = 0; i < fine.grid_size; ++i) f_f(i) = bump(fine.node(i), side * c, w);
      Vector u_c = krein_resolvent_a0(lambda, f_c, coarse);
      Vector u_f = krein_resolvent_a0(lambda, f_f, fine);
      double res_c = (op_c.apply_a_shifted(u_c, lambda) - f_c).norm() / f_c.norm();
      double res_f = (op_f.apply_a_shifted(u_f, lambda) - f_f).norm() / f_f.norm();
      worst_res = std::max(worst_res, res_c);
      worst_ratio = std::min(worst_ratio, res_c / res_f);
      if (res_c > 1e-3 || res_c / res_f < 3.0) out.pass = false;
    }
  }
  std::ostringstream os;
  os << "worst residual " << worst_res << " (limit 1e-3), worst refinement ratio "
     << worst_ratio << " (limit 3)";
  out.detail = os.str();
  return out;
}

Outcome resolvent_norm_bound() {
  SturmLiouvilleProblem p(40.0, 2000, Potential::constant(0.0));
  std::vector<Complex> grid;
  const double angles[4] = {M_PI / 6, M_PI / 3, 2 * M_PI / 3, 5 * M_PI / 6};
  for (int k = 0; k < 10; ++k) {
    double rho = 0.1 * std::pow(1000.0, k / 9.0);  // |lambda| in [0.1, 100]
    for (double th : angles) grid.emplace_back(rho * std::cos(th), rho * std::sin(th));
  }
  ResolventBoundReport rep = resolvent_norm_bound_check(grid, p);
  Outcome out;
  out.pass = rep.worst_ratio <= 1.05;
  std::ostringstream os;
  os << "40 samples, worst ratio " << rep.worst_ratio << " (limit 1.05)";
  out.detail = os.str();
  return out;
}

Outcome tau0_bound() {
  Outcome out;
  out.pass = true;
  std::ostringstream os;
  const double configs[3][2] = {{20.0, 200.0}, {40.0, 1000.0}, {40.0, 2000.0}};
  for (auto [L, n] : configs) {
    SturmLiouvilleProblem p(L, static_cast<int>(n), Potential::constant(0.0));
    SLTauReport rep = tau0_estimate_sl(p, 1e6);
    bool flagged = rep.quadrature.value > 9.0 * 1.05;
    if (rep.quadrature.value > 9.0 * 1.5) out.pass = false;  // hard limit
    os << "(" << L << "," << n << "): tau0 " << rep.quadrature.value << " |J~| "
       << rep.j_tilde_norm << (flagged ? " FLAGGED>9*1.05" : "") << "; ";
  }
  out.detail = os.str();
  return out;
}

Outcome determinism() {
  EnsembleConfig cfg;
  cfg.suite = "block";
  cfg.trials = 8;
  cfg.seed = 5150;
  cfg.threads = 2;
  std::string a = run_ensemble(cfg).dump();
  std::string b = run_ensemble(cfg).dump();
  cfg.suite = "perturb";
  cfg.trials = 12;
  std::string c = run_ensemble(cfg).dump();
  std::string d = run_ensemble(cfg).dump();
  Outcome out;
  out.pass = (a == b) && (c == d);
  out.detail = out.pass ? "repeated seeded ensembles byte-identical"
                        : "reports differ between repeated runs";
  return out;
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"sharp-2x2-family", sharp_family},
      {"block-enclosure-ensemble", block_ensemble},
      {"perturbation-ensemble", perturb_ensemble},
      {"resolvent-integral-quadrature", tau_quadrature_gap},
      {"projection-inverse-identity", projection_inverse_identity},
      {"sl-enclosure-corpus", sl_enclosure_corpus},
      {"krein-resolvent-formula", krein_resolvent_formula},
      {"resolvent-norm-bound", resolvent_norm_bound},
      {"tau0-discrete-bound", tau0_bound},
      {"seeded-determinism", determinism},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    auto t0 = clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(clock::now() - t0).count();
    std::printf("[%s] %-32s %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", c.name,
                out.detail.c_str(), secs);
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  return failures;
}
