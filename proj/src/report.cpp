#include "kreinspec/report.hpp"

#include <atomic>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

#include "kreinspec/ensembles.hpp"
#include "kreinspec/linalg.hpp"

namespace kreinspec {

namespace {

Json report_shell(const std::string& module, const std::string& command, Json config,
                  Json tolerances) {
  Json j;
  j["module"] = module;
  j["version"] = kVersion;
  j["command"] = command;
  j["config"] = std::move(config);
  j["tolerances"] = std::move(tolerances);
  return j;
}

Json violation_json(Complex lambda, const std::string& claim, double margin) {
  return Json{{"claim", claim}, {"re", lambda.real()}, {"im", lambda.imag()}, {"margin", margin}};
}

Json default_tolerances() {
  return Json{{"tol_sym", 1e-10},      {"tol_real", 1e-9},     {"tol_type", 1e-10},
              {"inflation_abs", 1e-8}, {"inflation_rel", 1e-10}, {"strip_slack", 1e-6}};
}

Json tolerance_echo(const ToleranceOverrides& tol) {
  Json j = default_tolerances();
  j["tol_sym"] = tol.tol_sym;
  j["tol_real"] = tol.tol_real;
  j["tol_type"] = tol.tol_type;
  return j;
}

std::vector<Json> run_trials(int trials, int threads,
                             const std::function<Json(int)>& one_trial) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, trials));
  std::vector<Json> results(trials);
  if (threads == 1) {
    for (int t = 0; t < trials; ++t) results[t] = one_trial(t);
    return results;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex err_mu;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        int t = next.fetch_add(1);
        if (t >= trials) return;
        try {
          results[t] = one_trial(t);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
  return results;
}

Json block_trial(uint64_t seed, int t) {
  Rng rng = Rng::for_trial(seed, static_cast<uint64_t>(t));
  BlockOperator b = random_block_operator(rng);
  EnclosureReport rep = enclosure(b);
  ResolventOrderOneReport ro = resolvent_order_one(b, /*delta=*/0.1, /*sample_count=*/96);

  Json viol = Json::array();
  for (const auto& v : rep.violations) viol.push_back(violation_json(v.lambda, v.claim, v.margin));
  if (!ro.far_bound_ok)
    viol.push_back(Json{{"claim", "order-one-far-bound"}, {"c_far", ro.c_far}});

  return Json{{"trial", t},        {"n_plus", b.n_plus()}, {"n_minus", b.n_minus()},
              {"nu", b.nu},        {"c_all", ro.c_all},    {"c_far", ro.c_far},
              {"violations", viol}};
}

Json perturb_trial(uint64_t seed, int t) {
  Rng rng = Rng::for_trial(seed, static_cast<uint64_t>(t));
  NonNegativePair pair = random_nonnegative_pair(rng);
  Main1Report rep = verify_main1(pair);
  Json viol = Json::array();
  for (const auto& v : rep.violations) viol.push_back(violation_json(v.lambda, v.claim, v.margin));
  return Json{{"trial", t},
              {"n", pair.a0.dim()},
              {"tau0", rep.bounds.tau0},
              {"r", rep.bounds.r},
              {"d", rep.bounds.d},
              {"trivial_branch", rep.bounds.trivial_branch},
              {"violations", viol}};
}

Json tau_gap_trial(uint64_t seed, int t) {
  Rng rng = Rng::for_trial(seed, static_cast<uint64_t>(t));
  NonNegativePair pair = random_nonnegative_pair(rng, /*max_dim=*/20);
  TauEstimate tau = tau_quadrature(pair.a0, 1e8);
  SpectralProjections proj = spectral_projections(pair.a0);
  double gap = std::abs(tau.value - proj.j_tilde_norm);
  Json viol = Json::array();
  if (gap > 0.005 * proj.j_tilde_norm)
    viol.push_back(Json{{"claim", "quadrature-projection-gap"}, {"gap", gap}});
  return Json{{"trial", t},
              {"n", pair.a0.dim()},
              {"tau_value", tau.value},
              {"j_tilde_norm", proj.j_tilde_norm},
              {"gap", gap},
              {"residual", tau.residual},
              {"violations", viol}};
}

Json projection_trial(uint64_t seed, int t) {
  Rng rng = Rng::for_trial(seed, static_cast<uint64_t>(t));
  PositiveSubspaceInstance inst = random_uniformly_positive_subspace(rng);
  const Matrix& q = inst.basis;
  const int k = static_cast<int>(q.cols());

  Matrix cp = q.adjoint() * inst.g * q;  // compression P(G|L) in the basis q
  cp = 0.5 * (cp + cp.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> ecp(cp);
  Json viol = Json::array();
  if (ecp.eigenvalues()(0) <= 0.0)
    viol.push_back(Json{{"claim", "compression-not-positive"}, {"min_eig", ecp.eigenvalues()(0)}});

  Matrix g_inv_q = inst.g.partialPivLu().solve(q);
  Matrix e = krein_orthogonal_projection_gram(q, inst.g);
  Matrix ce = q.adjoint() * (e * g_inv_q);  // E(G^{-1}|L) in the basis q
  Matrix identity_gap = cp * ce - Matrix::Identity(k, k);
  double inverse_error = spectral_norm(Matrix(cp.inverse() - ce));
  if (inverse_error > 1e-10)
    viol.push_back(Json{{"claim", "projection-inverse-identity"}, {"error", inverse_error}});

  return Json{{"trial", t},
              {"n", static_cast<int>(inst.g.rows())},
              {"k", k},
              {"inverse_error", inverse_error},
              {"identity_residual", spectral_norm(identity_gap)},
              {"violations", viol}};
}

}  // namespace

Json run_ensemble(const EnsembleConfig& cfg) {
  std::function<Json(int)> trial;
  std::string module;
  if (cfg.suite == "block") {
    module = "block-enclosure";
    trial = [&cfg](int t) { return block_trial(cfg.seed, t); };
  } else if (cfg.suite == "perturb") {
    module = "perturbation";
    trial = [&cfg](int t) { return perturb_trial(cfg.seed, t); };
  } else if (cfg.suite == "tau-quadrature") {
    module = "perturbation";
    trial = [&cfg](int t) { return tau_gap_trial(cfg.seed, t); };
  } else if (cfg.suite == "projection-identity") {
    module = "krein-core";
    trial = [&cfg](int t) { return projection_trial(cfg.seed, t); };
  } else {
    throw std::invalid_argument("run_ensemble: unknown suite '" + cfg.suite + "'");
  }
  if (cfg.trials <= 0) throw std::invalid_argument("run_ensemble: trials must be positive");

  std::vector<Json> trials = run_trials(cfg.trials, cfg.threads, trial);
  int violations = 0;
  Json arr = Json::array();
  for (Json& t : trials) {
    violations += static_cast<int>(t["violations"].size());
    arr.push_back(std::move(t));
  }
  Json rep = report_shell(module, "ensemble",
                          Json{{"suite", cfg.suite},
                               {"trials", cfg.trials},
                               {"seed", cfg.seed},
                               {"threads", cfg.threads}},
                          default_tolerances());
  rep["results"] = Json{{"trials", std::move(arr)}, {"violation_count", violations}};
  return rep;
}

ToleranceOverrides ToleranceOverrides::parse(const std::vector<std::string>& name_value_pairs) {
  ToleranceOverrides tol;
  for (const std::string& kv : name_value_pairs) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("tolerance override must be name=value, got '" + kv + "'");
    std::string name = kv.substr(0, eq);
    double value = std::stod(kv.substr(eq + 1));
    if (!(value > 0.0)) throw std::invalid_argument("tolerance '" + name + "' must be > 0");
    if (name == "tol_sym") tol.tol_sym = value;
    else if (name == "tol_real") tol.tol_real = value;
    else if (name == "tol_type") tol.tol_type = value;
    else throw std::invalid_argument("unknown tolerance name '" + name + "'");
  }
  return tol;
}

ClassifyOptions ToleranceOverrides::classify_options() const {
  ClassifyOptions opts;
  opts.tol_real = tol_real;
  opts.tol_type = tol_type;
  return opts;
}

Json block_report(const BlockOperator& b, uint64_t seed_echo, const ToleranceOverrides& tol) {
  EnclosureReport rep = enclosure(b, tol.classify_options());
  ResolventOrderOneReport ro = resolvent_order_one(b, 0.1, 96);

  Json eigs = Json::array();
  for (const SpectralPoint& p : rep.classification.points)
    eigs.push_back(Json{{"re", p.lambda.real()},
                        {"im", p.lambda.imag()},
                        {"type", to_string(p.type)},
                        {"j_norm", p.j_norm}});
  Json viol = Json::array();
  for (const auto& v : rep.violations) viol.push_back(violation_json(v.lambda, v.claim, v.margin));
  if (!ro.far_bound_ok) viol.push_back(Json{{"claim", "order-one-far-bound"}, {"c_far", ro.c_far}});

  Json out = report_shell("block-enclosure", "block",
                          Json{{"n_plus", b.n_plus()}, {"n_minus", b.n_minus()}, {"seed", seed_echo}},
                          tolerance_echo(tol));
  out["results"] = Json{
      {"nu", b.nu},
      {"sigma_plus_min", rep.sigma_plus.minCoeff()},
      {"sigma_plus_max", rep.sigma_plus.maxCoeff()},
      {"sigma_minus_min", rep.sigma_minus.minCoeff()},
      {"sigma_minus_max", rep.sigma_minus.maxCoeff()},
      {"eigenvalues", std::move(eigs)},
      {"resolvent_c_all", ro.c_all},
      {"resolvent_c_far", ro.c_far},
      {"violations", std::move(viol)}};
  out["results"]["violation_count"] = out["results"]["violations"].size();
  return out;
}

Json sharp_family_report(Complex z) {
  BlockOperator b = sharp_example(z);
  Json out = block_report(b);
  out["command"] = "block --example sharp";
  out["config"]["z_re"] = z.real();
  out["config"]["z_im"] = z.imag();
  // distance of each eigenvalue from the two K_{|z|} disc boundaries
  double az = std::abs(z);
  Json boundary = Json::array();
  for (const auto& e : out["results"]["eigenvalues"]) {
    Complex lambda(e["re"].get<double>(), e["im"].get<double>());
    double dp = std::abs(lambda - Complex(1.0, 0.0)) - az;
    double dm = std::abs(lambda + Complex(1.0, 0.0)) - az;
    boundary.push_back(Json{{"re", lambda.real()},
                            {"im", lambda.imag()},
                            {"dist_plus", dp},
                            {"dist_minus", dm},
                            {"on_boundary", std::abs(dp) <= 1e-10 && std::abs(dm) <= 1e-10}});
  }
  out["results"]["boundary_offsets"] = std::move(boundary);
  return out;
}

Json perturb_report(const NonNegativePair& pair, const ToleranceOverrides& tol) {
  Main1Report rep = verify_main1(pair, tol.classify_options());
  Json eigs = Json::array();
  for (const SpectralPoint& p : rep.classification.points)
    eigs.push_back(Json{{"re", p.lambda.real()},
                        {"im", p.lambda.imag()},
                        {"type", to_string(p.type)},
                        {"j_norm", p.j_norm}});
  Json viol = Json::array();
  for (const auto& v : rep.violations) viol.push_back(violation_json(v.lambda, v.claim, v.margin));
  Json out = report_shell("perturbation", "perturb", Json{{"n", pair.a0.dim()}},
                          tolerance_echo(tol));
  out["results"] = Json{{"tau0", rep.bounds.tau0},
                        {"r", rep.bounds.r},
                        {"d", rep.bounds.d},
                        {"v_norm", rep.bounds.v_norm},
                        {"min_sigma_jv", rep.bounds.min_sigma_jv},
                        {"trivial_branch", rep.bounds.trivial_branch},
                        {"eigenvalues", std::move(eigs)},
                        {"violations", std::move(viol)}};
  out["results"]["violation_count"] = out["results"]["violations"].size();
  return out;
}

namespace {

Json sl_report_body(const SLSpectrumReport& rep) {
  Json viol = Json::array();
  for (const auto& v : rep.violations) viol.push_back(violation_json(v.lambda, v.claim, v.margin));
  Json enc;
  if (rep.enclosure.trivial_regime) {
    enc = Json{{"trivial_regime", true}};
  } else {
    enc = Json{{"trivial_regime", false},
               {"r", rep.enclosure.r},
               {"d", rep.enclosure.d},
               {"strip", rep.enclosure.strip}};
  }
  return Json{{"enclosure", std::move(enc)},
              {"nonreal_count", rep.nonreal_count},
              {"containment_delta", rep.containment_delta},
              {"r_empirical", rep.r_empirical},
              {"strip_empirical", rep.strip_empirical},
              {"violations", std::move(viol)},
              {"violation_count", rep.violations.size()}};
}

}  // namespace

namespace {

Json sl_report_shell(const SturmLiouvilleProblem& p) {
  Json config{{"L", p.half_length}, {"n", p.grid_size}, {"potential", p.potential.describe()}};
  Json out = report_shell("sturm-liouville", "sl-verify", std::move(config), default_tolerances());
  if (p.potential.analytic()) {
    TailLimits tails = m_endpoints(p);
    out["config"]["m_plus"] = tails.m_plus;
    out["config"]["m_minus"] = tails.m_minus;
    out["config"]["regime"] = tails.regime;
  }
  return out;
}

}  // namespace

Json sl_verify_report_from(const SturmLiouvilleProblem& p, const SLSpectrumReport& rep) {
  Json out = sl_report_shell(p);
  out["results"] = sl_report_body(rep);
  return out;
}

Json sl_verify_report_from(const SturmLiouvilleProblem& p, const SLRefinementReport& ref) {
  Json out = sl_report_shell(p);
  out["results"] = sl_report_body(ref.base);
  out["results"]["refinement"] =
      Json{{"containment_delta_base", ref.base.containment_delta},
           {"containment_delta_length_doubled", ref.length_doubled.containment_delta},
           {"containment_delta_grid_refined", ref.grid_refined.containment_delta},
           {"max_eigenvalue_move", ref.max_eigenvalue_move},
           {"deltas_shrink", ref.deltas_shrink}};
  int extra = static_cast<int>(ref.length_doubled.violations.size() +
                               ref.grid_refined.violations.size());
  out["results"]["violation_count"] = out["results"]["violation_count"].get<int>() + extra;
  return out;
}

Json sl_verify_report(const SturmLiouvilleProblem& p, bool refine) {
  if (refine) return sl_verify_report_from(p, refinement_check(p));
  return sl_verify_report_from(p, solve_and_verify(p));
}

Json sl_tau_report(const SturmLiouvilleProblem& p, double cutoff) {
  SLTauReport rep = tau0_estimate_sl(p, cutoff);
  Json out = report_shell(
      "sturm-liouville", "tau",
      Json{{"L", p.half_length}, {"n", p.grid_size}, {"cutoff", cutoff}}, default_tolerances());
  out["results"] = Json{{"tau_value", rep.quadrature.value},
                        {"j_tilde_norm", rep.j_tilde_norm},
                        {"gap", rep.gap},
                        {"panels", rep.quadrature.panels},
                        {"scheme", rep.quadrature.scheme},
                        {"residual", rep.quadrature.residual},
                        {"within_continuum_bound", rep.quadrature.value <= 9.0 * 1.05},
                        {"within_hard_limit", rep.quadrature.value <= 9.0 * 1.5}};
  out["results"]["violation_count"] = rep.quadrature.value <= 9.0 * 1.5 ? 0 : 1;
  return out;
}

Json tau_matrix_report(const KreinOperator& a0, double cutoff) {
  TauEstimate tau = tau_quadrature(a0, cutoff);
  SpectralProjections proj = spectral_projections(a0);
  Json out = report_shell("perturbation", "tau",
                          Json{{"n", a0.dim()}, {"cutoff", cutoff}}, default_tolerances());
  out["results"] = Json{{"tau_value", tau.value},
                        {"j_tilde_norm", proj.j_tilde_norm},
                        {"gap", std::abs(tau.value - proj.j_tilde_norm)},
                        {"panels", tau.panels},
                        {"scheme", tau.scheme},
                        {"residual", tau.residual},
                        {"violation_count", 0}};
  return out;
}

int violation_count(const Json& report) {
  if (report.contains("results") && report["results"].contains("violation_count"))
    return report["results"]["violation_count"].get<int>();
  return 0;
}

}  // namespace kreinspec
