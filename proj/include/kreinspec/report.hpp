#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "kreinspec/block.hpp"
#include "kreinspec/perturbation.hpp"
#include "kreinspec/sturm_liouville.hpp"

namespace kreinspec {

using Json = nlohmann::json;

/// Reports are timestamp-free and fully determined by their inputs, so a
/// repeated run with the same seed is byte-identical.

struct EnsembleConfig {
  std::string suite;  // block | perturb | tau-quadrature | projection-identity
  int trials = 0;
  uint64_t seed = 0;
  int threads = 0;  // 0 picks the hardware count
};

Json run_ensemble(const EnsembleConfig& cfg);

/// Named tolerance overrides for the commands that accept them.
/// Supported names: tol_sym (input validation), tol_real and tol_type
/// (spectrum classification). Unknown names are rejected.
struct ToleranceOverrides {
  double tol_sym = 1e-10;
  double tol_real = 1e-9;
  double tol_type = 1e-10;

  static ToleranceOverrides parse(const std::vector<std::string>& name_value_pairs);
  ClassifyOptions classify_options() const;
};

Json block_report(const BlockOperator& b, uint64_t seed_echo = 0,
                  const ToleranceOverrides& tol = {});
Json sharp_family_report(Complex z);
Json perturb_report(const NonNegativePair& pair, const ToleranceOverrides& tol = {});
Json sl_verify_report(const SturmLiouvilleProblem& p, bool refine);
/// Same reports built from already-computed results (lets callers reuse the
/// eigensolve, e.g. to also emit the spectrum CSV).
Json sl_verify_report_from(const SturmLiouvilleProblem& p, const SLSpectrumReport& rep);
Json sl_verify_report_from(const SturmLiouvilleProblem& p, const SLRefinementReport& rep);
Json sl_tau_report(const SturmLiouvilleProblem& p, double cutoff);
Json tau_matrix_report(const KreinOperator& a0, double cutoff);

/// Total violation count embedded in a report (0 when absent).
int violation_count(const Json& report);

}  // namespace kreinspec
