// Command-line front end: ingest problem and matrix definitions, run the
// verification suites, and emit JSON/CSV reports.
//
// Exit codes: 0 clean, 1 theorem violations found, 2 parse error,
// 3 numerical failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kreinspec/ensembles.hpp"
#include "kreinspec/io.hpp"
#include "kreinspec/report.hpp"

namespace {

using namespace kreinspec;

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitParse = 2;
constexpr int kExitNumerical = 3;

std::string output_path(const std::string& explicit_path, const std::string& fallback_name) {
  if (!explicit_path.empty()) return explicit_path;
  const char* dir = std::getenv("KREINSPEC_OUTPUT_DIR");
  if (dir != nullptr && *dir != '\0') return std::string(dir) + "/" + fallback_name;
  return fallback_name;
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

int finish(const Json& report, const std::string& path) {
  write_text(path, report.dump(2) + "\n");
  if (path != "-") std::cerr << "report written to " << path << "\n";
  return violation_count(report) > 0 ? kExitViolations : kExitOk;
}

SturmLiouvilleProblem problem_from_flags(const std::string& input, const std::string& potential,
                                         double L, int n) {
  if (!input.empty()) return read_problem_file(input);
  return SturmLiouvilleProblem(L, n, Potential::parse(potential));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral enclosures for indefinite (J-selfadjoint) operators"};
  app.require_subcommand(1);

  // block
  auto* block = app.add_subcommand("block", "enclosure report for a 2x2 block operator matrix");
  std::string block_input, block_example, block_out;
  double block_z = 2.0;
  uint64_t block_seed = 0;
  std::vector<std::string> block_tol;
  block->add_option("--input", block_input, "block instance file (header 'n_plus n_minus')");
  block->add_option("--example", block_example, "named example: sharp");
  block->add_option("--z", block_z, "coupling parameter for --example sharp");
  block->add_option("--seed", block_seed, "seed to generate a random instance instead");
  block->add_option("--tol", block_tol, "override: tol_sym=..., tol_real=..., tol_type=...");
  block->add_option("-o,--output", block_out, "output path ('-' for stdout)");

  // perturb
  auto* perturb = app.add_subcommand("perturb", "perturbation bounds for a non-negative operator");
  std::string perturb_input, perturb_out;
  uint64_t perturb_seed = 1;
  int perturb_n = 12;
  bool perturb_random = false;
  std::vector<std::string> perturb_tol;
  perturb->add_option("--input", perturb_input, "pair file (n, signs, A0, V)");
  perturb->add_flag("--random", perturb_random, "generate a random pair");
  perturb->add_option("--n", perturb_n, "dimension for --random");
  perturb->add_option("--seed", perturb_seed, "seed for --random");
  perturb->add_option("--tol", perturb_tol, "override: tol_sym=..., tol_real=..., tol_type=...");
  perturb->add_option("-o,--output", perturb_out, "output path ('-' for stdout)");

  // sl-solve
  auto* slsolve = app.add_subcommand("sl-solve", "spectrum CSV of the discretized operator");
  std::string sl_input, sl_potential = "constant:-1", sl_out;
  double sl_L = 40.0;
  int sl_n = 2000;
  slsolve->add_option("--input", sl_input, "problem definition file");
  slsolve->add_option("--potential", sl_potential, "constant:c | step:a,b,depth | gaussian_well:c,w,depth");
  slsolve->add_option("--L", sl_L, "truncation half-length");
  slsolve->add_option("--n", sl_n, "grid size (even)");
  slsolve->add_option("-o,--output", sl_out, "output path ('-' for stdout)");

  // sl-verify
  auto* slverify = app.add_subcommand("sl-verify", "enclosure verification for the discretized operator");
  std::string slv_input, slv_potential = "constant:-1", slv_out, slv_csv;
  double slv_L = 40.0;
  int slv_n = 2000;
  bool slv_refine = false;
  slverify->add_option("--input", slv_input, "problem definition file");
  slverify->add_option("--potential", slv_potential, "potential spec");
  slverify->add_option("--L", slv_L, "truncation half-length");
  slverify->add_option("--n", slv_n, "grid size (even)");
  slverify->add_flag("--refine", slv_refine, "run the L-doubling and grid-refinement checks");
  slverify->add_option("--csv", slv_csv, "spectrum CSV path (default sl_spectrum.csv)");
  slverify->add_option("-o,--output", slv_out, "output path ('-' for stdout)");

  // tau
  auto* tau = app.add_subcommand("tau", "resolvent-integral estimate of tau0");
  std::string tau_input, tau_potential, tau_out;
  double tau_L = 20.0, tau_cutoff = 1e6;
  int tau_n = 200;
  tau->add_option("--input", tau_input, "pair file; tau0 of its A0");
  tau->add_option("--potential", tau_potential, "use the discretized operator of this problem (q is replaced by 0)");
  tau->add_option("--L", tau_L, "truncation half-length");
  tau->add_option("--n", tau_n, "grid size (even)");
  tau->add_option("--cutoff", tau_cutoff, "integration cutoff");
  tau->add_option("-o,--output", tau_out, "output path ('-' for stdout)");

  // ensemble
  auto* ens = app.add_subcommand("ensemble", "randomized verification suites");
  std::string ens_command = "perturb", ens_out;
  int ens_trials = 200, ens_threads = 0;
  uint64_t ens_seed = 7;
  ens->add_option("--command", ens_command, "block | perturb | tau-quadrature | projection-identity");
  ens->add_option("--trials", ens_trials, "number of trials");
  ens->add_option("--seed", ens_seed, "master seed (per-trial seeds derive from it)");
  ens->add_option("--threads", ens_threads, "worker threads (0 = hardware)");
  ens->add_option("-o,--output", ens_out, "output path ('-' for stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (block->parsed()) {
      ToleranceOverrides tol = ToleranceOverrides::parse(block_tol);
      Json rep;
      if (!block_input.empty()) {
        rep = block_report(read_block_operator_file(block_input, tol.tol_sym), 0, tol);
      } else if (block_example == "sharp") {
        rep = sharp_family_report(Complex(block_z, 0.0));
      } else if (block_seed != 0) {
        Rng rng = Rng::for_trial(block_seed, 0);
        rep = block_report(random_block_operator(rng), block_seed, tol);
      } else {
        std::cerr << "block: need --input, --example sharp, or --seed\n";
        return kExitParse;
      }
      return finish(rep, output_path(block_out, "block_report.json"));
    }

    if (perturb->parsed()) {
      ToleranceOverrides tol = ToleranceOverrides::parse(perturb_tol);
      NonNegativePair pair = [&]() {
        if (!perturb_input.empty()) return read_pair_file(perturb_input, tol.tol_sym);
        if (!perturb_random) throw ParseError("perturb: need --input or --random");
        Rng rng = Rng::for_trial(perturb_seed, 0);
        return random_nonnegative_pair(rng, perturb_n);
      }();
      return finish(perturb_report(pair, tol), output_path(perturb_out, "perturb_report.json"));
    }

    if (slsolve->parsed()) {
      SturmLiouvilleProblem p = problem_from_flags(sl_input, sl_potential, sl_L, sl_n);
      SLSpectrumReport rep = solve_and_verify(p);
      write_text(output_path(sl_out, "spectrum.csv"), spectrum_csv(rep.points));
      return rep.clean() ? kExitOk : kExitViolations;
    }

    if (slverify->parsed()) {
      SturmLiouvilleProblem p = problem_from_flags(slv_input, slv_potential, slv_L, slv_n);
      Json rep;
      if (slv_refine) {
        SLRefinementReport ref = refinement_check(p);
        write_text(output_path(slv_csv, "sl_spectrum.csv"), spectrum_csv(ref.base.points));
        rep = sl_verify_report_from(p, ref);
      } else {
        SLSpectrumReport solved = solve_and_verify(p);
        write_text(output_path(slv_csv, "sl_spectrum.csv"), spectrum_csv(solved.points));
        rep = sl_verify_report_from(p, solved);
      }
      return finish(rep, output_path(slv_out, "sl_verify.json"));
    }

    if (tau->parsed()) {
      Json rep;
      if (!tau_input.empty()) {
        rep = tau_matrix_report(read_pair_file(tau_input).a0, tau_cutoff);
      } else {
        SturmLiouvilleProblem p(tau_L, tau_n, tau_potential.empty()
                                                  ? Potential::constant(0.0)
                                                  : Potential::parse(tau_potential));
        rep = sl_tau_report(p, tau_cutoff);
      }
      return finish(rep, output_path(tau_out, "tau_report.json"));
    }

    if (ens->parsed()) {
      EnsembleConfig cfg;
      cfg.suite = ens_command;
      cfg.trials = ens_trials;
      cfg.seed = ens_seed;
      cfg.threads = ens_threads;
      return finish(run_ensemble(cfg), output_path(ens_out, "ensemble_" + ens_command + ".json"));
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitParse;
}
