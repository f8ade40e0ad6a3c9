#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "mdm/parallel.hpp"

namespace {

using namespace mdm::cli;

void add_source(CLI::App* app, MeasureSource& s) {
  app->add_option("--measure", s.file, "measure JSON file");
  app->add_option("--base", s.base, "digit base p >= 2");
  app->add_option("--missing", s.missing, "digits removed from {0..p-1}")->delimiter(',');
  app->add_option("--digits", s.digits, "explicit digit set")->delimiter(',');
  app->add_option("--weights", s.weights, "weights for --digits")->delimiter(',');
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("-o,--output", c.output, "write to file instead of stdout");
  app->add_option("--seed", c.seed, "random seed")->capture_default_str();
}

void add_psi(CLI::App* app, PsiArgs& p) {
  app->add_option("--psi", p.kind, "power or loglog")->capture_default_str();
  app->add_option("--psi-c", p.c, "power law constant c in c*q^-nu")->capture_default_str();
  app->add_option("--psi-nu", p.nu, "power law exponent nu")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier decay certificates and Diophantine statistics for missing-digit measures"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mdm::kToolVersion));

  unsigned threads = 0;
  std::uint64_t budget = 0;
  app.add_option("--threads", threads, "worker thread cap (0: hardware)");
  app.add_option("--budget", budget, "evaluation budget (overrides MDM_BUDGET)");

  CertifyArgs certify;
  auto* c_cert = app.add_subcommand("certify", "spectral and thickness certificate as JSON");
  add_source(c_cert, certify.source);
  add_common(c_cert, certify.common);
  c_cert->add_option("--k-max", certify.k_max, "deepest discretization level (0: default)");
  c_cert->add_option("--samples", certify.samples, "samples per cell (0: default)");
  c_cert->add_option("--route", certify.route, "both, analytic or numeric")->capture_default_str();

  auto* c_scan = app.add_subcommand("scan", "CSV scans");
  c_scan->require_subcommand(1);

  GcpArgs gcp;
  auto* c_gcp = c_scan->add_subcommand("gcp", "lattice-counting sums over dyadic ranges [Q,2Q]");
  add_source(c_gcp, gcp.source);
  add_common(c_gcp, gcp.common);
  c_gcp->add_option("--q-min", gcp.q_min)->capture_default_str();
  c_gcp->add_option("--q-max", gcp.q_max)->capture_default_str();
  c_gcp->add_option("--delta-c", gcp.delta_c, "delta_q = c*q^-alpha")->capture_default_str();
  c_gcp->add_option("--delta-alpha", gcp.delta_alpha)->capture_default_str();
  c_gcp->add_option("--gamma", gcp.gamma, "shift, one value per coordinate")->delimiter(',');
  c_gcp->add_flag("--primes", gcp.primes, "restrict q to primes");
  c_gcp->add_option("--tol", gcp.tol)->capture_default_str();

  PartialSumArgs l1, l2;
  auto* c_l1 = c_scan->add_subcommand("l1", "partial sums of |coefficients|");
  auto* c_l2 = c_scan->add_subcommand("l2", "partial sums of |coefficients|^2");
  for (auto [cmd, args] : {std::pair{c_l1, &l1}, std::pair{c_l2, &l2}}) {
    add_source(cmd, args->source);
    add_common(cmd, args->common);
    cmd->add_option("--radii", args->radii, "radii R")->delimiter(',')->required();
    cmd->add_option("--tail-tol", args->tail_tol)->capture_default_str();
  }

  CensusArgs census;
  auto* c_census = c_scan->add_subcommand("census", "frequencies in [1,N] above N^-Delta");
  add_source(c_census, census.source);
  add_common(c_census, census.common);
  c_census->add_option("--N", census.N)->capture_default_str();
  c_census->add_option("--Delta", census.Delta)->capture_default_str();
  c_census->add_option("--tail-tol", census.tail_tol)->capture_default_str();
  c_census->add_option("--cap", census.cap, "offenders listed")->capture_default_str();

  KhinchineArgs kh;
  auto* c_kh = c_scan->add_subcommand("khinchine", "partial sums of psi^n and mu(A(psi(q),q))");
  add_source(c_kh, kh.source);
  add_common(c_kh, kh.common);
  add_psi(c_kh, kh.psi);
  c_kh->add_option("--q-max", kh.q_max)->capture_default_str();
  c_kh->add_option("--gamma", kh.gamma)->delimiter(',');
  c_kh->add_option("--tol", kh.tol)->capture_default_str();

  HitsArgs hits;
  auto* c_hits = c_scan->add_subcommand("hits", "empirical hit fractions of mu-typical points");
  add_source(c_hits, hits.source);
  add_common(c_hits, hits.common);
  add_psi(c_hits, hits.psi);
  c_hits->add_option("--q-max", hits.q_values, "Q_max values")->delimiter(',');
  c_hits->add_option("--points", hits.points)->capture_default_str();
  c_hits->add_option("--depth", hits.depth)->capture_default_str();
  c_hits->add_option("--gamma", hits.gamma)->capture_default_str();

  auto* c_measure = app.add_subcommand("measure", "measure queries");
  c_measure->require_subcommand(1);

  BoxArgs box;
  auto* c_box = c_measure->add_subcommand("box", "certified measure of a box");
  add_source(c_box, box.source);
  add_common(c_box, box.common);
  c_box->add_option("--lo", box.lo)->delimiter(',')->required();
  c_box->add_option("--hi", box.hi)->delimiter(',')->required();
  c_box->add_option("--tol", box.tol)->capture_default_str();

  SampleArgs sample;
  auto* c_sample = c_measure->add_subcommand("sample", "points drawn from the measure");
  add_source(c_sample, sample.source);
  add_common(c_sample, sample.common);
  c_sample->add_option("--count", sample.count)->capture_default_str();
  c_sample->add_option("--depth", sample.depth)->capture_default_str();

  ReproduceArgs repro;
  auto* c_repro = app.add_subcommand("reproduce", "recompute the reference values and compare");
  add_common(c_repro, repro.common);
  c_repro->add_flag("--fast", repro.fast, "fewer samples per cell");
  c_repro->add_option("--baseline", repro.baseline, "JSON file of reference values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (threads) mdm::set_max_threads(threads);
    if (budget) mdm::set_default_budget(budget);
    if (*c_cert) return cmd_certify(certify);
    if (*c_gcp) return cmd_scan_gcp(gcp);
    if (*c_l1) return cmd_scan_partial(l1, 1.0);
    if (*c_l2) return cmd_scan_partial(l2, 2.0);
    if (*c_census) return cmd_scan_census(census);
    if (*c_kh) return cmd_scan_khinchine(kh);
    if (*c_hits) return cmd_scan_hits(hits);
    if (*c_box) return cmd_measure_box(box);
    if (*c_sample) return cmd_measure_sample(sample);
    if (*c_repro) return cmd_reproduce(repro);
  } catch (const mdm::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
