#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mdm/io.hpp"

namespace mdm::cli {

struct MeasureSource {
  std::string file;
  std::optional<int> base;
  std::vector<int> missing;
  std::vector<int> digits;
  std::vector<double> weights;

  DigitMeasure load() const;
  void echo(ConfigEcho& config) const;
};

struct Common {
  std::string output;  // empty: stdout
  std::uint64_t seed = 0;
};

struct CertifyArgs {
  MeasureSource source;
  Common common;
  int k_max = 0;
  int samples = 0;
  std::string route = "both";
};

struct GcpArgs {
  MeasureSource source;
  Common common;
  std::int64_t q_min = 256;
  std::int64_t q_max = 16384;
  double delta_c = 1.0;
  double delta_alpha = 1.02;
  std::vector<double> gamma;
  bool primes = false;
  double tol = 1e-12;
};

struct PartialSumArgs {
  MeasureSource source;
  Common common;
  std::vector<std::int64_t> radii;
  double tail_tol = kDefaultTailTol;
};

struct CensusArgs {
  MeasureSource source;
  Common common;
  std::int64_t N = 6561;
  double Delta = 0.6;
  double tail_tol = kDefaultTailTol;
  std::size_t cap = 1000;
};

struct PsiArgs {
  std::string kind = "power";
  double c = 1.0;
  double nu = 2.0;

  ApproxFunction build() const;
  void echo(ConfigEcho& config) const;
};

struct KhinchineArgs {
  MeasureSource source;
  Common common;
  PsiArgs psi;
  std::int64_t q_max = 1024;
  std::vector<double> gamma;
  double tol = 1e-12;
};

struct HitsArgs {
  MeasureSource source;
  Common common;
  PsiArgs psi;
  std::vector<std::int64_t> q_values{100, 1000, 10000};
  std::size_t points = 1000;
  int depth = 64;
  double gamma = 0.0;
};

struct BoxArgs {
  MeasureSource source;
  Common common;
  std::vector<double> lo;
  std::vector<double> hi;
  double tol = 1e-12;
};

struct SampleArgs {
  MeasureSource source;
  Common common;
  std::size_t count = 10;
  int depth = kDefaultSampleDepth;
};

struct ReproduceArgs {
  Common common;
  bool fast = false;
  std::string baseline;
};

int cmd_certify(const CertifyArgs& a);
int cmd_scan_gcp(const GcpArgs& a);
int cmd_scan_partial(const PartialSumArgs& a, double q);
int cmd_scan_census(const CensusArgs& a);
int cmd_scan_khinchine(const KhinchineArgs& a);
int cmd_scan_hits(const HitsArgs& a);
int cmd_measure_box(const BoxArgs& a);
int cmd_measure_sample(const SampleArgs& a);
int cmd_reproduce(const ReproduceArgs& a);

}  // namespace mdm::cli
