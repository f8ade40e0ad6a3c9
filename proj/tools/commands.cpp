#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "mdm/parallel.hpp"

namespace mdm::cli {
namespace {

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
  return s;
}

template <typename T>
std::string join_numbers(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ";";
    if constexpr (std::is_floating_point_v<T>) {
      s += format_double(v[i]);
    } else {
      s += std::to_string(v[i]);
    }
  }
  return s;
}

// Writes to the --output file when given, else stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw DomainError("cannot open output file " + path);
    }
  }
  std::ostream& out() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

Eigen::VectorXd gamma_vector(const std::vector<double>& g, int dim) {
  if (g.empty()) return Eigen::VectorXd::Zero(dim);
  if (static_cast<int>(g.size()) != dim) throw DomainError("gamma needs one value per coordinate");
  return Eigen::Map<const Eigen::VectorXd>(g.data(), dim);
}

void echo_common(ConfigEcho& config, const Common& c) {
  config.emplace_back("seed", std::to_string(c.seed));
  config.emplace_back("threads", std::to_string(max_threads()));
  config.emplace_back("budget", std::to_string(default_budget()));
}

}  // namespace

DigitMeasure MeasureSource::load() const {
  const bool from_file = !file.empty();
  const bool from_flags = base.has_value();
  if (from_file == from_flags) throw DomainError("give exactly one measure source: --measure FILE or --base P");
  if (from_file) return load_measure_file(file);
  if (!digits.empty() && !missing.empty()) throw DomainError("--digits and --missing are mutually exclusive");
  std::optional<std::vector<double>> w;
  if (!weights.empty()) w = weights;
  if (!digits.empty()) return digit_measure_1d(*base, digits, w);
  if (w) throw DomainError("--weights needs --digits");
  return missing_digit_measure(*base, missing);
}

void MeasureSource::echo(ConfigEcho& config) const {
  if (!file.empty()) {
    config.emplace_back("measure", file);
    return;
  }
  config.emplace_back("base", std::to_string(base.value_or(0)));
  if (!digits.empty()) config.emplace_back("digits", join_ints(digits));
  if (!missing.empty()) config.emplace_back("missing", join_ints(missing));
  if (!weights.empty()) config.emplace_back("weights", join_numbers(weights));
}

ApproxFunction PsiArgs::build() const {
  if (kind == "power") return ApproxFunction::power(c, nu);
  if (kind == "loglog") return ApproxFunction::loglog();
  throw DomainError("unknown psi kind '" + kind + "' (power or loglog)");
}

void PsiArgs::echo(ConfigEcho& config) const {
  config.emplace_back("psi", kind);
  if (kind == "power") {
    config.emplace_back("psi_c", format_double(c));
    config.emplace_back("psi_nu", format_double(nu));
  }
}

int cmd_certify(const CertifyArgs& a) {
  const DigitMeasure m = a.source.load();
  CertifyOptions opts;
  opts.k_max = a.k_max;
  opts.samples_per_cell = a.samples;
  if (a.route == "both") {
    opts.route = Route::kBoth;
  } else if (a.route == "analytic") {
    opts.route = Route::kAnalytic;
  } else if (a.route == "numeric") {
    opts.route = Route::kNumeric;
  } else {
    throw DomainError("unknown route '" + a.route + "' (both, analytic, numeric)");
  }
  ConfigEcho config{{"command", "certify"}};
  a.source.echo(config);
  config.emplace_back("k_max", std::to_string(a.k_max));
  config.emplace_back("samples_per_cell", std::to_string(a.samples));
  config.emplace_back("route", a.route);
  echo_common(config, a.common);
  const Certificate cert = certify_spectral_thick(m, opts);
  Sink sink(a.common.output);
  sink.out() << certificate_to_json(m, cert, config);
  return 0;
}

int cmd_scan_gcp(const GcpArgs& a) {
  const DigitMeasure m = a.source.load();
  if (a.q_min < 1 || a.q_max < a.q_min) throw DomainError("need 1 <= q-min <= q-max");
  std::vector<std::int64_t> Qs;
  for (std::int64_t Q = a.q_min; Q <= a.q_max; Q *= 2) Qs.push_back(Q);
  ConfigEcho config;
  a.source.echo(config);
  config.emplace_back("q_min", std::to_string(a.q_min));
  config.emplace_back("q_max", std::to_string(a.q_max));
  config.emplace_back("delta_c", format_double(a.delta_c));
  config.emplace_back("delta_alpha", format_double(a.delta_alpha));
  config.emplace_back("gamma", join_numbers(a.gamma));
  config.emplace_back("primes", a.primes ? "true" : "false");
  config.emplace_back("tol", format_double(a.tol));
  echo_common(config, a.common);

  const GcpScan scan = gcp_scan(m, Qs, {a.delta_c, a.delta_alpha}, gamma_vector(a.gamma, m.dim()),
                                a.primes, a.tol);
  for (std::int64_t Q : scan.rejected) {
    std::cerr << "rejected Q=" << Q << ": delta_q >= 1/2 inside [Q, 2Q]\n";
  }
  if (scan.truncated) std::cerr << "warning: box budget exhausted, output truncated\n";
  Sink sink(a.common.output);
  sink.out() << header_comment("scan gcp", config);
  if (scan.truncated) sink.out() << "# truncated: box budget exhausted\n";
  write_gcp_csv(sink.out(), scan.rows);
  return 0;
}

int cmd_scan_partial(const PartialSumArgs& a, double q) {
  const DigitMeasure m = a.source.load();
  std::vector<std::int64_t> radii;
  bool truncated = false;
  for (std::int64_t R : a.radii) {
    if (std::pow(2.0 * static_cast<double>(R) + 1.0, m.dim()) > static_cast<double>(default_budget())) {
      truncated = true;
      break;
    }
    radii.push_back(R);
  }
  ConfigEcho config;
  a.source.echo(config);
  config.emplace_back("q", format_double(q));
  config.emplace_back("radii", join_numbers(a.radii));
  config.emplace_back("tail_tol", format_double(a.tail_tol));
  echo_common(config, a.common);
  const auto rows = partial_sums(m, q, radii, a.tail_tol);
  if (truncated) std::cerr << "warning: term budget exhausted, output truncated\n";
  Sink sink(a.common.output);
  sink.out() << header_comment(q == 1.0 ? "scan l1" : "scan l2", config);
  if (truncated) sink.out() << "# truncated: term budget exhausted\n";
  write_partial_sums_csv(sink.out(), rows);
  if (!rows.empty() && rows.back().exponent_estimate) {
    sink.out() << "# dimension_estimate=" << format_double(m.dim() - *rows.back().exponent_estimate) << "\n";
  }
  return 0;
}

int cmd_scan_census(const CensusArgs& a) {
  const DigitMeasure m = a.source.load();
  ConfigEcho config;
  a.source.echo(config);
  config.emplace_back("N", std::to_string(a.N));
  config.emplace_back("Delta", format_double(a.Delta));
  config.emplace_back("tail_tol", format_double(a.tail_tol));
  config.emplace_back("cap", std::to_string(a.cap));
  echo_common(config, a.common);
  const ResidueCensus census = residue_census(m, a.N, a.Delta, a.tail_tol, a.cap);
  Sink sink(a.common.output);
  sink.out() << header_comment("scan census", config);
  sink.out() << "# count=" << census.count << "\n";
  write_census_csv(sink.out(), census);
  return 0;
}

int cmd_scan_khinchine(const KhinchineArgs& a) {
  const DigitMeasure m = a.source.load();
  const ApproxFunction psi = a.psi.build();
  ConfigEcho config;
  a.source.echo(config);
  a.psi.echo(config);
  config.emplace_back("q_max", std::to_string(a.q_max));
  config.emplace_back("gamma", join_numbers(a.gamma));
  config.emplace_back("tol", format_double(a.tol));
  echo_common(config, a.common);
  const KhinchineTable table = khinchine_partial_sums(m, psi, a.q_max, gamma_vector(a.gamma, m.dim()), a.tol);
  for (const auto& w : table.warnings) std::cerr << "warning: " << w << "\n";
  Sink sink(a.common.output);
  sink.out() << header_comment("scan khinchine", config);
  sink.out() << "# empirical last_decade_fraction=" << format_double(table.last_decade_fraction)
             << " bounded=" << (table.bounded ? "true" : "false") << "\n";
  write_khinchine_csv(sink.out(), table.rows);
  return 0;
}

int cmd_scan_hits(const HitsArgs& a) {
  const DigitMeasure m = a.source.load();
  const ApproxFunction psi = a.psi.build();
  ConfigEcho config;
  a.source.echo(config);
  a.psi.echo(config);
  config.emplace_back("q_max", join_numbers(a.q_values));
  config.emplace_back("points", std::to_string(a.points));
  config.emplace_back("depth", std::to_string(a.depth));
  config.emplace_back("gamma", format_double(a.gamma));
  echo_common(config, a.common);
  const auto rows = hit_statistics_curve(m, psi, a.q_values, a.points, a.depth, a.common.seed, a.gamma);
  Sink sink(a.common.output);
  sink.out() << header_comment("scan hits", config);
  sink.out() << "# empirical\n";
  write_hits_csv(sink.out(), rows);
  return 0;
}

int cmd_measure_box(const BoxArgs& a) {
  const DigitMeasure m = a.source.load();
  if (static_cast<int>(a.lo.size()) != m.dim() || static_cast<int>(a.hi.size()) != m.dim()) {
    throw DomainError("--lo and --hi need one value per coordinate");
  }
  const Box b(Eigen::Map<const Eigen::VectorXd>(a.lo.data(), m.dim()),
              Eigen::Map<const Eigen::VectorXd>(a.hi.data(), m.dim()));
  ConfigEcho config;
  a.source.echo(config);
  config.emplace_back("lo", join_numbers(a.lo));
  config.emplace_back("hi", join_numbers(a.hi));
  config.emplace_back("tol", format_double(a.tol));
  echo_common(config, a.common);
  const Enclosure e = measure_of_box_enclosure(m, b, a.tol);
  Sink sink(a.common.output);
  sink.out() << header_comment("measure box", config) << "measure,lo,hi\n"
             << format_double(e.mid()) << ',' << format_double(e.lo) << ',' << format_double(e.hi) << '\n';
  return 0;
}

int cmd_measure_sample(const SampleArgs& a) {
  const DigitMeasure m = a.source.load();
  ConfigEcho config;
  a.source.echo(config);
  config.emplace_back("count", std::to_string(a.count));
  config.emplace_back("depth", std::to_string(a.depth));
  echo_common(config, a.common);
  const auto pts = sample_points(m, a.count, a.depth, a.common.seed);
  Sink sink(a.common.output);
  std::ostream& os = sink.out();
  os << header_comment("measure sample", config);
  for (int c = 0; c < m.dim(); ++c) os << (c ? "," : "") << "x" << c;
  os << '\n';
  for (const auto& p : pts) {
    for (int c = 0; c < m.dim(); ++c) os << (c ? "," : "") << format_double(p[c]);
    os << '\n';
  }
  return 0;
}

// ---- reproduce --------------------------------------------------------------

namespace {

enum class CheckKind { kEnclosure, kAbs, kExact };

struct BaselineEntry {
  std::string name;
  double value;
  double tolerance;
  CheckKind kind;
};

const std::vector<BaselineEntry>& builtin_baseline() {
  static const std::vector<BaselineEntry> entries{
      {"m_base6", 0.557317, 5e-7, CheckKind::kEnclosure},
      {"m_base12", 0.700569, 1e-3, CheckKind::kEnclosure},
      {"dimH_plus_dimR_base12", 1.0081, 5e-3, CheckKind::kAbs},
      {"m_middle15", 0.67345, 1e-3, CheckKind::kEnclosure},
      {"dimH_plus_dimR_middle15", 1.00756, 5e-3, CheckKind::kAbs},
      {"m6_middle3", 0.614731, 1e-3, CheckKind::kEnclosure},
      {"dimR_bound_middle3_k6", 0.0012797, 3e-4, CheckKind::kAbs},
      {"ek_threshold_p", 13417, 0, CheckKind::kExact},
      {"entropy_dim_convolution", 0.74977, 1e-4, CheckKind::kAbs},
  };
  return entries;
}

std::vector<BaselineEntry> load_baseline(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open baseline file " + path);
  nlohmann::json j;
  try {
    in >> j;
    std::vector<BaselineEntry> out;
    for (const auto& e : j.at("entries")) {
      const std::string kind = e.at("check").get<std::string>();
      CheckKind k;
      if (kind == "enclosure") {
        k = CheckKind::kEnclosure;
      } else if (kind == "abs") {
        k = CheckKind::kAbs;
      } else if (kind == "exact") {
        k = CheckKind::kExact;
      } else {
        throw DomainError("baseline entry has unknown check '" + kind + "'");
      }
      out.push_back({e.at("name").get<std::string>(), e.at("value").get<double>(),
                     e.at("tolerance").get<double>(), k});
    }
    if (out.empty()) throw DomainError("baseline file lists no entries");
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("corrupted baseline file " + path + ": " + e.what());
  }
}

struct Computed {
  double lo;
  double hi;
};

}  // namespace

int cmd_reproduce(const ReproduceArgs& a) {
  const std::vector<BaselineEntry> baseline = a.baseline.empty() ? builtin_baseline() : load_baseline(a.baseline);
  const int s1 = a.fast ? 512 : 4096;
  const int s6 = a.fast ? 256 : 4096;

  std::map<std::string, Computed> computed;
  auto stats_for = [](const DigitMeasure& m, int k, int S) { return discretized_stats(m, k, S); };
  {
    const auto m = missing_digit_measure(6, {5});
    const CellStats s = stats_for(m, 1, s1);
    computed["m_base6"] = {s.m_lo, s.m_hi};
  }
  {
    const auto m = missing_digit_measure(12, {11});
    const CellStats s = stats_for(m, 1, s1);
    computed["m_base12"] = {s.m_lo, s.m_hi};
    const double v = hausdorff_dimension(m) + bernstein_residue_bound(s, 12, 0.5);
    computed["dimH_plus_dimR_base12"] = {v, v};
  }
  {
    const auto m = missing_digit_measure(15, {7});
    const CellStats s = stats_for(m, 1, s1);
    computed["m_middle15"] = {s.m_lo, s.m_hi};
    const double v = hausdorff_dimension(m) + bernstein_residue_bound(s, 15, 0.5);
    computed["dimH_plus_dimR_middle15"] = {v, v};
  }
  {
    const auto m = missing_digit_measure(3, {1});
    const CellStats s = stats_for(m, 6, s6);
    computed["m6_middle3"] = {s.m_lo, s.m_hi};
    const double v = bernstein_residue_bound(s, 3, 0.5);
    computed["dimR_bound_middle3_k6"] = {v, v};
  }
  {
    const auto t = ek_threshold(1, 0.97, 0.01, 3, 100000);
    const double v = t ? static_cast<double>(*t) : std::nan("");
    computed["ek_threshold_p"] = {v, v};
  }
  {
    const auto m = digit_measure_1d(16, {0, 1, 2, 3, 4});
    const double v = hausdorff_dimension(convolve(m, m));
    computed["entropy_dim_convolution"] = {v, v};
  }

  ConfigEcho config{{"fast", a.fast ? "true" : "false"},
                    {"baseline", a.baseline.empty() ? "builtin" : a.baseline}};
  echo_common(config, a.common);
  Sink sink(a.common.output);
  std::ostream& os = sink.out();
  os << header_comment("reproduce", config);
  os << "name,computed_lo,computed_hi,reference,tolerance,status\n";
  int failures = 0;
  for (const auto& e : baseline) {
    const auto it = computed.find(e.name);
    if (it == computed.end()) throw DomainError("baseline names unknown quantity '" + e.name + "'");
    const Computed c = it->second;
    bool pass = false;
    switch (e.kind) {
      case CheckKind::kEnclosure: pass = c.lo <= e.value + e.tolerance && c.hi >= e.value - e.tolerance; break;
      case CheckKind::kAbs: pass = std::abs(c.lo - e.value) <= e.tolerance; break;
      case CheckKind::kExact: pass = c.lo == e.value; break;
    }
    if (!pass) ++failures;
    os << e.name << ',' << format_double(c.lo) << ',' << format_double(c.hi) << ',' << format_double(e.value)
       << ',' << format_double(e.tolerance) << ',' << (pass ? "pass" : "FAIL") << '\n';
  }
  os << "# failures=" << failures << "\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace mdm::cli
