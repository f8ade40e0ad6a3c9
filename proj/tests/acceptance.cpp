// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mdm/certify.hpp"
#include "mdm/fourier.hpp"
#include "mdm/lattice.hpp"
#include "support.hpp"

using namespace mdm;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

// A computed enclosure [lo, hi] reproduces a value printed to `tol` when the
// two intervals overlap.
bool brackets(double lo, double hi, double value, double tol) {
  return lo <= value + tol && hi >= value - tol;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int failures = 0;

void criterion(int id, const std::string& title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  std::printf("[%s] criterion %2d: %s (%.2f s)%s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(),
              seconds_since(t0), o.detail.str().c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

}  // namespace

int main() {
  criterion(1, "base 6, digits 0..4: m enclosure brackets 0.557317 at width < 1e-3", [](Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const CellStats s = discretized_stats(missing_digit_measure(6, {5}), 1, 4096);
    const double t = seconds_since(t0);
    o.detail << " m=[" << s.m_lo << ", " << s.m_hi << "]";
    o.require(s.m_hi - s.m_lo < 1e-3, "width < 1e-3");
    o.require(brackets(s.m_lo, s.m_hi, 0.557317, 5e-7), "brackets 0.557317");
    o.require(t < 5.0, "runtime < 5 s");
  });

  criterion(2, "base 12, digits 0..10: m near 0.700569, dim_H + dim_R near 1.0081", [](Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto m = missing_digit_measure(12, {11});
    const CellStats s = discretized_stats(m, 1, 4096);
    const double v = hausdorff_dimension(m) + bernstein_residue_bound(s, 12, 0.5);
    const double t = seconds_since(t0);
    o.detail << " m=[" << s.m_lo << ", " << s.m_hi << "] dim_H+dim_R=" << v;
    o.require(brackets(s.m_lo, s.m_hi, 0.700569, 1e-3), "m contains 0.700569 +- 1e-3");
    o.require(v >= 1.0, "dim_H + dim_R >= 1");
    o.require(std::abs(v - 1.0081) <= 5e-3, "within 5e-3 of 1.0081");
    o.require(t < 10.0, "runtime < 10 s");
  });

  criterion(3, "middle-15th: m near 0.67345, dim_H + dim_R near 1.00756, spectral and thick", [](Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto m = missing_digit_measure(15, {7});
    const Certificate c = certify_spectral_thick(m);
    const double t = seconds_since(t0);
    const CellStats s = discretized_stats(m, 1, 4096);
    const double v = c.dim_H + c.dim_R_lb;
    o.detail << " m=[" << s.m_lo << ", " << s.m_hi << "] dim_H+dim_R=" << v << " route=" << c.route;
    o.require(brackets(s.m_lo, s.m_hi, 0.67345, 1e-3), "m contains 0.67345 +- 1e-3");
    o.require(v >= 1.0, "dim_H + dim_R >= 1");
    o.require(std::abs(v - 1.00756) <= 5e-3, "within 5e-3 of 1.00756");
    o.require(c.spectral && c.thick, "spectral and thick");
    o.require(t < 10.0, "runtime < 10 s");
  });

  criterion(4, "middle third, k = 6: m(6) near 0.614731, bound near 0.0012797, not thick", [](Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto m = digit_measure_1d(3, {0, 2});
    const CellStats s = discretized_stats(m, 6, 4096);
    const double bound = bernstein_residue_bound(s, 3, 0.5);
    const Certificate c = certify_spectral_thick(m);
    const double t = seconds_since(t0);
    o.detail << " m6=[" << s.m_lo << ", " << s.m_hi << "] bound=" << bound << " thick=" << c.thick;
    o.require(brackets(s.m_lo, s.m_hi, 0.614731, 1e-3), "m(6) contains 0.614731 +- 1e-3");
    o.require(bound >= 0.001, "bound >= 0.001");
    o.require(std::abs(bound - 0.0012797) <= 3e-4, "within 3e-4 of 0.0012797");
    o.require(!c.thick, "thick = false");
    o.require(t < 30.0, "runtime < 30 s");
  });

  criterion(5, "analytic EK at (0.97, 0.01), k = 1: passes at p = 13417, fails at p = 10000", [](Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const EKParams hi = ek_parameters(13417, 1, 0.97, 0.01);
    const EKParams lo = ek_parameters(10000, 1, 0.97, 0.01);
    const bool pass_hi = ek_certifies(hi, 13417, 1);
    const bool pass_lo = ek_certifies(lo, 10000, 1);
    const auto first = ek_threshold(1, 0.97, 0.01, 10000, 20000);
    const double t = seconds_since(t0);
    o.detail << " Delta(13417)=" << hi.delta << " lambda(13417)=" << hi.lambda
             << " first passing p=" << (first ? std::to_string(*first) : "none");
    o.require(pass_hi, "certificate passes at p = 13417");
    o.require(!pass_lo, "certificate fails at p = 10000");
    o.require(t < 1.0, "runtime < 1 s");
  });

  criterion(6, "base 16 digits 0..4 self-convolved: weights (1..5..1)/25, entropy dimension 0.74977", [](Outcome& o) {
    const auto m = digit_measure_1d(16, {0, 1, 2, 3, 4});
    const auto c = convolve(m, m);
    const double expect[] = {1, 2, 3, 4, 5, 4, 3, 2, 1};
    o.require(c.size() == 9, "nine digits");
    for (int i = 0; i < c.size() && i < 9; ++i) {
      o.require(c.digits()(0, i) == i && std::abs(c.weights()(i) - expect[i] / 25.0) < 1e-15,
                "weight of digit " + std::to_string(i));
    }
    const double h = hausdorff_dimension(c);
    o.detail << " entropy_dim=" << h;
    o.require(std::abs(h - 0.74977) <= 1e-4, "0.74977 +- 1e-4");
  });

  criterion(7, "quadrature of the Lyapunov function for the middle third equals log2/log3", [](Outcome& o) {
    const double v = lyapunov_integral(digit_measure_1d(3, {0, 2}));
    const double s = std::log(2.0) / std::log(3.0);
    o.detail << " integral=" << v << " target=" << s;
    o.require(std::abs(v - s) <= 2e-3, "within 2e-3");
  });

  criterion(8, "measure_of_box vs depth-6 cylinder enumeration and Monte Carlo", [](Outcome& o) {
    test::Gen g(2024);
    // Endpoints sit at midpoints of zero-mass depth-6 cylinders, where the
    // enumeration is exact regardless of how the endpoint rounds.
    const std::vector<DigitMeasure> ms{
        digit_measure_1d(3, {0, 2}), missing_digit_measure(6, {5}),
        digit_measure_1d(7, {0, 2, 3, 6}, std::vector<double>{0.1, 0.2, 0.3, 0.4})};
    std::vector<test::CylinderTable> tables;
    std::vector<std::vector<std::int64_t>> gaps;
    for (const auto& mm : ms) {
      tables.emplace_back(mm, 6);
      gaps.push_back(tables.back().gap_cells());
    }
    double max_err = 0.0;
    for (int i = 0; i < 200; ++i) {
      const std::size_t which = static_cast<std::size_t>(i) % ms.size();
      const auto& gap = gaps[which];
      const auto last = static_cast<std::int64_t>(gap.size()) - 1;
      std::int64_t a = gap[g.integer(0, last)], b = gap[g.integer(0, last)];
      if (a > b) std::swap(a, b);
      const auto& table = tables[which];
      const double got =
          measure_of_box(ms[which], Box::interval(table.gap_midpoint(a), table.gap_midpoint(b)));
      max_err = std::max(max_err, std::abs(got - table.grid_interval(a, b)));
    }
    o.detail << " max_abs_err=" << max_err;
    o.require(max_err < 1e-9, "max abs error < 1e-9");

    const auto& m = ms[2];
    test::DirectSampler sampler(m, 77);
    std::vector<double> xs(1000000);
    for (double& x : xs) x = sampler.next();
    std::sort(xs.begin(), xs.end());
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      double a = g.uniform(), b = g.uniform();
      if (a > b) std::swap(a, b);
      const double p = measure_of_box(m, Box::interval(a, b));
      const auto count = std::upper_bound(xs.begin(), xs.end(), b) - std::lower_bound(xs.begin(), xs.end(), a);
      const double se = std::sqrt(std::max(p * (1 - p), 1e-12) / static_cast<double>(xs.size()));
      worst = std::max(worst, std::abs(static_cast<double>(count) / static_cast<double>(xs.size()) - p) / se);
    }
    o.detail << " worst_mc_z=" << worst;
    o.require(worst <= 4.0, "Monte Carlo within 4 standard errors");
  });

  criterion(9, "Parseval identity for the middle third at 10 random (Q, delta, gamma)", [](Outcome& o) {
    test::Gen g(909);
    const auto m = digit_measure_1d(3, {0, 2});
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const std::int64_t Q = g.integer(1, 60);
      const double delta = g.uniform(0.02, 0.3), gamma = g.uniform();
      const ParsevalResult r = parseval_residual(m, Q, delta, gamma, 1000000, 2000000 * Q, 100 + i);
      worst = std::max(worst, (r.residual - r.tail_bound) / r.lhs_stderr);
    }
    o.detail << " worst_z=" << worst;
    o.require(worst <= 4.0, "residual within 4 standard errors (after the certified Fourier tail)");
  });

  criterion(10, "GCP stability for the middle-15th at delta_q = q^-1.02, Q = 2^8..2^14", [](Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::int64_t> Qs;
    for (int e = 8; e <= 14; ++e) Qs.push_back(std::int64_t{1} << e);
    const Eigen::VectorXd gamma = Eigen::VectorXd::Zero(1);
    const GcpScan s = gcp_scan(missing_digit_measure(15, {7}), Qs, {1.0, 1.02}, gamma, false);
    const GcpScan leb = gcp_scan(missing_digit_measure(15, {}), Qs, {1.0, 1.02}, gamma, false);
    const double t = seconds_since(t0);
    double lo = INFINITY, hi = 0.0, leb_err = 0.0;
    for (const auto& r : s.rows) {
      lo = std::min(lo, r.ratio);
      hi = std::max(hi, r.ratio);
    }
    for (const auto& r : leb.rows) leb_err = std::max(leb_err, std::abs(r.ratio - 1.0));
    o.detail << " ratio_range=[" << lo << ", " << hi << "] lebesgue_err=" << leb_err;
    o.require(s.rows.size() == Qs.size() && !s.truncated, "all rows computed");
    o.require(hi / lo <= 4.0, "max/min ratio <= 4");
    o.require(leb.rows.size() == Qs.size() && leb_err <= 1e-9, "Lebesgue ratio 1 +- 1e-9");
    o.require(t < 300.0, "runtime < 5 min");
  });

  criterion(11, "standalone invariant suite reports zero failures", [](Outcome& o) {
    const std::string cmd = std::string(MDM_INVARIANTS_PATH) + " --minimal";
    const int rc = std::system(cmd.c_str());
    o.detail << " exit=" << rc;
    o.require(rc == 0, "invariant binary exits 0");
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
