#include "mdm/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mdm/parallel.hpp"
#include "trig.hpp"

namespace mdm {
namespace {

void check_target(double delta, std::int64_t q, const Eigen::VectorXd& gamma) {
  if (!(delta > 0.0 && delta < 0.5)) throw DomainError("delta must lie in (0, 1/2)");
  if (q < 1) throw DomainError("denominator q must be at least 1");
  if (gamma.size() < 1) throw DomainError("gamma must have at least one coordinate");
  for (Eigen::Index c = 0; c < gamma.size(); ++c) {
    if (!(gamma[c] >= 0.0 && gamma[c] <= 1.0)) throw DomainError("gamma must lie in [0,1]^n", static_cast<int>(c));
  }
}

// Lattice indices k whose interval [(k+γ-δ)/q, (k+γ+δ)/q] meets [0,1].
std::pair<std::int64_t, std::int64_t> index_range(double delta, std::int64_t q, double g) {
  const auto lo = static_cast<std::int64_t>(std::ceil(-g - delta));
  const auto hi = static_cast<std::int64_t>(std::floor(static_cast<double>(q) - g + delta));
  return {lo, hi};
}

std::pair<double, double> component(double delta, std::int64_t q, double g, std::int64_t k) {
  const double qd = static_cast<double>(q);
  return {std::max(0.0, (k + g - delta) / qd), std::min(1.0, (k + g + delta) / qd)};
}

Enclosure lattice_1d(const DigitMeasure& m, double delta, std::int64_t q, double g, double tol) {
  const auto [k_lo, k_hi] = index_range(delta, q, g);
  Enclosure acc{0.0, 0.0};
  for (std::int64_t k = k_lo; k <= k_hi; ++k) {
    const auto [a, b] = component(delta, q, g, k);
    if (a > b) continue;
    const Enclosure e = interval_measure(m, a, b, tol);
    acc.lo += e.lo;
    acc.hi += e.hi;
  }
  acc.hi = std::min(acc.hi, 1.0);
  acc.lo = std::min(acc.lo, acc.hi);
  return acc;
}

}  // namespace

TargetSet target_set(double delta, std::int64_t q, const Eigen::VectorXd& gamma) {
  check_target(delta, q, gamma);
  const int n = static_cast<int>(gamma.size());
  std::vector<std::vector<std::pair<double, double>>> sides(n);
  for (int c = 0; c < n; ++c) {
    const auto [k_lo, k_hi] = index_range(delta, q, gamma[c]);
    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
      const auto iv = component(delta, q, gamma[c], k);
      if (iv.first <= iv.second) sides[c].push_back(iv);
    }
  }
  TargetSet ts;
  ts.delta = delta;
  ts.q = q;
  ts.gamma = gamma;
  std::vector<std::size_t> idx(n, 0);
  for (int c = 0; c < n; ++c)
    if (sides[c].empty()) return ts;
  for (;;) {
    Eigen::VectorXd lo(n), hi(n);
    for (int c = 0; c < n; ++c) {
      lo[c] = sides[c][idx[c]].first;
      hi[c] = sides[c][idx[c]].second;
    }
    ts.boxes.emplace_back(lo, hi);
    int c = 0;
    while (c < n && ++idx[c] == sides[c].size()) idx[c++] = 0;
    if (c == n) break;
  }
  return ts;
}

std::uint64_t target_box_count(double delta, std::int64_t q, const Eigen::VectorXd& gamma) {
  std::uint64_t count = 1;
  for (Eigen::Index c = 0; c < gamma.size(); ++c) {
    const auto [k_lo, k_hi] = index_range(delta, q, gamma[c]);
    count *= static_cast<std::uint64_t>(std::max<std::int64_t>(0, k_hi - k_lo + 1));
  }
  return count;
}

Enclosure lattice_measure_enclosure(const DigitMeasure& m, double delta, std::int64_t q,
                                    const Eigen::VectorXd& gamma, double tol) {
  check_target(delta, q, gamma);
  if (gamma.size() != m.dim()) throw DomainError("gamma dimension does not match the measure");
  if (m.dim() == 1) return lattice_1d(m, delta, q, gamma[0], tol);
  Enclosure acc{0.0, 0.0};
  for (const Box& b : target_set(delta, q, gamma).boxes) {
    const Enclosure e = measure_of_box_enclosure(m, b, tol);
    acc.lo += e.lo;
    acc.hi += e.hi;
  }
  acc.hi = std::min(acc.hi, 1.0);
  acc.lo = std::min(acc.lo, acc.hi);
  return acc;
}

double lattice_measure(const DigitMeasure& m, double delta, std::int64_t q,
                       const Eigen::VectorXd& gamma, double tol) {
  return lattice_measure_enclosure(m, delta, q, gamma, tol).mid();
}

double DeltaLaw::operator()(std::int64_t q) const {
  return c * std::pow(static_cast<double>(q), -alpha);
}

GcpScan gcp_scan(const DigitMeasure& m, const std::vector<std::int64_t>& Q_list, DeltaLaw law,
                 const Eigen::VectorXd& gamma, bool primes_only, double tol,
                 std::uint64_t box_budget) {
  if (!(law.alpha > 0.0)) throw DomainError("delta law exponent alpha must be positive");
  if (!(law.c > 0.0)) throw DomainError("delta law constant c must be positive");
  if (gamma.size() != m.dim()) throw DomainError("gamma dimension does not match the measure");
  for (std::size_t i = 0; i < Q_list.size(); ++i) {
    if (Q_list[i] < 1 || (i > 0 && Q_list[i] <= Q_list[i - 1])) {
      throw DomainError("Q values must be positive and increasing", static_cast<int>(i));
    }
  }
  if (box_budget == 0) box_budget = default_budget();
  const int n = m.dim();

  GcpScan scan;
  std::uint64_t used = 0;
  for (std::int64_t Q : Q_list) {
    std::vector<std::int64_t> qs;
    if (primes_only) {
      qs = primes_in(std::max<std::int64_t>(2, Q), 2 * Q);
    } else {
      for (std::int64_t q = Q; q <= 2 * Q; ++q) qs.push_back(q);
    }
    const bool overlaps = std::any_of(qs.begin(), qs.end(), [&](std::int64_t q) { return law(q) >= 0.5; });
    if (overlaps || qs.empty()) {
      scan.rejected.push_back(Q);
      continue;
    }
    std::uint64_t boxes = 0;
    for (std::int64_t q : qs) boxes += target_box_count(law(q), q, gamma);
    if (used + boxes > box_budget) {
      scan.truncated = true;
      break;
    }
    used += boxes;

    std::vector<Enclosure> per_q(qs.size());
    parallel_for(qs.size(), [&](std::size_t i) {
      per_q[i] = lattice_measure_enclosure(m, law(qs[i]), qs[i], gamma, tol);
    });
    std::vector<double> mids(qs.size()), radii(qs.size()), lebesgue(qs.size());
    for (std::size_t i = 0; i < qs.size(); ++i) {
      mids[i] = per_q[i].mid();
      radii[i] = per_q[i].radius();
      lebesgue[i] = std::pow(2.0 * law(qs[i]), n);
    }
    ScanRow row;
    row.Q = Q;
    row.delta = law(Q);
    row.S = pairwise_sum(mids);
    row.ratio = row.S / pairwise_sum(lebesgue);
    row.primes_only = primes_only;
    row.error = pairwise_sum(radii);
    scan.rows.push_back(row);
  }
  return scan;
}

double divisor_fourier_sum_radius(const DigitMeasure& m, std::int64_t Q, std::int64_t radius,
                                  double tail_tol, std::uint64_t budget) {
  if (Q < 1) throw DomainError("Q must be at least 1");
  if (radius < 0) throw DomainError("radius must be nonnegative");
  if (budget == 0) budget = default_budget();
  const int n = m.dim();
  const std::int64_t J = radius / Q;
  if (std::pow(2.0 * static_cast<double>(J) + 1.0, n) > static_cast<double>(budget)) {
    throw BudgetExceeded("divisor sum needs more terms than the budget allows");
  }
  if (J == 0 || m.is_lebesgue()) return 0.0;
  const CoefficientEngine engine(m, tail_tol);
  if (n == 1) {
    return 2.0 * deterministic_sum(static_cast<std::size_t>(J), [&](std::size_t j) {
             return engine.at((static_cast<std::int64_t>(j) + 1) * Q).abs();
           });
  }
  const std::int64_t w = 2 * J + 1;
  std::size_t count = 1;
  for (int c = 0; c < n; ++c) count *= static_cast<std::size_t>(w);
  return deterministic_sum(count, [&](std::size_t idx) {
    IntVector xi(n);
    for (int c = 0; c < n; ++c) {
      xi[c] = (static_cast<std::int64_t>(idx % static_cast<std::size_t>(w)) - J) * Q;
      idx /= static_cast<std::size_t>(w);
    }
    return xi.isZero() ? 0.0 : engine.at(xi).abs();
  });
}

double divisor_fourier_sum(const DigitMeasure& m, std::int64_t Q, double delta, double K,
                           double tail_tol, std::uint64_t budget) {
  if (!(delta > 0.0 && delta < 0.5)) throw DomainError("delta must lie in (0, 1/2)");
  if (!(K >= 1.0)) throw DomainError("K must be at least 1");
  const double radius = std::floor(K * static_cast<double>(Q) / delta);
  if (radius > 9e15) throw BudgetExceeded("divisor sum radius is too large");
  return divisor_fourier_sum_radius(m, Q, static_cast<std::int64_t>(radius), tail_tol, budget);
}

ParsevalResult parseval_residual(const DigitMeasure& m, std::int64_t Q, double delta, double gamma,
                                 std::size_t n_samples, std::int64_t term_radius,
                                 std::uint64_t seed) {
  if (m.dim() != 1) throw DomainError("the Parseval check is 1D");
  if (Q < 1) throw DomainError("Q must be at least 1");
  if (!(delta > 0.0 && delta < 0.5)) throw DomainError("delta must lie in (0, 1/2)");
  if (n_samples < 2) throw DomainError("need at least two samples");
  if (term_radius < 0) throw DomainError("term radius must be nonnegative");

  ParsevalResult res;
  const std::int64_t M = term_radius / Q;
  const CoefficientEngine engine(m);
  const double fourier_side = deterministic_sum(static_cast<std::size_t>(M), [&](std::size_t i) {
    const auto mm = static_cast<std::int64_t>(i) + 1;
    double s, c;
    detail::sincospi(delta * static_cast<double>(mm), s, c);
    const double x = std::numbers::pi * delta * static_cast<double>(mm);
    const double kernel = delta * (s / x) * (s / x);
    const std::complex<double> phase = detail::expm2pi(static_cast<double>(mm) * gamma);
    return 2.0 * kernel * (phase * std::conj(engine.at(mm * Q).value)).real();
  });
  res.rhs = delta + fourier_side;
  res.tail_bound = M > 0 ? std::min(1.0 - delta, 2.0 / (std::numbers::pi * std::numbers::pi * delta * M))
                         : 1.0 - delta;

  const std::vector<double> xs = sample_points_1d(m, n_samples, kDefaultSampleDepth, seed);
  std::vector<double> g(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double y = static_cast<double>(Q) * xs[i] - gamma;
    const double d = std::abs(y - std::nearbyint(y));
    g[i] = std::max(0.0, 1.0 - d / delta);
  }
  const double nn = static_cast<double>(n_samples);
  res.lhs = pairwise_sum(g) / nn;
  for (double& v : g) v = (v - res.lhs) * (v - res.lhs);
  res.lhs_stderr = std::sqrt(pairwise_sum(g) / (nn - 1.0) / nn);
  res.residual = std::abs(res.lhs - res.rhs);
  return res;
}

std::vector<std::int64_t> primes_in(std::int64_t lo, std::int64_t hi, std::uint64_t budget) {
  if (lo < 2) throw DomainError("lower end must be at least 2");
  if (hi < lo) throw DomainError("empty range: hi < lo");
  if (budget == 0) budget = default_budget();
  if (static_cast<std::uint64_t>(hi) > budget) throw BudgetExceeded("sieve bound exceeds the budget");

  const auto root = static_cast<std::int64_t>(std::sqrt(static_cast<double>(hi))) + 1;
  std::vector<char> small(static_cast<std::size_t>(root + 1), 1);
  std::vector<std::int64_t> base;
  for (std::int64_t i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(i);
    for (std::int64_t j = i * i; j <= root; j += i) small[j] = 0;
  }

  constexpr std::int64_t kSegment = 1 << 16;
  std::vector<std::int64_t> out;
  std::vector<char> seg(kSegment);
  for (std::int64_t start = lo; start <= hi; start += kSegment) {
    const std::int64_t end = std::min(hi, start + kSegment - 1);
    std::fill(seg.begin(), seg.end(), 1);
    for (std::int64_t pr : base) {
      if (pr * pr > end) break;
      std::int64_t first = std::max(pr * pr, (start + pr - 1) / pr * pr);
      for (std::int64_t j = first; j <= end; j += pr) seg[j - start] = 0;
    }
    for (std::int64_t v = start; v <= end; ++v)
      if (seg[v - start]) out.push_back(v);
  }
  return out;
}

double power_decay_exponent(double sigma, int n) {
  if (n < 1) throw DomainError("dimension n must be at least 1");
  if (!(sigma > 0.0 && sigma < n)) throw DomainError("decay exponent must lie in (0, n)");
  return sigma / (n - sigma);
}

double power_decay_delta_floor(double sigma, int n, std::int64_t Q) {
  if (Q < 1) throw DomainError("Q must be at least 1");
  return 200.0 * std::pow(static_cast<double>(Q), -power_decay_exponent(sigma, n));
}

}  // namespace mdm
