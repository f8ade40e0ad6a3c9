#include "mdm/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mdm/parallel.hpp"
#include "symbol.hpp"

namespace mdm {
namespace {

double lipschitz_constant(const DigitMeasure& m) {
  // |f| is unchanged by the phase e^{-2πicθ}, so center the digits at their weighted median.
  std::vector<std::pair<int, double>> dw;
  for (int i = 0; i < m.size(); ++i) dw.emplace_back(m.digits()(0, i), m.weights()[i]);
  std::sort(dw.begin(), dw.end());
  double acc = 0.0;
  int center = dw.back().first;
  for (const auto& [d, w] : dw) {
    acc += w;
    if (acc >= 0.5) {
      center = d;
      break;
    }
  }
  double s = 0.0;
  for (const auto& [d, w] : dw) s += w * std::abs(d - center);
  return 2.0 * std::numbers::pi * s;
}

std::int64_t checked_power(int base, int k) {
  std::int64_t n = 1;
  for (int i = 0; i < k; ++i) {
    if (n > (std::int64_t{1} << 40) / base) throw BudgetExceeded("base^k is too large for cell discretization");
    n *= base;
  }
  return n;
}

}  // namespace

double kl_bernoulli(double sigma, double epsilon) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw DomainError("sigma must lie in (0, 1)");
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw DomainError("epsilon must lie in (0, 1/2)");
  const double q = 1.0 - 2.0 * epsilon;
  return sigma * std::log(sigma / q) + (1.0 - sigma) * std::log((1.0 - sigma) / (2.0 * epsilon));
}

EKParams ek_parameters(int p, int k, double sigma, double epsilon) {
  if (p < 3) throw DomainError("EK needs p >= 3");
  if (k < 1 || k > p - 2) throw DomainError("EK needs 1 <= k <= p-2 missing digits");
  if (!(sigma > 0.0 && sigma < 1.0)) throw DomainError("sigma must lie in (0, 1)");
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw DomainError("epsilon must lie in (0, 1/2)");
  if (epsilon * p < 1.0) throw DomainError("side condition eps*p >= 1 fails");
  if (epsilon * p > p - 1.0) throw DomainError("side condition eps*p <= p-1 fails");
  if (2.0 * epsilon * k >= 1.0) throw DomainError("side condition 2*eps*k < 1 fails");
  EKParams e;
  e.sigma = sigma;
  e.epsilon = epsilon;
  e.lambda = kl_bernoulli(sigma, epsilon) / std::log(p);
  e.delta = sigma * std::log(epsilon * (p - k)) / std::log(p);
  e.chernoff_valid = sigma < 1.0 - 2.0 * epsilon;
  return e;
}

bool ek_certifies(const EKParams& e, int p, int k) {
  const double lambda = e.certified_lambda();
  return e.delta > 0.5 && lambda > 0.0 && std::log(p - k) / std::log(p) + lambda > 1.0;
}

std::optional<std::int64_t> ek_threshold(int k, double sigma, double epsilon, std::int64_t p_lo,
                                         std::int64_t p_hi) {
  for (std::int64_t p = std::max<std::int64_t>(p_lo, 3); p <= p_hi; ++p) {
    EKParams e;
    try {
      e = ek_parameters(static_cast<int>(p), k, sigma, epsilon);
    } catch (const DomainError&) {
      continue;
    }
    if (ek_certifies(e, static_cast<int>(p), k)) return p;
  }
  return std::nullopt;
}

double dd_exponent(double sigma, double a, double epsilon) {
  if (!(a > 0.0 && a < 1.0)) throw DomainError("contraction ratio must lie in (0, 1)");
  if (!(sigma > 0.0 && sigma < 1.0)) throw DomainError("sigma must lie in (0, 1)");
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw DomainError("epsilon must lie in (0, 1/2)");
  const double h = -sigma * std::log(sigma) - (1.0 - sigma) * std::log(1.0 - sigma);
  const double inv = 1.0 / a;
  const double good = std::floor(inv * (1.0 - 2.0 * epsilon)) + 1.0;
  const double bad = std::floor(inv * 2.0 * epsilon) + 1.0;
  return (h + sigma * std::log(good) + (1.0 - sigma) * std::log(bad)) / -std::log(a);
}

double dd_lambda(double sigma, double a, double epsilon) {
  return std::max(0.0, 1.0 - dd_exponent(sigma, a, epsilon));
}

int good_digit_count(std::int64_t xi, int p, double epsilon, int t) {
  std::uint64_t u = xi < 0 ? static_cast<std::uint64_t>(-(xi + 1)) + 1 : static_cast<std::uint64_t>(xi);
  int good = 0;
  for (int j = 0; j < t; ++j) {
    const auto d = static_cast<double>(u % static_cast<std::uint64_t>(p));
    u /= static_cast<std::uint64_t>(p);
    if (d >= epsilon * p && d + 1.0 <= (1.0 - epsilon) * p) ++good;
  }
  return good;
}

double decay_bound(int p, int k, double epsilon, int good) {
  const double per_digit = (1.0 / (2.0 * epsilon) + k) / (p - k);
  return std::pow(per_digit, good);
}

std::vector<Enclosure> cell_infima(const DigitMeasure& m, int k, int samples_per_cell) {
  if (m.dim() != 1) throw DomainError("cell discretization needs a 1D measure");
  if (k < 1) throw DomainError("level k must be at least 1");
  if (samples_per_cell < 2) throw DomainError("samples_per_cell must be at least 2");
  const std::int64_t cells = checked_power(m.base(), k);
  const detail::SymbolEvaluator ev(m);
  const double log_p = std::log(m.base());
  const double slack = lipschitz_constant(m) / (2.0 * static_cast<double>(cells) * samples_per_cell);
  const double total = static_cast<double>(cells) * samples_per_cell;
  const double rounding = ev.rounding_bound();

  std::vector<Enclosure> out(static_cast<std::size_t>(cells));
  parallel_for(out.size(), [&](std::size_t j) {
    double best = 0.0;
    const double base_index = static_cast<double>(j) * samples_per_cell;
    for (int s = 0; s < samples_per_cell; ++s) {
      best = std::max(best, std::abs(ev.eval_1d((base_index + s + 0.5) / total)));
    }
    const double s_lo = std::max(best - rounding, std::numeric_limits<double>::min());
    const double s_hi = std::min(1.0, best + slack + rounding);
    out[j] = {-std::log(s_hi) / log_p, -std::log(s_lo) / log_p};
  });
  return out;
}

CellStats stats_from_cells(const std::vector<Enclosure>& cells, int k, int samples_per_cell) {
  const std::size_t n = cells.size();
  if (n < 2) throw DomainError("need at least two cells");
  std::vector<double> lo(n), hi(n);
  for (std::size_t j = 0; j < n; ++j) {
    lo[j] = cells[j].lo;
    hi[j] = cells[j].hi;
  }
  CellStats s;
  s.level = k;
  s.samples_per_cell = samples_per_cell;
  s.m_lo = pairwise_sum(lo) / static_cast<double>(n);
  s.m_hi = pairwise_sum(hi) / static_cast<double>(n);
  s.c_hi = *std::max_element(hi.begin(), hi.end());
  std::vector<double> dev(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = hi[j] - s.m_lo;
    const double b = s.m_hi - lo[j];
    dev[j] = std::max(a * a, b * b);
  }
  s.var_hi = pairwise_sum(dev) / static_cast<double>(n - 1);
  return s;
}

CellStats discretized_stats(const DigitMeasure& m, int k, int samples_per_cell) {
  return stats_from_cells(cell_infima(m, k, samples_per_cell), k, samples_per_cell);
}

double bernstein_residue_bound(const CellStats& stats, int base, double Delta) {
  if (Delta < 0.5) throw DomainError("decay threshold must be at least 1/2");
  const double gap = stats.m_lo - Delta;
  if (gap <= 0.0) return 0.0;
  const double k = stats.level;
  return (gap * gap / 2.0) / (k * stats.var_hi + k * stats.c_hi * gap / 3.0) / std::log(base);
}

int default_samples_per_cell(int base, int k) {
  const double cells = std::pow(static_cast<double>(base), k);
  const double target = 4e6 / cells;
  int s = 64;
  while (s < 4096 && 2.0 * s <= target) s *= 2;
  return s;
}

int default_k_max(int base) {
  int k = 0;
  std::int64_t n = 1;
  while (k < 8 && n * base <= 6561) {
    n *= base;
    ++k;
  }
  return std::max(1, k);
}

double lyapunov_integral(const DigitMeasure& m, std::size_t points) {
  if (m.dim() != 1) throw DomainError("the Lyapunov function is defined for 1D measures");
  if (points < 1) throw DomainError("need at least one quadrature point");
  const detail::SymbolEvaluator ev(m);
  const double log_p = std::log(m.base());
  const double n = static_cast<double>(points);
  const double fallback = -std::log(std::min(1.0, lipschitz_constant(m) / (2.0 * n))) / log_p;
  return deterministic_sum(points, [&](std::size_t i) {
           const double a = std::abs(ev.eval_1d((static_cast<double>(i) + 0.5) / n));
           return a > 0.0 ? -std::log(a) / log_p : fallback;
         }) /
         n;
}

Certificate certify_spectral_thick(const DigitMeasure& m, const CertifyOptions& opts) {
  if (m.dim() != 1) throw DomainError("certification needs a 1D measure");
  const int p = m.base();
  const auto k_missing = static_cast<int>(m.missing_count());

  Certificate cert;
  cert.measure = m.describe();
  cert.dim_H = hausdorff_dimension(m);
  cert.dim_l2 = l2_dimension(m);

  std::vector<double> delta_grid = opts.delta_grid;
  if (delta_grid.empty())
    for (int i = 0; i <= 90; ++i) delta_grid.push_back((100.0 + i) / 200.0);
  std::vector<double> sigma_grid = opts.sigma_grid;
  if (sigma_grid.empty())
    for (int i = 0; i <= 9; ++i) sigma_grid.push_back((90.0 + i) / 100.0);
  std::vector<double> epsilon_grid = opts.epsilon_grid;
  if (epsilon_grid.empty())
    for (int j = 1; 2 * j < p; ++j) epsilon_grid.push_back(static_cast<double>(j) / p);

  struct Candidate {
    bool analytic;
    double delta;
    double lambda;
    int k;
    double sigma;
    double epsilon;
    CellStats stats;
  };
  std::vector<Candidate> cands;

  if (opts.route != Route::kNumeric && m.uniform() && k_missing >= 1 && k_missing <= p - 2) {
    for (double sigma : sigma_grid) {
      for (double eps : epsilon_grid) {
        EKParams e;
        try {
          e = ek_parameters(p, k_missing, sigma, eps);
        } catch (const DomainError&) {
          continue;
        }
        cands.push_back({true, e.delta, e.certified_lambda(), 0, sigma, eps, {}});
      }
    }
  }

  if (opts.route != Route::kAnalytic) {
    const int k_max = opts.k_max > 0 ? opts.k_max : default_k_max(p);
    std::uint64_t used = 0;
    for (int k = 1; k <= k_max; ++k) {
      const int S = opts.samples_per_cell > 0 ? opts.samples_per_cell : default_samples_per_cell(p, k);
      const double cost = std::pow(static_cast<double>(p), k) * S;
      if (static_cast<double>(used) + cost > static_cast<double>(opts.evaluation_budget)) break;
      used += static_cast<std::uint64_t>(cost);
      const CellStats stats = discretized_stats(m, k, S);
      cert.levels.push_back(stats);
      if (stats.m_lo <= 0.5) continue;
      for (double delta : delta_grid) {
        if (delta < 0.5 || delta >= stats.m_lo) continue;
        cands.push_back({false, delta, bernstein_residue_bound(stats, p, delta), k, 0.0, 0.0, stats});
      }
    }
  }

  const Candidate* witness = nullptr;
  const Candidate* st_best = nullptr;
  double st_value = 0.0;
  for (const auto& c : cands) {
    if (c.delta > 0.5 && c.lambda > 0.0) cert.spectral = true;
  }
  if (cert.spectral) {
    for (const auto& c : cands) {
      if (c.delta < 0.5 || !(c.lambda > 0.0)) continue;
      if (!witness || c.lambda > witness->lambda) witness = &c;
      const double st = std::min(c.delta, 0.5 * (c.lambda + cert.dim_l2));
      if (!st_best || st > st_value) {
        st_best = &c;
        st_value = st;
      }
    }
  }

  if (witness) {
    cert.route = witness->analytic ? "analytic-EK" : "numeric-Bernstein";
    cert.dim_R_lb = witness->lambda;
    cert.k = witness->k;
    if (witness->analytic) {
      cert.sigma = witness->sigma;
      cert.epsilon = witness->epsilon;
    } else {
      cert.enclosures = witness->stats;
    }
    cert.dim_ST_lb = st_value;
    cert.delta_grid_argmax = st_best->delta;
  } else {
    cert.route = opts.route == Route::kAnalytic ? "analytic-EK"
                 : opts.route == Route::kNumeric ? "numeric-Bernstein"
                                                 : "best-of-both";
    if (!cert.levels.empty()) {
      cert.k = cert.levels.back().level;
      cert.enclosures = cert.levels.back();
    }
  }
  cert.thick = cert.spectral && cert.dim_l2 + cert.dim_R_lb > 1.0;
  cert.dim_l1_lb = std::max(cert.dim_ST_lb, 0.5 * cert.dim_l2);
  return cert;
}

double gcp_threshold(double dim_l1) {
  if (!(dim_l1 > 0.0 && dim_l1 < 1.0)) throw DomainError("dim_l1 must lie in (0, 1)");
  return dim_l1 / (1.0 - dim_l1);
}

NdConditions nd_conditions(int n, double dim_H, double lambda, double Delta) {
  if (n < 1) throw DomainError("dimension n must be at least 1");
  const double nn = n;
  return {Delta > nn / (nn + 1.0), dim_H > nn - lambda, dim_H > nn * nn / (nn + 1.0)};
}

NdExample nd_one_missing_example(int n, std::int64_t p) {
  if (n < 1) throw DomainError("dimension n must be at least 1");
  if (p < 3) throw DomainError("base must be at least 3");
  const double sigma = (n + 1.0) / (n + 2.0);
  const double eps = (1.0 - sigma) / 4.0;
  const double log_p = std::log(static_cast<double>(p));
  const double tail = std::log1p(-std::pow(static_cast<double>(p), -n));  // log(1 - p^{-n})
  NdExample ex;
  ex.p = p;
  ex.dim_H = n + tail / log_p;
  ex.lambda = kl_bernoulli(sigma, eps) / log_p;
  ex.delta = sigma * (std::log(eps) + log_p + tail) / log_p;
  ex.conditions = nd_conditions(n, ex.dim_H, ex.lambda, ex.delta);
  return ex;
}

NdExample nd_smallest_base(int n) {
  if (nd_one_missing_example(n, 3).conditions.all()) return nd_one_missing_example(n, 3);
  std::int64_t lo = 3;
  std::int64_t hi = 4;
  while (!nd_one_missing_example(n, hi).conditions.all()) {
    lo = hi;
    if (hi > (std::int64_t{1} << 61)) throw BudgetExceeded("no admissible base below 2^62");
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    (nd_one_missing_example(n, mid).conditions.all() ? hi : lo) = mid;
  }
  return nd_one_missing_example(n, hi);
}

}  // namespace mdm
