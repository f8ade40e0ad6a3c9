#include "mdm/dioph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mdm/lattice.hpp"
#include "mdm/parallel.hpp"

namespace mdm {

ApproxFunction ApproxFunction::power(double c, double nu) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("power law constant must be positive");
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw DomainError("power law exponent must be nonnegative");
  ApproxFunction f;
  f.kind_ = Kind::kPower;
  f.c_ = c;
  f.nu_ = nu;
  return f;
}

ApproxFunction ApproxFunction::loglog() {
  ApproxFunction f;
  f.kind_ = Kind::kLogLog;
  return f;
}

ApproxFunction ApproxFunction::table(std::vector<double> values) {
  if (values.empty()) throw DomainError("table must have at least one value");
  ApproxFunction f;
  f.kind_ = Kind::kTable;
  f.values_ = std::move(values);
  return f;
}

std::int64_t ApproxFunction::q_max() const {
  return kind_ == Kind::kTable ? static_cast<std::int64_t>(values_.size())
                               : std::numeric_limits<std::int64_t>::max();
}

double ApproxFunction::operator()(std::int64_t q) const {
  if (q < q_min() || q > q_max()) throw DomainError("approximation function queried outside its range");
  const double qd = static_cast<double>(q);
  switch (kind_) {
    case Kind::kPower: return c_ * std::pow(qd, -nu_);
    case Kind::kLogLog: return std::min(0.5, 1.0 / (qd * std::log(std::log(qd))));
    case Kind::kTable: return values_[static_cast<std::size_t>(q - 1)];
  }
  return 0.0;
}

std::string ApproxFunction::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::kPower: os << "power(c=" << c_ << ",nu=" << nu_ << ")"; break;
    case Kind::kLogLog: os << "loglog"; break;
    case Kind::kTable: os << "table(" << values_.size() << ")"; break;
  }
  return os.str();
}

void ApproxFunction::check_range(std::int64_t Q) const {
  if (Q > q_max()) throw DomainError("table is shorter than the requested range");
  for (std::int64_t q = q_min(); q <= Q; ++q) {
    const double v = (*this)(q);
    if (!(v > 0.0 && v <= 0.5)) {
      throw DomainError("psi(" + std::to_string(q) + ") lies outside (0, 1/2]", static_cast<int>(q));
    }
    // The two closed forms are monotone, so the first in-range value bounds the rest.
    if (kind_ != Kind::kTable) break;
  }
}

bool ApproxFunction::monotone_up_to(std::int64_t Q) const {
  if (kind_ != Kind::kTable) return true;
  for (std::int64_t q = q_min() + 1; q <= std::min(Q, q_max()); ++q)
    if ((*this)(q) > (*this)(q - 1)) return false;
  return true;
}

KhinchineTable khinchine_partial_sums(const DigitMeasure& m, const ApproxFunction& psi,
                                      std::int64_t Q_max, const Eigen::VectorXd& gamma,
                                      double tol, double threshold, std::uint64_t budget) {
  if (Q_max < 10) throw DomainError("Q_max must be at least 10");
  if (gamma.size() != m.dim()) throw DomainError("gamma dimension does not match the measure");
  psi.check_range(Q_max);
  if (budget == 0) budget = default_budget();

  KhinchineTable table;
  if (!psi.monotone_up_to(Q_max)) table.warnings.push_back("psi table is not nonincreasing");

  const std::int64_t q0 = psi.q_min();
  const auto count = static_cast<std::size_t>(Q_max - q0 + 1);
  std::uint64_t boxes = 0;
  for (std::int64_t q = q0; q <= Q_max; ++q) {
    const double d = psi(q);
    if (d < 0.5) boxes += target_box_count(d, q, gamma);
  }
  if (boxes > budget) throw BudgetExceeded("Khinchine sums need " + std::to_string(boxes) + " boxes");

  const int n = m.dim();
  std::vector<double> mu(count), ps(count);
  parallel_for(count, [&](std::size_t i) {
    const std::int64_t q = q0 + static_cast<std::int64_t>(i);
    const double d = psi(q);
    ps[i] = std::pow(d, n);
    // ‖qx-γ‖ <= 1/2 holds everywhere.
    mu[i] = d >= 0.5 ? 1.0 : lattice_measure(m, d, q, gamma, tol);
  });

  std::vector<double> cum(count);
  double s_mu = 0.0, s_psi = 0.0;
  std::int64_t next_checkpoint = 1;
  while (next_checkpoint < q0) next_checkpoint *= 2;
  for (std::size_t i = 0; i < count; ++i) {
    const std::int64_t q = q0 + static_cast<std::int64_t>(i);
    s_mu += mu[i];
    s_psi += ps[i];
    cum[i] = s_mu;
    if (q == next_checkpoint || q == Q_max) {
      table.rows.push_back({q, s_psi, s_mu});
      if (q == next_checkpoint) next_checkpoint *= 2;
    }
  }
  const std::int64_t tenth = Q_max / 10;
  const double before = tenth >= q0 ? cum[static_cast<std::size_t>(tenth - q0)] : 0.0;
  table.last_decade_fraction = s_mu > 0.0 ? (s_mu - before) / s_mu : 0.0;
  table.bounded = table.last_decade_fraction < threshold;
  return table;
}

JarnikExponents jarnik_exponents(double s, int n, double c_prime) {
  if (n < 1) throw DomainError("dimension n must be at least 1");
  if (!(s > 0.0 && s <= n)) throw DomainError("s must lie in (0, n]");
  if (!(c_prime > 0.0)) throw DomainError("c' must be positive");
  JarnikExponents out;
  out.upper_jarnik1 = std::max(0.0, s - n * c_prime / (1.0 / n + c_prime + 1.0));
  out.value_jarnik24 = std::max(0.0, s - c_prime / (2.0 + c_prime));
  return out;
}

Jarnik4Verdict jarnik4_applicability(double dim_l1_lb, double dim_H) {
  if (!(dim_l1_lb > 0.0 && dim_l1_lb <= 1.0) || !(dim_H > 0.0 && dim_H <= 1.0)) {
    throw DomainError("dimensions must lie in (0, 1]");
  }
  const double prod = dim_l1_lb * dim_H;
  Jarnik4Verdict v;
  v.applies = prod > 0.5;
  if (!v.applies) {
    v.c_star = 0.0;
  } else if (prod >= 1.0) {
    v.c_star = std::numeric_limits<double>::infinity();
  } else {
    v.c_star = (2.0 * prod - 1.0) / (1.0 - prod);
  }
  return v;
}

std::vector<HitFraction> hit_statistics_curve(const DigitMeasure& m, const ApproxFunction& psi,
                                              const std::vector<std::int64_t>& Q_values,
                                              std::size_t n_points, int depth, std::uint64_t seed,
                                              double gamma) {
  if (m.dim() != 1) throw DomainError("hit statistics are 1D");
  if (n_points < 100) throw DomainError("need at least 100 sample points");
  if (Q_values.empty()) return {};
  const std::int64_t q0 = psi.q_min();
  const std::int64_t top = *std::max_element(Q_values.begin(), Q_values.end());
  if (top < q0) throw DomainError("Q_max lies below the first admissible denominator");
  psi.check_range(top);

  std::vector<double> psi_q(static_cast<std::size_t>(top - q0 + 1));
  for (std::int64_t q = q0; q <= top; ++q) psi_q[static_cast<std::size_t>(q - q0)] = psi(q);

  constexpr std::int64_t kNever = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int64_t> first_hit(n_points, kNever);
  parallel_for(n_points, [&](std::size_t i) {
    const ExactPoint x = sample_point_exact(m, depth, derive_seed(seed, i));
    const auto num = static_cast<unsigned __int128>(x.numerator);
    const auto den = static_cast<unsigned __int128>(x.denominator);
    const double dd = static_cast<double>(x.denominator);
    for (std::int64_t q = q0; q <= top; ++q) {
      const auto r = static_cast<double>(static_cast<std::uint64_t>((num * static_cast<unsigned __int128>(q)) % den));
      const double y = r / dd - gamma;
      if (std::abs(y - std::nearbyint(y)) <= psi_q[static_cast<std::size_t>(q - q0)]) {
        first_hit[i] = q;
        break;
      }
    }
  });

  std::vector<HitFraction> out;
  const double n = static_cast<double>(n_points);
  for (std::int64_t Q : Q_values) {
    const auto hits = std::count_if(first_hit.begin(), first_hit.end(), [Q](std::int64_t h) { return h <= Q; });
    const double f = static_cast<double>(hits) / n;
    out.push_back({Q, f, std::sqrt(f * (1.0 - f) / n)});
  }
  return out;
}

HitFraction hit_statistics(const DigitMeasure& m, const ApproxFunction& psi, std::int64_t Q_max,
                           std::size_t n_points, int depth, std::uint64_t seed, double gamma) {
  return hit_statistics_curve(m, psi, {Q_max}, n_points, depth, seed, gamma).front();
}

}  // namespace mdm
