#include "mdm/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "mdm/parallel.hpp"
#include "symbol.hpp"
#include "trig.hpp"

namespace mdm {
namespace detail {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kReanchor = 16;
}  // namespace

SymbolEvaluator::SymbolEvaluator(const DigitMeasure& m)
    : base_(m.base()), dim_(m.dim()), uniform_(m.uniform()), inv_r_(1.0 / m.size()) {
  const int r = m.size();
  first_moment_ = 0.0;
  for (int i = 0; i < r; ++i) first_moment_ += m.weights()[i] * m.digits().col(i).cast<double>().cwiseAbs().sum();

  if (dim_ == 1) {
    std::vector<int> order(r);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return m.digits()(0, a) < m.digits()(0, b); });
    for (int i : order) {
      digits_1d_.push_back(m.digits()(0, i));
      weights_1d_.push_back(m.weights()[i]);
    }
    missing_1d_ = m.missing_list();
    const auto k = static_cast<int>(missing_1d_.size());
    closed_form_ = uniform_ && r >= 16 && 4 * k < r;
    rounding_ = (64.0 + r + 4.0 * base_ / r + 8.0 * (closed_form_ ? k : 0)) * kEps;
  } else {
    digits_nd_.assign(m.digits().data(), m.digits().data() + m.digits().size());
    weights_nd_.assign(m.weights().data(), m.weights().data() + r);
    rounding_ = (64.0 + r + 16.0 * dim_) * kEps;
  }
}

std::complex<double> SymbolEvaluator::direct_1d(double t) const {
  std::complex<double> z;
  bool have_z = false;
  std::complex<double> acc{0.0, 0.0};
  std::complex<double> cur{1.0, 0.0};
  int prev = -2;
  for (std::size_t i = 0; i < digits_1d_.size(); ++i) {
    const int d = digits_1d_[i];
    if (d == prev + 1 && i % kReanchor != 0) {
      if (!have_z) {
        z = expm2pi(t);
        have_z = true;
      }
      cur = cmul(cur, z);
    } else {
      cur = expm2pi(d * t);
    }
    prev = d;
    if (uniform_) {
      acc += cur;
    } else {
      acc += weights_1d_[i] * cur;
    }
  }
  return uniform_ ? acc / static_cast<double>(digits_1d_.size()) : acc;
}

std::complex<double> SymbolEvaluator::closed_1d(double t) const {
  // Dirichlet kernel Σ_{d<p} e^{-2πidt} minus the missing terms.
  std::complex<double> full;
  if (t == 0.0) {
    full = {static_cast<double>(base_), 0.0};
  } else {
    double s1, c1, s0, c0;
    sincospi(base_ * t, s1, c1);
    sincospi(t, s0, c0);
    full = (s1 / s0) * expm2pi(0.5 * (base_ - 1) * t);
  }
  for (int d : missing_1d_) full -= expm2pi(d * t);
  return full / static_cast<double>(digits_1d_.size());
}

std::complex<double> SymbolEvaluator::eval_1d(double theta) const {
  const double t = theta - std::nearbyint(theta);
  return closed_form_ ? closed_1d(t) : direct_1d(t);
}

std::complex<double> SymbolEvaluator::eval(const double* theta) const {
  if (dim_ == 1) return eval_1d(theta[0]);
  std::complex<double> acc{0.0, 0.0};
  const auto r = weights_nd_.size();
  for (std::size_t i = 0; i < r; ++i) {
    double phase = 0.0;
    for (int c = 0; c < dim_; ++c) {
      const double tc = theta[c] - std::nearbyint(theta[c]);
      phase += digits_nd_[i * dim_ + c] * tc;
    }
    acc += weights_nd_[i] * expm2pi(phase);
  }
  return acc;
}

}  // namespace detail

namespace {

using detail::SymbolEvaluator;

double tail_bound(const SymbolEvaluator& ev, int base, double xi_inf, int J) {
  return 2.0 * std::numbers::pi * ev.first_moment() * xi_inf * std::pow(base, -J) / (base - 1);
}

int depth_for(const SymbolEvaluator& ev, int base, double xi_inf, double tail_tol) {
  const double x = 2.0 * std::numbers::pi * ev.first_moment() * xi_inf / ((base - 1) * tail_tol);
  int J = std::max(1, static_cast<int>(std::ceil(std::log(x) / std::log(base))));
  while (tail_bound(ev, base, xi_inf, J) >= tail_tol) ++J;
  while (J > 1 && tail_bound(ev, base, xi_inf, J - 1) < tail_tol) --J;
  return J;
}

void check_tail_tol(double tail_tol) {
  if (!(tail_tol > 0.0 && tail_tol < 0.5)) throw DomainError("tail_tol must lie in (0, 0.5)");
}

constexpr std::uint64_t kMaxFrequency = std::uint64_t{1} << 53;

FourierValue coefficient_1d(const SymbolEvaluator& ev, const DigitMeasure& m, std::int64_t xi,
                            double tail_tol) {
  if (xi == 0) return {};
  if (m.is_lebesgue()) return {{0.0, 0.0}, 0.0};
  const bool negative = xi < 0;
  const std::uint64_t u = negative ? static_cast<std::uint64_t>(-(xi + 1)) + 1 : static_cast<std::uint64_t>(xi);
  if (u > kMaxFrequency) throw DomainError("frequency magnitude exceeds 2^53");
  const int p = m.base();
  const double ud = static_cast<double>(u);
  const int J = depth_for(ev, p, ud, tail_tol);

  std::complex<double> prod{1.0, 0.0};
  std::uint64_t pw = 1;
  bool below = true;
  double den = 1.0;
  for (int j = 1; j <= J; ++j) {
    double t;
    if (below) {
      const unsigned __int128 next = static_cast<unsigned __int128>(pw) * static_cast<unsigned>(p);
      if (next <= u) {
        pw = static_cast<std::uint64_t>(next);
        const std::uint64_t rj = u % pw;
        t = 2 * rj > pw ? -static_cast<double>(pw - rj) / static_cast<double>(pw)
                        : static_cast<double>(rj) / static_cast<double>(pw);
      } else {
        below = false;
        den = static_cast<double>(next);
        t = ud / den;
      }
    } else {
      den *= p;
      t = ud / den;
    }
    prod = detail::cmul(prod, ev.eval_1d(t));
    if (prod == std::complex<double>{0.0, 0.0}) break;
  }
  const double err = std::expm1(tail_bound(ev, p, ud, J)) + J * ev.rounding_bound();
  return {negative ? std::conj(prod) : prod, err};
}

FourierValue coefficient_nd(const SymbolEvaluator& ev, const DigitMeasure& m, const IntVector& xi,
                            double tail_tol) {
  if (m.dim() == 1) return coefficient_1d(ev, m, xi[0], tail_tol);
  if (xi.isZero()) return {};
  if (m.is_lebesgue()) return {{0.0, 0.0}, 0.0};

  // Canonical sign: first nonzero coordinate positive; the other half by conjugation.
  IntVector v = xi;
  bool flip = false;
  for (Eigen::Index c = 0; c < v.size(); ++c) {
    if (v[c] != 0) {
      flip = v[c] < 0;
      break;
    }
  }
  if (flip) v = -v;
  std::int64_t umax = 0;
  for (Eigen::Index c = 0; c < v.size(); ++c) {
    const std::int64_t a = v[c] < 0 ? -v[c] : v[c];
    if (static_cast<std::uint64_t>(a) > kMaxFrequency) throw DomainError("frequency magnitude exceeds 2^53");
    umax = std::max(umax, a);
  }

  const int p = m.base();
  const int n = m.dim();
  const int J = depth_for(ev, p, static_cast<double>(umax), tail_tol);
  std::vector<double> t(n);
  std::complex<double> prod{1.0, 0.0};
  std::int64_t pw = 1;
  bool below = true;
  double den = 1.0;
  for (int j = 1; j <= J; ++j) {
    if (below && static_cast<__int128>(pw) * p <= umax) {
      pw *= p;
      for (int c = 0; c < n; ++c) {
        std::int64_t rc = v[c] % pw;
        if (rc < 0) rc += pw;
        t[c] = 2 * rc > pw ? -static_cast<double>(pw - rc) / static_cast<double>(pw)
                           : static_cast<double>(rc) / static_cast<double>(pw);
      }
    } else {
      den = below ? static_cast<double>(pw) * p : den * p;
      below = false;
      for (int c = 0; c < n; ++c) t[c] = static_cast<double>(v[c]) / den;
    }
    prod = detail::cmul(prod, ev.eval(t.data()));
    if (prod == std::complex<double>{0.0, 0.0}) break;
  }
  const double err = std::expm1(tail_bound(ev, p, static_cast<double>(umax), J)) + J * ev.rounding_bound();
  return {flip ? std::conj(prod) : prod, err};
}

}  // namespace

std::complex<double> symbol(const DigitMeasure& m, const Eigen::VectorXd& theta) {
  if (theta.size() != m.dim()) throw DomainError("frequency dimension does not match the measure");
  return SymbolEvaluator(m).eval(theta.data());
}

std::complex<double> symbol_1d(const DigitMeasure& m, double theta) {
  if (m.dim() != 1) throw DomainError("symbol_1d needs a 1D measure");
  return SymbolEvaluator(m).eval_1d(theta);
}

int truncation_depth(const DigitMeasure& m, double xi_inf, double tail_tol) {
  check_tail_tol(tail_tol);
  return depth_for(SymbolEvaluator(m), m.base(), xi_inf, tail_tol);
}

FourierValue fourier_coefficient_1d(const DigitMeasure& m, std::int64_t xi, double tail_tol) {
  check_tail_tol(tail_tol);
  if (m.dim() != 1) throw DomainError("fourier_coefficient_1d needs a 1D measure");
  return coefficient_1d(SymbolEvaluator(m), m, xi, tail_tol);
}

FourierValue fourier_coefficient(const DigitMeasure& m, const IntVector& xi, double tail_tol) {
  check_tail_tol(tail_tol);
  if (xi.size() != m.dim()) throw DomainError("frequency dimension does not match the measure");
  return coefficient_nd(SymbolEvaluator(m), m, xi, tail_tol);
}

CoefficientEngine::CoefficientEngine(const DigitMeasure& m, double tail_tol)
    : m_(m), tail_tol_(tail_tol), ev_(std::make_unique<SymbolEvaluator>(m)) {
  check_tail_tol(tail_tol);
}

CoefficientEngine::~CoefficientEngine() = default;

FourierValue CoefficientEngine::at(std::int64_t xi) const {
  if (m_.dim() != 1) throw DomainError("scalar frequency needs a 1D measure");
  return coefficient_1d(*ev_, m_, xi, tail_tol_);
}

FourierValue CoefficientEngine::at(const IntVector& xi) const {
  if (xi.size() != m_.dim()) throw DomainError("frequency dimension does not match the measure");
  return coefficient_nd(*ev_, m_, xi, tail_tol_);
}

double lyapunov(const DigitMeasure& m, double x) {
  const double a = std::abs(symbol_1d(m, x));
  if (a == 0.0) return std::numeric_limits<double>::infinity();
  return std::max(0.0, -std::log(a) / std::log(m.base()));
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("slope fit needs at least two points");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd A(n, 2);
  A.col(0).setOnes();
  A.col(1) = Eigen::Map<const Eigen::VectorXd>(x.data(), n);
  const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
  return A.colPivHouseholderQr().solve(b)[1];
}

std::vector<PartialSumRow> partial_sums(const DigitMeasure& m, double q,
                                        const std::vector<std::int64_t>& radii, double tail_tol,
                                        std::uint64_t budget) {
  check_tail_tol(tail_tol);
  if (!(q > 0.0)) throw DomainError("exponent q must be positive");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] < 1 || (i > 0 && radii[i] <= radii[i - 1])) {
      throw DomainError("radii must be positive and strictly increasing", static_cast<int>(i));
    }
  }
  if (radii.empty()) return {};
  if (budget == 0) budget = default_budget();
  const int n = m.dim();
  const double side = 2.0 * static_cast<double>(radii.back()) + 1.0;
  if (std::pow(side, n) > static_cast<double>(budget)) {
    throw BudgetExceeded("partial sums up to R=" + std::to_string(radii.back()) +
                         " exceed the term budget");
  }

  const SymbolEvaluator ev(m);
  auto power = [q](double a) { return q == 1.0 ? a : q == 2.0 ? a * a : std::pow(a, q); };

  std::vector<PartialSumRow> rows;
  std::vector<double> log_r, log_s;
  double total = 0.0;
  std::int64_t prev = 0;
  for (std::int64_t R : radii) {
    double shell;
    if (n == 1) {
      shell = 2.0 * deterministic_sum(static_cast<std::size_t>(R - prev), [&](std::size_t i) {
        return power(std::abs(coefficient_1d(ev, m, prev + 1 + static_cast<std::int64_t>(i), tail_tol).value));
      });
    } else {
      const std::int64_t w = 2 * R + 1;
      std::size_t count = 1;
      for (int c = 0; c < n; ++c) count *= static_cast<std::size_t>(w);
      shell = deterministic_sum(count, [&](std::size_t idx) {
        IntVector xi(n);
        std::int64_t inf = 0;
        for (int c = 0; c < n; ++c) {
          xi[c] = static_cast<std::int64_t>(idx % static_cast<std::size_t>(w)) - R;
          idx /= static_cast<std::size_t>(w);
          inf = std::max(inf, xi[c] < 0 ? -xi[c] : xi[c]);
        }
        if (inf <= prev) return 0.0;
        return power(std::abs(coefficient_nd(ev, m, xi, tail_tol).value));
      });
    }
    total += shell;
    prev = R;
    PartialSumRow row{R, total, std::nullopt};
    if (total > 0.0) {
      log_r.push_back(std::log(static_cast<double>(R)));
      log_s.push_back(std::log(total));
      if (log_r.size() >= 2) row.exponent_estimate = least_squares_slope(log_r, log_s);
    }
    rows.push_back(row);
  }
  return rows;
}

ResidueCensus residue_census(const DigitMeasure& m, std::int64_t N, double Delta, double tail_tol,
                             std::size_t offender_cap) {
  check_tail_tol(tail_tol);
  if (m.dim() != 1) throw DomainError("residue census needs a 1D measure");
  if (N < 2) throw DomainError("census range N must be at least 2");
  if (!(Delta > 0.0)) throw DomainError("decay exponent must be positive");
  const SymbolEvaluator ev(m);
  constexpr std::int64_t kBlock = 4096;
  const auto blocks = static_cast<std::size_t>((N + kBlock - 1) / kBlock);
  std::vector<std::int64_t> counts(blocks, 0);
  std::vector<std::vector<CensusEntry>> hits(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    const std::int64_t lo = 1 + static_cast<std::int64_t>(b) * kBlock;
    const std::int64_t hi = std::min(N, lo + kBlock - 1);
    for (std::int64_t xi = lo; xi <= hi; ++xi) {
      const FourierValue v = coefficient_1d(ev, m, xi, tail_tol);
      const double threshold = std::pow(static_cast<double>(xi), -Delta);
      if (v.abs_upper() >= threshold) {
        ++counts[b];
        if (hits[b].size() < offender_cap) hits[b].push_back({xi, v.abs(), threshold});
      }
    }
  });
  ResidueCensus out;
  for (std::size_t b = 0; b < blocks; ++b) {
    out.count += counts[b];
    for (const auto& e : hits[b]) {
      if (out.offenders.size() >= offender_cap) break;
      out.offenders.push_back(e);
    }
  }
  return out;
}

}  // namespace mdm
