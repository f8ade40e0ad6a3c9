#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdm/measure.hpp"

namespace mdm {

/// Approximation function ψ on denominators q >= q_min().
class ApproxFunction {
 public:
  enum class Kind { kPower, kLogLog, kTable };

  /// ψ(q) = c·q^{-ν}
  static ApproxFunction power(double c, double nu);
  /// ψ(q) = min(1/2, 1/(q log log q)), defined from q = 3. Values above 1/2
  /// describe the same set as 1/2, since ‖·‖ never exceeds 1/2.
  static ApproxFunction loglog();
  /// ψ(q) = values[q-1]
  static ApproxFunction table(std::vector<double> values);

  Kind kind() const { return kind_; }
  std::int64_t q_min() const { return kind_ == Kind::kLogLog ? 3 : 1; }
  /// Largest q the function is defined at (tables only; otherwise INT64_MAX).
  std::int64_t q_max() const;
  double operator()(std::int64_t q) const;
  std::string describe() const;

  /// Throws DomainError unless ψ(q) is in (0, 1/2] for every q in [q_min, Q].
  void check_range(std::int64_t Q) const;
  /// Nonincreasing on [q_min, Q]. Always true for the power and loglog kinds.
  bool monotone_up_to(std::int64_t Q) const;

 private:
  Kind kind_ = Kind::kPower;
  double c_ = 1.0;
  double nu_ = 1.0;
  std::vector<double> values_;
};

struct KhinchineRow {
  std::int64_t Q = 0;
  double psi_sum = 0.0;    // Σ_{q<=Q} ψ(q)^n
  double mu_series = 0.0;  // Σ_{q<=Q} μ(A(ψ(q), q, γ))
};

/// Empirical only: a truncation of a limsup statement.
struct KhinchineTable {
  std::vector<KhinchineRow> rows;  // at powers of two and at Q_max
  double last_decade_fraction = 0.0;  // (S(Q_max) - S(Q_max/10)) / S(Q_max)
  bool bounded = false;               // last_decade_fraction < threshold
  std::vector<std::string> warnings;
};

KhinchineTable khinchine_partial_sums(const DigitMeasure& m, const ApproxFunction& psi,
                                      std::int64_t Q_max, const Eigen::VectorXd& gamma,
                                      double tol = 1e-12, double threshold = 0.1,
                                      std::uint64_t budget = 0);

struct JarnikExponents {
  double upper_jarnik1 = 0.0;   // s - n c'/(1/n + c' + 1)
  double value_jarnik24 = 0.0;  // s - c'/(2 + c')
};

JarnikExponents jarnik_exponents(double s, int n, double c_prime);

struct Jarnik4Verdict {
  bool applies = false;
  double c_star = 0.0;  // +inf when s·s1 >= 1
};

Jarnik4Verdict jarnik4_applicability(double dim_l1_lb, double dim_H);

struct HitFraction {
  std::int64_t Q_max = 0;
  double fraction = 0.0;
  double stderr_ = 0.0;  // binomial standard error
};

/// Fraction of μ-sampled x with ‖qx - γ‖ <= ψ(q) for some q in [q_min, Q_max].
/// Points are exact base-p rationals, so the test is done in integers.
HitFraction hit_statistics(const DigitMeasure& m, const ApproxFunction& psi, std::int64_t Q_max,
                           std::size_t n_points, int depth, std::uint64_t seed, double gamma = 0.0);

/// The same sample evaluated at several Q_max values in one pass.
std::vector<HitFraction> hit_statistics_curve(const DigitMeasure& m, const ApproxFunction& psi,
                                              const std::vector<std::int64_t>& Q_values,
                                              std::size_t n_points, int depth, std::uint64_t seed,
                                              double gamma = 0.0);

}  // namespace mdm
