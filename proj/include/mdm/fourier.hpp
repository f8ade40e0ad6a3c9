#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "mdm/measure.hpp"

namespace mdm {

inline constexpr double kDefaultTailTol = 1e-10;

/// Fourier coefficient with a certified bound |true - value| <= error_radius.
struct FourierValue {
  std::complex<double> value{1.0, 0.0};
  double error_radius = 0.0;

  double abs() const { return std::abs(value); }
  double abs_upper() const { return std::abs(value) + error_radius; }
};

/// f(θ) = Σ w_i exp(-2πi (a_i, θ)).
std::complex<double> symbol(const DigitMeasure& m, const Eigen::VectorXd& theta);
std::complex<double> symbol_1d(const DigitMeasure& m, double theta);

/// μ̂(ξ) = ∏_{j>=1} f(ξ / p^j), truncated at the first J whose tail bound
/// 2π (Σ w_i |a_i|_1) |ξ|_∞ p^{-J} / (p-1) drops below tail_tol.
/// error_radius = expm1(tail bound) + accumulated rounding.
FourierValue fourier_coefficient(const DigitMeasure& m, const IntVector& xi,
                                 double tail_tol = kDefaultTailTol);
FourierValue fourier_coefficient_1d(const DigitMeasure& m, std::int64_t xi,
                                    double tail_tol = kDefaultTailTol);

namespace detail {
class SymbolEvaluator;
}

/// Reusable evaluator for many coefficients of one measure.
class CoefficientEngine {
 public:
  CoefficientEngine(const DigitMeasure& m, double tail_tol = kDefaultTailTol);
  ~CoefficientEngine();
  CoefficientEngine(const CoefficientEngine&) = delete;
  CoefficientEngine& operator=(const CoefficientEngine&) = delete;

  FourierValue at(std::int64_t xi) const;
  FourierValue at(const IntVector& xi) const;

 private:
  DigitMeasure m_;
  double tail_tol_;
  std::unique_ptr<detail::SymbolEvaluator> ev_;
};

/// Number of product factors used for frequency sup-norm xi_inf.
int truncation_depth(const DigitMeasure& m, double xi_inf, double tail_tol);

/// φ(x) = -log|f(x)| / log p; +inf where f vanishes. 1D only.
double lyapunov(const DigitMeasure& m, double x);

struct PartialSumRow {
  std::int64_t R = 0;
  double sum = 0.0;
  /// OLS slope of log(sum) against log(R) over this and earlier rows.
  std::optional<double> exponent_estimate;
};

/// Σ_{0<|ξ|_∞<=R} |μ̂(ξ)|^q for each radius. The dim_{l^q} estimate is
/// dim - exponent_estimate. Throws BudgetExceeded if (2R+1)^n exceeds budget.
std::vector<PartialSumRow> partial_sums(const DigitMeasure& m, double q,
                                        const std::vector<std::int64_t>& radii,
                                        double tail_tol = kDefaultTailTol,
                                        std::uint64_t budget = 0);

struct CensusEntry {
  std::int64_t xi;
  double abs_coeff;
  double threshold;
};

struct ResidueCensus {
  std::int64_t count = 0;
  std::vector<CensusEntry> offenders;  // first offender_cap hits, increasing ξ
};

/// Counts ξ in [1, N] with |μ̂(ξ)| + error_radius >= ξ^{-Δ}. 1D only.
ResidueCensus residue_census(const DigitMeasure& m, std::int64_t N, double Delta,
                             double tail_tol = kDefaultTailTol,
                             std::size_t offender_cap = 1000);

/// Ordinary least-squares slope of y against x.
double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mdm
