#pragma once

#include <cstdint>
#include <vector>

#include "mdm/fourier.hpp"
#include "mdm/measure.hpp"

namespace mdm {

/// Components of {x in [0,1]^n : ‖qx - γ‖_∞ <= δ}, one box per lattice point
/// k in Z^n: ∏_c [(k_c+γ_c-δ)/q, (k_c+γ_c+δ)/q] clipped to [0,1].
struct TargetSet {
  double delta = 0.0;
  std::int64_t q = 1;
  Eigen::VectorXd gamma;
  std::vector<Box> boxes;
};

/// Rejects δ outside (0, 1/2) and q < 1.
TargetSet target_set(double delta, std::int64_t q, const Eigen::VectorXd& gamma);

/// μ(A(δ,q,γ)); the enclosure width is at most 2·(#boxes)·tol.
Enclosure lattice_measure_enclosure(const DigitMeasure& m, double delta, std::int64_t q,
                                    const Eigen::VectorXd& gamma, double tol = 1e-12);
double lattice_measure(const DigitMeasure& m, double delta, std::int64_t q,
                       const Eigen::VectorXd& gamma, double tol = 1e-12);

/// Number of boxes target_set would produce.
std::uint64_t target_box_count(double delta, std::int64_t q, const Eigen::VectorXd& gamma);

/// δ_q = c·q^{-α}
struct DeltaLaw {
  double c = 1.0;
  double alpha = 1.0;
  double operator()(std::int64_t q) const;
};

struct ScanRow {
  std::int64_t Q = 0;
  double delta = 0.0;  // δ_Q
  double S = 0.0;      // Σ_{q in [Q,2Q]} μ(A(δ_q, q, γ))
  double ratio = 0.0;  // S / Σ_q (2δ_q)^n, so Lebesgue reads 1
  bool primes_only = false;
  double error = 0.0;  // certified bound on |S - true S|
};

struct GcpScan {
  std::vector<ScanRow> rows;
  std::vector<std::int64_t> rejected;  // Q whose range hits δ_q >= 1/2
  bool truncated = false;              // stopped by the box budget
};

GcpScan gcp_scan(const DigitMeasure& m, const std::vector<std::int64_t>& Q_list, DeltaLaw law,
                 const Eigen::VectorXd& gamma, bool primes_only, double tol = 1e-12,
                 std::uint64_t box_budget = 0);

/// Σ |μ̂(ξ)| over nonzero ξ in (QZ)^n with |ξ|_∞ <= radius.
double divisor_fourier_sum_radius(const DigitMeasure& m, std::int64_t Q, std::int64_t radius,
                                  double tail_tol = kDefaultTailTol, std::uint64_t budget = 0);
/// The same with radius floor(K·Q/δ).
double divisor_fourier_sum(const DigitMeasure& m, std::int64_t Q, double delta, double K,
                           double tail_tol = kDefaultTailTol, std::uint64_t budget = 0);

struct ParsevalResult {
  double lhs = 0.0;         // Monte Carlo mean of the spike train
  double lhs_stderr = 0.0;  // its standard error
  double rhs = 0.0;         // truncated Fourier side
  double tail_bound = 0.0;  // bound on the omitted Fourier terms
  double residual = 0.0;    // |lhs - rhs|
};

/// ∫ g dμ two ways, g(x) = max(0, 1 - dist(Qx-γ, Z)/δ). 1D only.
ParsevalResult parseval_residual(const DigitMeasure& m, std::int64_t Q, double delta, double gamma,
                                 std::size_t n_samples, std::int64_t term_radius,
                                 std::uint64_t seed);

/// Primes in [lo, hi] by a segmented sieve of Eratosthenes.
std::vector<std::int64_t> primes_in(std::int64_t lo, std::int64_t hi, std::uint64_t budget = 0);

/// Counting exponent from power decay |μ̂(ξ)| << |ξ|^{-σ}: σ/(n-σ).
double power_decay_exponent(double sigma, int n);
/// Smallest δ the power-decay route handles at Q: 200·Q^{-σ/(n-σ)}.
double power_decay_delta_floor(double sigma, int n, std::int64_t Q);

}  // namespace mdm
