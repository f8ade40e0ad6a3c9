#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mdm/measure.hpp"

namespace mdm {

// ---- Erdős–Kahane closed forms ---------------------------------------------

/// D(σ ‖ 1-2ε) = σ log(σ/(1-2ε)) + (1-σ) log((1-σ)/(2ε)).
double kl_bernoulli(double sigma, double epsilon);

struct EKParams {
  double sigma = 0.0;
  double epsilon = 0.0;
  double lambda = 0.0;  // D(σ‖1-2ε) / log p
  double delta = 0.0;   // σ log(ε(p-k)) / log p
  /// The Chernoff tail behind λ needs σ < 1-2ε; otherwise λ certifies nothing.
  bool chernoff_valid = false;

  double certified_lambda() const { return chernoff_valid ? lambda : 0.0; }
};

/// Throws DomainError naming the first violated side condition.
EKParams ek_parameters(int p, int k, double sigma, double epsilon);

/// Δ > 1/2, λ > 0 and log(p-k)/log p + λ > 1.
bool ek_certifies(const EKParams& e, int p, int k);

/// Smallest p in [p_lo, p_hi] at which ek_certifies holds for fixed (k, σ, ε);
/// bases violating the side conditions are skipped.
std::optional<std::int64_t> ek_threshold(int k, double sigma, double epsilon, std::int64_t p_lo,
                                         std::int64_t p_hi);

/// DD(σ, a, ε) for contraction ratio a.
double dd_exponent(double sigma, double a, double epsilon);
/// Residue exponent 1 - DD(σ, a, ε), floored at 0. At a = 1/p it never exceeds
/// the EK value D(σ‖1-2ε)/log p.
double dd_lambda(double sigma, double a, double epsilon);

// ---- (Decay) on digit-good frequencies --------------------------------------

/// Positions j in [1, t] whose base-p digit d of ξ (least significant first)
/// satisfies εp <= d and d+1 <= (1-ε)p, which forces ‖ξ/p^j‖ >= ε.
int good_digit_count(std::int64_t xi, int p, double epsilon, int t);

/// ((1/(2ε) + k) / (p-k))^good, valid for uniform 1D measures with k missing digits.
double decay_bound(int p, int k, double epsilon, int good);

// ---- Lyapunov discretization ------------------------------------------------

/// Per cell of width p^{-k}: enclosure of inf φ over the cell.
std::vector<Enclosure> cell_infima(const DigitMeasure& m, int k, int samples_per_cell);

struct CellStats {
  int level = 0;
  double m_lo = 0.0;
  double m_hi = 0.0;
  double var_hi = 0.0;
  double c_hi = 0.0;
  int samples_per_cell = 0;
};

/// Worst-case (m, σ², C) bounds over the cell enclosures. The variance bound
/// carries the N/(N-1) sample correction.
CellStats discretized_stats(const DigitMeasure& m, int k, int samples_per_cell);
CellStats stats_from_cells(const std::vector<Enclosure>& cells, int k, int samples_per_cell);

/// (1/log p)·((m_lo-Δ)²/2) / (k·var_hi + k·c_hi·(m_lo-Δ)/3); 0 when m_lo <= Δ.
double bernstein_residue_bound(const CellStats& stats, int base, double Delta);

/// clamp(largest power of two <= 4e6 / p^k, 64, 4096).
int default_samples_per_cell(int base, int k);
/// Largest k with p^k <= 6561, at least 1 and at most 8.
int default_k_max(int base);

/// Midpoint rule for ∫_0^1 φ on `points` micro-cells. Cells whose midpoint is a
/// zero of f take the value from the Lipschitz sup-enclosure instead.
double lyapunov_integral(const DigitMeasure& m, std::size_t points = 1'000'000);

// ---- certificates -----------------------------------------------------------

enum class Route { kBoth, kAnalytic, kNumeric };

struct CertifyOptions {
  int k_max = 0;             // 0: default_k_max
  int samples_per_cell = 0;  // 0: default_samples_per_cell per level
  std::vector<double> delta_grid;    // empty: 0.5, 0.505, ..., 0.95
  std::vector<double> sigma_grid;    // empty: 0.90, 0.91, ..., 0.99
  std::vector<double> epsilon_grid;  // empty: j/p for admissible j
  Route route = Route::kBoth;
  std::uint64_t evaluation_budget = 100'000'000;
};

struct Certificate {
  std::string measure;
  bool spectral = false;
  bool thick = false;
  std::string route;
  int k = 0;
  std::optional<double> sigma;
  std::optional<double> epsilon;
  double delta_grid_argmax = 0.0;
  double dim_H = 0.0;
  double dim_l2 = 0.0;
  double dim_R_lb = 0.0;
  double dim_ST_lb = 0.0;
  double dim_l1_lb = 0.0;
  std::optional<CellStats> enclosures;
  std::vector<CellStats> levels;  // every numeric level evaluated
};

Certificate certify_spectral_thick(const DigitMeasure& m, const CertifyOptions& opts = {});

/// dim_l1 / (1 - dim_l1).
double gcp_threshold(double dim_l1);

struct NdConditions {
  bool decay = false;      // Δ' > n/(n+1)
  bool residue = false;    // dim_H > n - λ
  bool dimension = false;  // dim_H > n²/(n+1)

  bool all() const { return decay && residue && dimension; }
};

NdConditions nd_conditions(int n, double dim_H, double lambda, double Delta);

struct NdExample {
  std::int64_t p = 0;
  double dim_H = 0.0;
  double lambda = 0.0;
  double delta = 0.0;
  NdConditions conditions;
};

/// One missing digit in {0..p-1}^n with σ = (n+1)/(n+2), ε = (1-σ)/4.
NdExample nd_one_missing_example(int n, std::int64_t p);
/// Smallest p for which nd_one_missing_example passes all three conditions.
NdExample nd_smallest_base(int n);

}  // namespace mdm
