#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mdm/errors.hpp"

namespace mdm {

// One digit per column; rows are coordinates.
using DigitMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

/// Self-similar measure on [0,1]^n generated by base-p digit expansions
///
///     x = sum_{j>=1} a_j p^{-j},   a_j i.i.d. with P(a_j = d_i) = w_i,
///
/// over a digit set D in {0..p-1}^n with at least two digits. Immutable after
/// construction; every query below is a pure function of it.
class DigitMeasure {
 public:
  /// Validates and stores; throws DomainError carrying the offending index.
  DigitMeasure(int base, DigitMatrix digits, Eigen::VectorXd weights);

  int base() const noexcept { return base_; }
  int dim() const noexcept { return static_cast<int>(digits_.rows()); }
  int size() const noexcept { return static_cast<int>(digits_.cols()); }
  /// base^dim - r
  std::int64_t missing_count() const noexcept { return missing_; }

  const DigitMatrix& digits() const noexcept { return digits_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }

  bool uniform() const noexcept { return uniform_; }
  /// Full digit set with uniform weights, i.e. Lebesgue measure on [0,1]^n.
  bool is_lebesgue() const noexcept { return lebesgue_; }

  /// Per-coordinate convex hull of the support: [min_i a_ic, max_i a_ic] / (p-1).
  double hull_lo(int c) const { return hull_lo_[c]; }
  double hull_hi(int c) const { return hull_hi_[c]; }
  /// True when every digit shares coordinate c, so the c-marginal is a point mass.
  bool coordinate_atomic(int c) const { return hull_lo_[c] == hull_hi_[c]; }

  /// 1D only: weight of digit value d (0 when d is missing).
  double weight_of(int d) const { return digit_weight_[d]; }
  /// 1D only: total weight of digits strictly below d.
  double weight_below(int d) const { return weight_below_[d]; }
  /// 1D only: digit values in increasing order.
  std::vector<int> digit_list() const;
  /// 1D only: digit values in {0..p-1} not in the digit set.
  std::vector<int> missing_list() const;

  std::string describe() const;

 private:
  int base_;
  DigitMatrix digits_;
  Eigen::VectorXd weights_;
  std::int64_t missing_ = 0;
  bool uniform_ = false;
  bool lebesgue_ = false;
  std::vector<double> hull_lo_, hull_hi_;
  std::vector<double> digit_weight_, weight_below_;
};

DigitMeasure new_digit_measure(int base, const std::vector<std::vector<int>>& digits,
                               const std::optional<std::vector<double>>& weights = std::nullopt);

/// 1D convenience form.
DigitMeasure digit_measure_1d(int base, const std::vector<int>& digits,
                              const std::optional<std::vector<double>>& weights = std::nullopt);

/// 1D measure on {0..base-1} minus `missing`, uniform weights.
DigitMeasure missing_digit_measure(int base, const std::vector<int>& missing);

/// Entropy dimension sum w log(1/w) / log p; log r / log p for uniform weights.
double hausdorff_dimension(const DigitMeasure& m);

/// Correlation dimension log(1 / sum w^2) / log p.
double l2_dimension(const DigitMeasure& m);

/// Closed axis-parallel box.
struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  Box(Eigen::VectorXd lo_, Eigen::VectorXd hi_);
  static Box interval(double a, double b);
  static Box unit(int dim);

  int dim() const { return static_cast<int>(lo.size()); }
};

/// Two-sided certified bound.
struct Enclosure {
  double lo = 0.0;
  double hi = 0.0;

  double mid() const { return 0.5 * (lo + hi); }
  double radius() const { return 0.5 * (hi - lo); }
  bool contains(double v) const { return lo <= v && v <= hi; }
};

/// mu(b ∩ [0,1]^n) enclosed to within 2*tol width; the midpoint is within tol.
Enclosure measure_of_box_enclosure(const DigitMeasure& m, const Box& b, double tol = 1e-12);
double measure_of_box(const DigitMeasure& m, const Box& b, double tol = 1e-12);

/// Cylinder recursion over the self-similar identity, valid in any dimension.
/// measure_of_box dispatches here for dim > 1 and to the CDF route in 1D.
/// Cylinders cut by a single face are settled through that coordinate's
/// marginal; throws BudgetExceeded if the corner frontier outgrows 4e6.
Enclosure measure_of_box_recursive(const DigitMeasure& m, const Box& b, double tol);

/// 1D: enclosure of F(x) = mu([0, x]).
Enclosure cdf_enclosure(const DigitMeasure& m, double x, double tol);
/// 1D: mu([a, b]) from two CDF enclosures.
Enclosure interval_measure(const DigitMeasure& m, double a, double b, double tol);

inline constexpr int kDefaultSampleDepth = 64;

Eigen::VectorXd sample_point(const DigitMeasure& m, int depth, std::uint64_t seed);

/// count samples; sample i uses the stream derive_seed(seed, i).
std::vector<Eigen::VectorXd> sample_points(const DigitMeasure& m, std::size_t count, int depth,
                                           std::uint64_t seed);
/// 1D fast form of sample_points.
std::vector<double> sample_points_1d(const DigitMeasure& m, std::size_t count, int depth,
                                     std::uint64_t seed);

/// Exact 1D sample: the digit word as an integer N with x = N / base^depth.
/// depth is capped so that base^depth fits in 62 bits; the cap is returned.
struct ExactPoint {
  std::int64_t numerator;
  std::int64_t denominator;
};
int exact_depth_cap(int base);
ExactPoint sample_point_exact(const DigitMeasure& m, int depth, std::uint64_t seed);

/// Convolution on the digit grid: digits a+b, weights summed over representations.
/// Rejects digit sums that leave {0..p-1}^n.
DigitMeasure convolve(const DigitMeasure& m1, const DigitMeasure& m2);

/// Scaled copy of mu selected by a finite digit word.
struct Branch {
  std::vector<Eigen::VectorXi> word;
  double scale = 1.0;
  Eigen::VectorXd offset;
  double weight = 1.0;  // product of the word's digit weights
};

Branch branch_of(const DigitMeasure& m, const std::vector<Eigen::VectorXi>& word);
Branch branch_of_1d(const DigitMeasure& m, const std::vector<int>& word);

}  // namespace mdm
