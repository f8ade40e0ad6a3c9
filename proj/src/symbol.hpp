#pragma once

#include <complex>
#include <vector>

#include "mdm/measure.hpp"

namespace mdm::detail {

// Precomputed evaluator for f(θ) = Σ w_i e^{-2πi(a_i, θ)}.
class SymbolEvaluator {
 public:
  explicit SymbolEvaluator(const DigitMeasure& m);

  std::complex<double> eval_1d(double theta) const;
  std::complex<double> eval(const double* theta) const;

  // Upper bound on the absolute rounding error of one evaluation.
  double rounding_bound() const { return rounding_; }
  // Σ w_i |a_i|_1
  double first_moment() const { return first_moment_; }

 private:
  std::complex<double> direct_1d(double t) const;
  std::complex<double> closed_1d(double t) const;

  int base_;
  int dim_;
  bool uniform_;
  bool closed_form_ = false;
  std::vector<int> digits_1d_;      // sorted
  std::vector<double> weights_1d_;  // aligned with digits_1d_
  std::vector<int> missing_1d_;
  std::vector<int> digits_nd_;  // column-major copy
  std::vector<double> weights_nd_;
  double inv_r_;
  double rounding_;
  double first_moment_;
};

}  // namespace mdm::detail
