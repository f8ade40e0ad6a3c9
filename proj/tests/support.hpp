#pragma once

// Independent oracles and hand-rolled generators shared by the test binaries.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "mdm/measure.hpp"

namespace mdm::test {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(eng_);
  }
  bool coin() { return integer(0, 1) == 1; }
  std::mt19937_64& engine() { return eng_; }

  // Random 1D digit measure: base in [3, max_base], at least two digits,
  // uniform or random positive weights.
  DigitMeasure measure_1d(int max_base = 12) {
    const int p = static_cast<int>(integer(3, max_base));
    std::vector<int> digits;
    while (digits.size() < 2) {
      digits.clear();
      for (int d = 0; d < p; ++d) {
        if (uniform() < 0.6) digits.push_back(d);
      }
    }
    if (coin()) return digit_measure_1d(p, digits);
    std::vector<double> w(digits.size());
    double total = 0.0;
    for (double& x : w) total += (x = uniform(0.2, 1.0));
    for (double& x : w) x /= total;
    return digit_measure_1d(p, digits, w);
  }

  // Random 2D digit measure with base in [2, 5].
  DigitMeasure measure_2d() {
    const int p = static_cast<int>(integer(2, 5));
    std::vector<std::vector<int>> digits;
    while (digits.size() < 2) {
      digits.clear();
      for (int a = 0; a < p; ++a) {
        for (int b = 0; b < p; ++b) {
          if (uniform() < 0.5) digits.push_back({a, b});
        }
      }
    }
    return new_digit_measure(p, digits);
  }

 private:
  std::mt19937_64 eng_;
};

// Mass of every depth-D cylinder [N p^-D, (N+1) p^-D) of a 1D measure, built
// by enumerating digit words. prefix[N] is the mass strictly left of cylinder N.
class CylinderTable {
 public:
  CylinderTable(const DigitMeasure& m, int depth) : p_(m.base()), depth_(depth) {
    std::int64_t cells = 1;
    for (int j = 0; j < depth; ++j) cells *= p_;
    mass_.assign(static_cast<std::size_t>(cells), 0.0);
    enumerate(m, 0, 0, 1.0);
    prefix_.assign(mass_.size() + 1, 0.0L);
    for (std::size_t i = 0; i < mass_.size(); ++i) prefix_[i + 1] = prefix_[i] + mass_[i];
  }

  std::int64_t cells() const { return static_cast<std::int64_t>(mass_.size()); }
  double cell_mass(std::int64_t n) const { return mass_[static_cast<std::size_t>(n)]; }

  // μ([i/p^D, j/p^D]) for grid endpoints i <= j.
  double grid_interval(std::int64_t i, std::int64_t j) const {
    return static_cast<double>(prefix_[static_cast<std::size_t>(j)] - prefix_[static_cast<std::size_t>(i)]);
  }

  // Cells of zero mass. Their midpoints sit at distance p^-D/2 from the
  // support, so intervals ending there are immune to endpoint rounding.
  std::vector<std::int64_t> gap_cells() const {
    std::vector<std::int64_t> out;
    for (std::int64_t n = 0; n < cells(); ++n) {
      if (mass_[static_cast<std::size_t>(n)] == 0.0) out.push_back(n);
    }
    return out;
  }
  double gap_midpoint(std::int64_t n) const { return (static_cast<double>(n) + 0.5) / static_cast<double>(cells()); }

  // Lower and upper bounds on μ([a, b]) from cylinders inside / touching it.
  std::pair<double, double> bracket(double a, double b) const {
    const double n = static_cast<double>(cells());
    const auto inner_lo = static_cast<std::int64_t>(std::ceil(a * n));
    const auto inner_hi = static_cast<std::int64_t>(std::floor(b * n));
    const auto outer_lo = static_cast<std::int64_t>(std::floor(a * n));
    const auto outer_hi = std::min<std::int64_t>(cells(), static_cast<std::int64_t>(std::ceil(b * n)));
    const double lo = inner_hi > inner_lo ? grid_interval(inner_lo, inner_hi) : 0.0;
    return {lo, grid_interval(std::max<std::int64_t>(0, outer_lo), outer_hi)};
  }

 private:
  void enumerate(const DigitMeasure& m, int level, std::int64_t index, double weight) {
    if (level == depth_) {
      mass_[static_cast<std::size_t>(index)] += weight;
      return;
    }
    for (int i = 0; i < m.size(); ++i) {
      enumerate(m, level + 1, index * p_ + m.digits()(0, i), weight * m.weights()(i));
    }
  }

  int p_;
  int depth_;
  std::vector<double> mass_;
  std::vector<long double> prefix_;
};

// Monte Carlo draw of a 1D point, digits chosen with std::discrete_distribution.
class DirectSampler {
 public:
  DirectSampler(const DigitMeasure& m, std::uint64_t seed)
      : m_(m), eng_(seed),
        pick_(m.weights().data(), m.weights().data() + m.size()) {}

  double next(int depth = 40) {
    double x = 0.0, scale = 1.0 / m_.base();
    for (int j = 0; j < depth; ++j) {
      x += scale * m_.digits()(0, pick_(eng_));
      scale /= m_.base();
    }
    return x;
  }

 private:
  DigitMeasure m_;
  std::mt19937_64 eng_;
  std::discrete_distribution<int> pick_;
};

// D(σ‖1-2ε) in long double.
inline long double kl_reference(long double sigma, long double eps) {
  const long double q = 1.0L - 2.0L * eps;
  return sigma * std::log(sigma / q) + (1.0L - sigma) * std::log((1.0L - sigma) / (2.0L * eps));
}

// Distance to the nearest integer.
inline double dist_z(double x) { return std::abs(x - std::nearbyint(x)); }

}  // namespace mdm::test
