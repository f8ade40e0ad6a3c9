#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "mdm/fourier.hpp"
#include "support.hpp"

using namespace mdm;

namespace {

DigitMeasure middle_third() { return digit_measure_1d(3, {0, 2}); }

// Direct product ∏_{j=1}^{60} f(ξ p^-j) with f summed term by term.
std::complex<double> product_reference(const DigitMeasure& m, std::int64_t xi) {
  std::complex<long double> acc = 1.0L;
  long double theta = static_cast<long double>(xi);
  for (int j = 0; j < 60; ++j) {
    theta /= m.base();
    std::complex<long double> f = 0.0L;
    for (int i = 0; i < m.size(); ++i) {
      const long double ang = -2.0L * std::numbers::pi_v<long double> * m.digits()(0, i) * theta;
      f += static_cast<long double>(m.weights()(i)) * std::complex<long double>(std::cos(ang), std::sin(ang));
    }
    acc *= f;
  }
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

}  // namespace

TEST_CASE("symbol values") {
  const auto m = middle_third();
  CHECK(symbol_1d(m, 0.0) == std::complex<double>(1.0, 0.0));
  CHECK(std::abs(symbol_1d(m, 0.25)) == 0.0);
  CHECK(std::abs(symbol_1d(m, 0.5) - 1.0) < 1e-15);
  Eigen::VectorXd t(1);
  t << 0.37;
  CHECK(std::abs(symbol(m, t) - symbol_1d(m, 0.37)) < 1e-15);
}

TEST_CASE("coefficient at zero and small frequencies") {
  const auto m = middle_third();
  const FourierValue z = fourier_coefficient_1d(m, 0);
  CHECK(z.value == std::complex<double>(1.0, 0.0));
  CHECK(z.error_radius == 0.0);

  test::Gen g(3);
  for (int k = 0; k < 30; ++k) {
    const auto mm = g.measure_1d(10);
    const std::int64_t xi = g.integer(-5000, 5000);
    const FourierValue v = fourier_coefficient_1d(mm, xi);
    CHECK(std::abs(v.value - product_reference(mm, xi)) <= v.error_radius + 1e-13);
    CHECK(v.error_radius < 1e-9);
  }
}

TEST_CASE("coefficient matches a Monte Carlo average") {
  const auto m = middle_third();
  test::DirectSampler s(m, 1234);
  const int n = 200000;
  std::complex<double> acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = s.next();
    acc += std::polar(1.0, -2.0 * std::numbers::pi * x);
  }
  acc /= static_cast<double>(n);
  const FourierValue v = fourier_coefficient_1d(m, 1);
  const double se = std::sqrt(1.0 / n);
  CHECK(std::abs(acc.real() - v.value.real()) < 4 * se);
  CHECK(std::abs(acc.imag() - v.value.imag()) < 4 * se);
}

TEST_CASE("self-similar rescaling for the middle-third measure") {
  const auto m = middle_third();
  for (std::int64_t t : {1, 2, 5, 7, 11}) {
    const double a = fourier_coefficient_1d(m, t).abs();
    std::int64_t xi = t;
    for (int j = 0; j < 8; ++j) {
      xi *= 3;
      CHECK(std::abs(fourier_coefficient_1d(m, xi).abs() - a) < 1e-12);
    }
  }
}

TEST_CASE("Lebesgue coefficients vanish") {
  const auto leb = missing_digit_measure(5, {});
  for (std::int64_t xi = 1; xi < 200; ++xi) CHECK(fourier_coefficient_1d(leb, xi).abs() == 0.0);
  const auto rows = partial_sums(leb, 1.0, {5, 25, 125});
  for (const auto& r : rows) CHECK(r.sum == 0.0);
  CHECK(residue_census(leb, 1000, 0.9).count == 0);
}

TEST_CASE("2D coefficients factor for product digit sets") {
  std::vector<std::vector<int>> d;
  for (int a : {0, 2}) {
    for (int b : {0, 1, 3}) d.push_back({a, b});
  }
  const auto m2 = new_digit_measure(4, d);
  const auto mx = digit_measure_1d(4, {0, 2});
  const auto my = digit_measure_1d(4, {0, 1, 3});
  for (std::int64_t a = -6; a <= 6; ++a) {
    for (std::int64_t b = -6; b <= 6; ++b) {
      IntVector xi(2);
      xi << a, b;
      const auto v = fourier_coefficient(m2, xi);
      const auto ref = fourier_coefficient_1d(mx, a).value * fourier_coefficient_1d(my, b).value;
      CHECK(std::abs(v.value - ref) < 1e-9);
    }
  }
}

TEST_CASE("engine agrees with the free functions") {
  const auto m = missing_digit_measure(7, {3});
  const CoefficientEngine eng(m);
  for (std::int64_t xi : {1, 6, 49, 100, 123457, -77}) {
    CHECK(std::abs(eng.at(xi).value - fourier_coefficient_1d(m, xi).value) < 1e-15);
  }
  CHECK_THROWS_AS(fourier_coefficient_1d(m, std::int64_t{1} << 60), DomainError);
}

TEST_CASE("lyapunov function") {
  const auto m = middle_third();
  CHECK(lyapunov(m, 0.0) == 0.0);
  CHECK(std::isinf(lyapunov(m, 0.25)));
  CHECK(std::abs(lyapunov(m, 0.5)) < 1e-15);
  CHECK(lyapunov(m, 0.1) == doctest::Approx(-std::log(std::abs(std::cos(std::numbers::pi * 0.2))) / std::log(3.0)));
}

TEST_CASE("partial sums estimate l2 dimension for the middle third") {
  const auto m = middle_third();
  std::vector<std::int64_t> radii;
  for (std::int64_t R = 81; R <= 59049; R *= 3) radii.push_back(R);
  const auto rows = partial_sums(m, 2.0, radii);
  REQUIRE(rows.back().exponent_estimate);
  CHECK(std::abs(*rows.back().exponent_estimate - (1.0 - l2_dimension(m))) < 0.05);
  CHECK_FALSE(rows.front().exponent_estimate);
  CHECK_THROWS_AS(partial_sums(m, 1.0, {1000}, kDefaultTailTol, 100), BudgetExceeded);
}

TEST_CASE("l1 dimension estimate for the middle-15th exceeds one half") {
  const auto m = missing_digit_measure(15, {7});
  const auto rows = partial_sums(m, 1.0, {3375, 50625, 759375});
  REQUIRE(rows.back().exponent_estimate);
  CHECK(1.0 - *rows.back().exponent_estimate > 0.5);
}

TEST_CASE("residue census against a tighter-tolerance recount") {
  const auto m = middle_third();
  const auto c = residue_census(m, 6561, 0.6);
  std::int64_t recount = 0;
  for (std::int64_t xi = 1; xi <= 6561; ++xi) {
    const FourierValue v = fourier_coefficient_1d(m, xi, kDefaultTailTol / 10);
    if (v.abs_upper() >= std::pow(static_cast<double>(xi), -0.6)) ++recount;
  }
  CHECK(c.count == recount);
  CHECK(residue_census(m, 6561, 0.7).count >= c.count);
  CHECK(residue_census(m, 6561, 0.5).count <= c.count);
  const auto capped = residue_census(m, 6561, 0.6, kDefaultTailTol, 5);
  CHECK(capped.offenders.size() == std::min<std::size_t>(5, c.count));
}

TEST_CASE("least squares slope") {
  CHECK(least_squares_slope({0, 1, 2, 3}, {1, 3, 5, 7}) == doctest::Approx(2.0));
  CHECK(least_squares_slope({1, 2, 3}, {2, 1, 0}) == doctest::Approx(-1.0));
}
