#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "mdm/measure.hpp"
#include "support.hpp"

using namespace mdm;

namespace {

DigitMeasure middle_third() { return digit_measure_1d(3, {0, 2}); }
DigitMeasure middle15() { return missing_digit_measure(15, {7}); }

}  // namespace

TEST_CASE("construction validates digits and weights") {
  CHECK_NOTHROW(middle_third());
  CHECK(middle15().size() == 14);
  CHECK(middle15().missing_count() == 1);

  auto index_of = [](auto&& f) {
    try {
      f();
    } catch (const DomainError& e) {
      return e.index();
    }
    return -2;
  };
  CHECK(index_of([] { digit_measure_1d(3, {0, 0}); }) == 1);
  CHECK(index_of([] { digit_measure_1d(3, {0, 3}); }) == 1);
  CHECK_THROWS_AS(digit_measure_1d(3, {0, 2}, std::vector<double>{0.5, 0.4}), DomainError);
  CHECK_THROWS_AS(digit_measure_1d(3, {0, 2}, std::vector<double>{1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(digit_measure_1d(3, {1}), DomainError);
  CHECK_THROWS_AS(digit_measure_1d(1, {0, 0}), DomainError);
  CHECK_THROWS_AS(new_digit_measure(3, {{0, 1}, {2}}), DomainError);
  CHECK(missing_digit_measure(5, {}).is_lebesgue());
}

TEST_CASE("dimensions") {
  const double s = std::log(2.0) / std::log(3.0);
  CHECK(hausdorff_dimension(middle_third()) == doctest::Approx(s).epsilon(1e-15));
  CHECK(l2_dimension(middle_third()) == doctest::Approx(s).epsilon(1e-15));
  CHECK(hausdorff_dimension(missing_digit_measure(7, {})) == 1.0);
  CHECK(l2_dimension(missing_digit_measure(7, {})) == 1.0);
  CHECK(l2_dimension(digit_measure_1d(16, {0, 1, 2, 3, 4})) == doctest::Approx(std::log(5.0) / std::log(16.0)).epsilon(1e-15));

  const std::vector<double> w{1, 2, 3, 4, 5, 4, 3, 2, 1};
  std::vector<double> wn;
  for (double x : w) wn.push_back(x / 25.0);
  const auto m = digit_measure_1d(16, {0, 1, 2, 3, 4, 5, 6, 7, 8}, wn);
  double h = 0.0;
  for (double x : wn) h -= x * std::log(x);
  CHECK(hausdorff_dimension(m) == doctest::Approx(h / std::log(16.0)).epsilon(1e-14));
  CHECK(std::abs(hausdorff_dimension(m) - 0.74977) < 5e-6);
  CHECK(l2_dimension(m) < hausdorff_dimension(m));
}

TEST_CASE("measure of simple boxes") {
  const auto m = middle_third();
  CHECK(measure_of_box(m, Box::interval(0.0, 1.0 / 3.0)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(measure_of_box(m, Box::interval(1.0 / 3.0 + 1e-12, 2.0 / 3.0 - 1e-12)) == 0.0);
  CHECK(measure_of_box(m, Box::unit(1)) == 1.0);
  CHECK(measure_of_box(middle15(), Box::interval(0.0, 1.0 / 225.0)) == doctest::Approx(1.0 / 196.0).epsilon(1e-10));
  CHECK(measure_of_box(missing_digit_measure(4, {}), Box::interval(0.2, 0.7)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(measure_of_box(m, Box::interval(-3.0, -1.0)) == 0.0);
}

TEST_CASE("measure_of_box agrees with brute-force cylinders between gaps") {
  test::Gen g(11);
  int trials = 0;
  while (trials < 12) {
    const auto m = g.measure_1d(7);
    if (m.missing_count() == 0) continue;
    ++trials;
    const test::CylinderTable table(m, 5);
    const auto gaps = table.gap_cells();
    const auto last = static_cast<std::int64_t>(gaps.size()) - 1;
    for (int k = 0; k < 25; ++k) {
      std::int64_t i = gaps[g.integer(0, last)], j = gaps[g.integer(0, last)];
      if (i > j) std::swap(i, j);
      const double exact = table.grid_interval(i, j);
      const Enclosure e =
          measure_of_box_enclosure(m, Box::interval(table.gap_midpoint(i), table.gap_midpoint(j)), 1e-13);
      CHECK(e.lo <= exact + 1e-14);
      CHECK(e.hi >= exact - 1e-14);
      CHECK(std::abs(e.mid() - exact) <= 1e-13 + 1e-15);
    }
  }
}

TEST_CASE("enclosures respect the cylinder bracket at arbitrary endpoints") {
  test::Gen g(12);
  const auto m = middle15();
  const test::CylinderTable table(m, 4);
  for (int k = 0; k < 100; ++k) {
    double a = g.uniform(), b = g.uniform();
    if (a > b) std::swap(a, b);
    const auto [lo, hi] = table.bracket(a, b);
    const Enclosure e = measure_of_box_enclosure(m, Box::interval(a, b), 1e-12);
    CHECK(e.hi >= lo - 1e-12);
    CHECK(e.lo <= hi + 1e-12);
    CHECK(e.hi - e.lo <= 2e-12 + 1e-15);
  }
}

TEST_CASE("2D boxes match the product of marginals for product digit sets") {
  std::vector<std::vector<int>> d;
  for (int a : {0, 2}) {
    for (int b : {0, 1, 3}) d.push_back({a, b});
  }
  const auto m2 = new_digit_measure(4, d);
  const auto mx = digit_measure_1d(4, {0, 2});
  const auto my = digit_measure_1d(4, {0, 1, 3});
  test::Gen g(5);
  for (int k = 0; k < 30; ++k) {
    double a = g.uniform(), b = g.uniform(), c = g.uniform(), e = g.uniform();
    if (a > b) std::swap(a, b);
    if (c > e) std::swap(c, e);
    Eigen::Vector2d lo(a, c), hi(b, e);
    const double prod = measure_of_box(mx, Box::interval(a, b), 1e-13) * measure_of_box(my, Box::interval(c, e), 1e-13);
    CHECK(std::abs(measure_of_box(m2, Box(lo, hi), 1e-10) - prod) < 2e-10);
  }
}

TEST_CASE("sampling") {
  const auto m = middle_third();
  std::set<double> depth1, depth2;
  for (std::uint64_t s = 0; s < 64; ++s) {
    depth1.insert(sample_point(m, 1, s)(0));
    depth2.insert(sample_point(m, 2, s)(0));
  }
  CHECK(depth1 == std::set<double>{0.0, 2.0 / 3.0});
  CHECK(depth2 == std::set<double>{0.0, 2.0 / 9.0, 6.0 / 9.0, 8.0 / 9.0});

  const auto pts = sample_points_1d(m, 100, 30, 42);
  const auto pts2 = sample_points(m, 100, 30, 42);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(pts[i] == pts2[i](0));
  CHECK(sample_point(m, 30, 42)(0) == pts2[0](0));

  const ExactPoint e = sample_point_exact(m, 10, 3);
  CHECK(e.denominator == 59049);
  std::int64_t n = e.numerator;
  for (int j = 0; j < 10; ++j, n /= 3) CHECK(n % 3 != 1);
  CHECK(exact_depth_cap(2) == 62);
}

TEST_CASE("empirical CDF matches measure_of_box within four standard errors") {
  test::Gen g(99);
  const auto m = g.measure_1d(9);
  const auto xs = sample_points_1d(m, 100000, kDefaultSampleDepth, 7);
  int failures = 0;
  for (int k = 0; k < 100; ++k) {
    double a = g.uniform(), b = g.uniform();
    if (a > b) std::swap(a, b);
    const double p = measure_of_box(m, Box::interval(a, b));
    const double hits = static_cast<double>(std::count_if(xs.begin(), xs.end(), [&](double x) { return a <= x && x <= b; }));
    const double se = std::sqrt(std::max(p * (1 - p), 1e-12) / xs.size());
    if (std::abs(hits / xs.size() - p) > 4 * se + 1e-12) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("convolution") {
  const auto m = digit_measure_1d(16, {0, 1, 2, 3, 4});
  const auto c = convolve(m, m);
  REQUIRE(c.size() == 9);
  const double expect[] = {1, 2, 3, 4, 5, 4, 3, 2, 1};
  for (int i = 0; i < 9; ++i) {
    CHECK(c.digits()(0, i) == i);
    CHECK(c.weights()(i) == doctest::Approx(expect[i] / 25.0).epsilon(1e-15));
  }
  CHECK_THROWS_AS(convolve(middle_third(), middle_third()), DomainError);
  CHECK_THROWS_AS(convolve(m, middle_third()), DomainError);
}

TEST_CASE("branches") {
  const auto m = middle_third();
  const Branch e = branch_of_1d(m, {});
  CHECK(e.scale == 1.0);
  CHECK(e.offset(0) == 0.0);
  const Branch b2 = branch_of_1d(m, {2});
  CHECK(b2.scale == doctest::Approx(1.0 / 3.0));
  CHECK(b2.offset(0) == doctest::Approx(2.0 / 3.0));
  CHECK(b2.weight == 0.5);
  const Branch b02 = branch_of_1d(m, {0, 2});
  CHECK(b02.scale == doctest::Approx(1.0 / 9.0));
  CHECK(b02.offset(0) == doctest::Approx(2.0 / 9.0));
  CHECK(b02.weight == 0.25);
  CHECK_THROWS_AS(branch_of_1d(m, {1}), DomainError);
}

TEST_CASE("CDF enclosure is monotone and hits 0 and 1") {
  const auto m = middle15();
  CHECK(cdf_enclosure(m, 0.0, 1e-12).hi <= 1e-12);
  CHECK(cdf_enclosure(m, 1.0, 1e-12).lo >= 1.0 - 1e-12);
  double prev = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const Enclosure e = cdf_enclosure(m, i / 200.0, 1e-12);
    CHECK(e.hi >= prev - 1e-12);
    prev = e.lo;
  }
}
