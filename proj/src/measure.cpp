#include "mdm/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#include "mdm/parallel.hpp"
#include "rng.hpp"

namespace mdm {
namespace {

constexpr double kWeightSumTol = 1e-12;

std::int64_t saturating_pow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > (std::int64_t{1} << 62) / b) return std::int64_t{1} << 62;
    r *= b;
  }
  return r;
}

// Draws a digit column index from the cumulative weight table.
class DigitSampler {
 public:
  explicit DigitSampler(const DigitMeasure& m) : r_(m.size()), uniform_(m.uniform()) {
    cumulative_.resize(r_);
    double s = 0.0;
    for (int i = 0; i < r_; ++i) {
      s += m.weights()[i];
      cumulative_[i] = s;
    }
    cumulative_.back() = 1.0;
  }

  int draw(SplitMix64& rng) const {
    const double u = rng.uniform();
    if (uniform_) return std::min(r_ - 1, static_cast<int>(u * r_));
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return std::min(r_ - 1, static_cast<int>(it - cumulative_.begin()));
  }

 private:
  int r_;
  bool uniform_;
  std::vector<double> cumulative_;
};

}  // namespace

DigitMeasure::DigitMeasure(int base, DigitMatrix digits, Eigen::VectorXd weights)
    : base_(base), digits_(std::move(digits)), weights_(std::move(weights)) {
  if (base_ < 2) throw DomainError("base must be at least 2, got " + std::to_string(base_));
  if (digits_.rows() < 1) throw DomainError("ambient dimension must be at least 1");
  const int r = size();
  if (r < 2) throw DomainError("at least two digits are required (r >= 2), got " + std::to_string(r));
  for (int i = 0; i < r; ++i) {
    for (int c = 0; c < dim(); ++c) {
      const int v = digits_(c, i);
      if (v < 0 || v >= base_) {
        throw DomainError("digit " + std::to_string(i) + " has coordinate " + std::to_string(v) +
                              " outside [0, " + std::to_string(base_ - 1) + "]",
                          i);
      }
    }
    for (int j = 0; j < i; ++j) {
      if (digits_.col(i) == digits_.col(j)) {
        throw DomainError("duplicate digit at index " + std::to_string(i), i);
      }
    }
  }
  if (weights_.size() != r) {
    throw DomainError("expected " + std::to_string(r) + " weights, got " +
                      std::to_string(weights_.size()));
  }
  for (int i = 0; i < r; ++i) {
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
      throw DomainError("weight " + std::to_string(i) + " must be finite and positive", i);
    }
  }
  if (std::abs(weights_.sum() - 1.0) > kWeightSumTol) {
    throw DomainError("weights must sum to 1");
  }

  missing_ = saturating_pow(base_, dim()) - r;
  uniform_ = (weights_.array() == weights_[0]).all() ||
             (weights_.array() - 1.0 / r).abs().maxCoeff() < 1e-15;
  lebesgue_ = uniform_ && missing_ == 0;

  hull_lo_.resize(dim());
  hull_hi_.resize(dim());
  for (int c = 0; c < dim(); ++c) {
    hull_lo_[c] = digits_.row(c).minCoeff() / static_cast<double>(base_ - 1);
    hull_hi_[c] = digits_.row(c).maxCoeff() / static_cast<double>(base_ - 1);
  }

  if (dim() == 1) {
    digit_weight_.assign(base_, 0.0);
    for (int i = 0; i < r; ++i) digit_weight_[digits_(0, i)] = weights_[i];
    weight_below_.assign(base_ + 1, 0.0);
    for (int d = 0; d < base_; ++d) weight_below_[d + 1] = weight_below_[d] + digit_weight_[d];
  }
}

std::vector<int> DigitMeasure::digit_list() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) out.push_back(digits_(0, i));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> DigitMeasure::missing_list() const {
  std::vector<int> out;
  for (int d = 0; d < base_; ++d)
    if (digit_weight_[d] == 0.0) out.push_back(d);
  return out;
}

std::string DigitMeasure::describe() const {
  std::ostringstream os;
  os << "base=" << base_ << " dim=" << dim();
  if (dim() == 1 && missing_ <= size()) {
    os << " missing={";
    const auto miss = missing_list();
    for (std::size_t i = 0; i < miss.size(); ++i) os << (i ? "," : "") << miss[i];
    os << "}";
  } else {
    os << " r=" << size();
  }
  if (!uniform_) os << " weighted";
  return os.str();
}

DigitMeasure new_digit_measure(int base, const std::vector<std::vector<int>>& digits,
                               const std::optional<std::vector<double>>& weights) {
  if (digits.empty()) throw DomainError("at least two digits are required (r >= 2), got 0");
  const auto n = static_cast<int>(digits.front().size());
  DigitMatrix d(n, static_cast<int>(digits.size()));
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (static_cast<int>(digits[i].size()) != n) {
      throw DomainError("digit " + std::to_string(i) + " has the wrong dimension",
                        static_cast<int>(i));
    }
    for (int c = 0; c < n; ++c) d(c, static_cast<int>(i)) = digits[i][c];
  }
  Eigen::VectorXd w;
  if (weights) {
    w = Eigen::Map<const Eigen::VectorXd>(weights->data(), static_cast<Eigen::Index>(weights->size()));
  } else {
    w = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(digits.size()),
                                  1.0 / static_cast<double>(digits.size()));
  }
  return DigitMeasure(base, std::move(d), std::move(w));
}

DigitMeasure digit_measure_1d(int base, const std::vector<int>& digits,
                              const std::optional<std::vector<double>>& weights) {
  std::vector<std::vector<int>> d;
  d.reserve(digits.size());
  for (int v : digits) d.push_back({v});
  return new_digit_measure(base, d, weights);
}

DigitMeasure missing_digit_measure(int base, const std::vector<int>& missing) {
  for (std::size_t i = 0; i < missing.size(); ++i) {
    if (missing[i] < 0 || missing[i] >= base) {
      throw DomainError("missing digit " + std::to_string(missing[i]) + " outside [0, " +
                            std::to_string(base - 1) + "]",
                        static_cast<int>(i));
    }
  }
  std::vector<int> digits;
  for (int d = 0; d < base; ++d)
    if (std::find(missing.begin(), missing.end(), d) == missing.end()) digits.push_back(d);
  return digit_measure_1d(base, digits);
}

double hausdorff_dimension(const DigitMeasure& m) {
  if (m.uniform()) return std::log(static_cast<double>(m.size())) / std::log(m.base());
  const Eigen::ArrayXd w = m.weights().array();
  return -(w * w.log()).sum() / std::log(m.base());
}

double l2_dimension(const DigitMeasure& m) {
  if (m.uniform()) return std::log(static_cast<double>(m.size())) / std::log(m.base());
  return -std::log(m.weights().squaredNorm()) / std::log(m.base());
}

Box::Box(Eigen::VectorXd lo_, Eigen::VectorXd hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (lo.size() != hi.size() || lo.size() == 0) throw DomainError("box corners disagree in dimension");
  for (Eigen::Index c = 0; c < lo.size(); ++c) {
    if (!std::isfinite(lo[c]) || !std::isfinite(hi[c])) throw DomainError("box endpoints must be finite");
    if (lo[c] > hi[c]) throw DomainError("box has lo > hi in coordinate " + std::to_string(c), static_cast<int>(c));
  }
}

Box Box::interval(double a, double b) {
  return Box(Eigen::VectorXd::Constant(1, a), Eigen::VectorXd::Constant(1, b));
}

Box Box::unit(int dim) { return Box(Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Ones(dim)); }

Enclosure cdf_enclosure(const DigitMeasure& m, double x, double tol) {
  if (m.is_lebesgue()) {
    const double v = std::clamp(x, 0.0, 1.0);
    return {v, v};
  }
  const int p = m.base();
  const double hl = m.hull_lo(0);
  const double hh = m.hull_hi(0);
  double acc = 0.0;
  double w = 1.0;
  double y = x;
  for (;;) {
    // Closed left end carries no mass: the 1D measure is nonatomic.
    if (y <= hl) return {acc, acc};
    if (y >= hh) return {acc + w, acc + w};
    if (w <= tol) return {acc, acc + w};
    const double t = y * p;
    const int d = std::clamp(static_cast<int>(std::floor(t)), 0, p - 1);
    acc += w * m.weight_below(d);
    const double wd = m.weight_of(d);
    if (wd == 0.0) return {acc, acc};
    w *= wd;
    y = t - d;
  }
}

Enclosure interval_measure(const DigitMeasure& m, double a, double b, double tol) {
  if (b < a) return {0.0, 0.0};
  const Enclosure fa = cdf_enclosure(m, a, tol);
  const Enclosure fb = cdf_enclosure(m, b, tol);
  const double lo = std::clamp(fb.lo - fa.hi, 0.0, 1.0);
  const double hi = std::clamp(fb.hi - fa.lo, lo, 1.0);
  return {lo, hi};
}

namespace {

// Law of coordinate c: digits projected to c with weights merged. Empty when
// the coordinate is atomic.
std::optional<DigitMeasure> marginal(const DigitMeasure& m, int c) {
  std::map<int, double> w;
  for (int i = 0; i < m.size(); ++i) w[m.digits()(c, i)] += m.weights()(i);
  if (w.size() < 2) return std::nullopt;
  std::vector<int> digits;
  std::vector<double> weights;
  for (const auto& [d, x] : w) {
    digits.push_back(d);
    weights.push_back(x);
  }
  return digit_measure_1d(m.base(), digits, weights);
}

}  // namespace

Enclosure measure_of_box_recursive(const DigitMeasure& m, const Box& b, double tol) {
  if (b.dim() != m.dim()) throw DomainError("box dimension does not match the measure");
  const int n = m.dim();
  const int p = m.base();
  const int r = m.size();

  // Cylinder offset + scale*[0,1]^n against the box, using the support hull.
  // cut = -1: fully inside; cut = c: only coordinate c crosses the box
  // boundary; cut = n: several do.
  struct Verdict {
    bool empty;
    int cut;
  };
  auto classify = [&](const Eigen::VectorXd& offset, double scale) -> Verdict {
    int cut = -1;
    for (int c = 0; c < n; ++c) {
      const double lo = offset[c] + scale * m.hull_lo(c);
      const double hi = offset[c] + scale * m.hull_hi(c);
      const double ilo = std::max(lo, b.lo[c]);
      const double ihi = std::min(hi, b.hi[c]);
      if (ilo > ihi) return {true, 0};
      if (ilo == ihi && !m.coordinate_atomic(c)) return {true, 0};
      if (b.lo[c] > lo || b.hi[c] < hi) cut = cut == -1 ? c : n;
    }
    return {false, cut};
  };

  std::vector<std::optional<DigitMeasure>> marginals;
  for (int c = 0; c < n; ++c) marginals.push_back(n > 1 ? marginal(m, c) : std::nullopt);

  struct Cylinder {
    Eigen::VectorXd offset;
    double scale;
    double weight;
  };

  double decided_lo = 0.0, decided_hi = 0.0;
  std::vector<Cylinder> frontier;
  // A cylinder crossed only in coordinate c has mass weight * μ_c(slab).
  auto settle = [&](const Cylinder& cyl, const Verdict& v) {
    if (v.empty) return;
    if (v.cut == -1) {
      decided_lo += cyl.weight;
      decided_hi += cyl.weight;
      return;
    }
    if (v.cut < n && marginals[v.cut]) {
      const int c = v.cut;
      const Enclosure e = interval_measure(*marginals[c], (b.lo[c] - cyl.offset[c]) / cyl.scale,
                                           (b.hi[c] - cyl.offset[c]) / cyl.scale, 0.5 * tol);
      decided_lo += cyl.weight * e.lo;
      decided_hi += cyl.weight * e.hi;
      return;
    }
    frontier.push_back(cyl);
  };

  settle({Eigen::VectorXd::Zero(n), 1.0, 1.0}, classify(Eigen::VectorXd::Zero(n), 1.0));

  constexpr std::size_t kFrontierCap = 4'000'000;
  constexpr int kMaxDepth = 400;
  const Eigen::MatrixXd digits = m.digits().cast<double>();

  for (int depth = 0; depth < kMaxDepth && !frontier.empty(); ++depth) {
    double undecided = 0.0;
    for (const auto& cyl : frontier) undecided += cyl.weight;
    if (undecided <= tol) break;
    if (frontier.size() * static_cast<std::size_t>(r) > kFrontierCap) {
      throw BudgetExceeded("box measure needs more than " + std::to_string(kFrontierCap) + " cylinders");
    }
    std::vector<Cylinder> current = std::move(frontier);
    frontier.clear();
    for (const auto& cyl : current) {
      const double child_scale = cyl.scale / p;
      for (int i = 0; i < r; ++i) {
        Cylinder child{cyl.offset + child_scale * digits.col(i), child_scale, cyl.weight * m.weights()[i]};
        const Verdict v = classify(child.offset, child_scale);
        settle(child, v);
      }
    }
  }
  double undecided = 0.0;
  for (const auto& cyl : frontier) undecided += cyl.weight;
  const double lo = std::clamp(decided_lo, 0.0, 1.0);
  return {lo, std::clamp(decided_hi + undecided, lo, 1.0)};
}

Enclosure measure_of_box_enclosure(const DigitMeasure& m, const Box& b, double tol) {
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
  if (b.dim() != m.dim()) throw DomainError("box dimension does not match the measure");
  if (m.dim() == 1) return interval_measure(m, b.lo[0], b.hi[0], tol);
  if (m.is_lebesgue()) {
    double v = 1.0;
    for (int c = 0; c < b.dim(); ++c) v *= std::max(0.0, std::min(b.hi[c], 1.0) - std::max(b.lo[c], 0.0));
    return {v, v};
  }
  return measure_of_box_recursive(m, b, tol);
}

double measure_of_box(const DigitMeasure& m, const Box& b, double tol) {
  return measure_of_box_enclosure(m, b, tol).mid();
}

Eigen::VectorXd sample_point(const DigitMeasure& m, int depth, std::uint64_t seed) {
  return sample_points(m, 1, depth, seed).front();
}

std::vector<Eigen::VectorXd> sample_points(const DigitMeasure& m, std::size_t count, int depth,
                                           std::uint64_t seed) {
  if (depth < 1) throw DomainError("sampling depth must be at least 1");
  const DigitSampler sampler(m);
  const int n = m.dim();
  const double p = m.base();
  std::vector<Eigen::VectorXd> out(count, Eigen::VectorXd::Zero(n));
  parallel_for(count, [&](std::size_t k) {
    SplitMix64 rng(derive_seed(seed, k));
    std::vector<int> word(depth);
    for (int j = 0; j < depth; ++j) word[j] = sampler.draw(rng);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (int j = depth - 1; j >= 0; --j) x = (x + m.digits().col(word[j]).cast<double>()) / p;
    out[k] = std::move(x);
  });
  return out;
}

std::vector<double> sample_points_1d(const DigitMeasure& m, std::size_t count, int depth,
                                     std::uint64_t seed) {
  if (m.dim() != 1) throw DomainError("sample_points_1d needs a 1D measure");
  if (depth < 1) throw DomainError("sampling depth must be at least 1");
  const DigitSampler sampler(m);
  const double p = m.base();
  std::vector<double> out(count);
  parallel_for(count, [&](std::size_t k) {
    SplitMix64 rng(derive_seed(seed, k));
    std::vector<int> word(depth);
    for (int j = 0; j < depth; ++j) word[j] = m.digits()(0, sampler.draw(rng));
    double x = 0.0;
    for (int j = depth - 1; j >= 0; --j) x = (x + word[j]) / p;
    out[k] = x;
  });
  return out;
}

int exact_depth_cap(int base) {
  int depth = 0;
  std::int64_t pw = 1;
  while (pw <= ((std::int64_t{1} << 62) / base)) {
    pw *= base;
    ++depth;
  }
  return depth;
}

ExactPoint sample_point_exact(const DigitMeasure& m, int depth, std::uint64_t seed) {
  if (m.dim() != 1) throw DomainError("exact sampling needs a 1D measure");
  if (depth < 1) throw DomainError("sampling depth must be at least 1");
  depth = std::min(depth, exact_depth_cap(m.base()));
  const DigitSampler sampler(m);
  SplitMix64 rng(derive_seed(seed, 0));
  std::int64_t num = 0, den = 1;
  for (int j = 0; j < depth; ++j) {
    num = num * m.base() + m.digits()(0, sampler.draw(rng));
    den *= m.base();
  }
  return {num, den};
}

DigitMeasure convolve(const DigitMeasure& m1, const DigitMeasure& m2) {
  if (m1.base() != m2.base()) throw DomainError("convolution needs equal bases");
  if (m1.dim() != m2.dim()) throw DomainError("convolution needs equal dimensions");
  std::map<std::vector<int>, double> table;
  for (int i = 0; i < m1.size(); ++i) {
    for (int j = 0; j < m2.size(); ++j) {
      std::vector<int> s(m1.dim());
      for (int c = 0; c < m1.dim(); ++c) {
        s[c] = m1.digits()(c, i) + m2.digits()(c, j);
        if (s[c] >= m1.base()) {
          throw DomainError("digit sum " + std::to_string(s[c]) + " wraps around base " +
                                std::to_string(m1.base()),
                            i);
        }
      }
      table[s] += m1.weights()[i] * m2.weights()[j];
    }
  }
  std::vector<std::vector<int>> digits;
  std::vector<double> weights;
  for (const auto& [d, w] : table) {
    digits.push_back(d);
    weights.push_back(w);
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w /= total;
  return new_digit_measure(m1.base(), digits, weights);
}

Branch branch_of(const DigitMeasure& m, const std::vector<Eigen::VectorXi>& word) {
  Branch b;
  b.word = word;
  b.offset = Eigen::VectorXd::Zero(m.dim());
  for (std::size_t j = 0; j < word.size(); ++j) {
    if (word[j].size() != m.dim()) throw DomainError("symbol has the wrong dimension", static_cast<int>(j));
    int match = -1;
    for (int i = 0; i < m.size(); ++i)
      if (m.digits().col(i) == word[j]) match = i;
    if (match < 0) throw DomainError("symbol " + std::to_string(j) + " is not in the digit set", static_cast<int>(j));
    b.scale /= m.base();
    b.offset += b.scale * word[j].cast<double>();
    b.weight *= m.weights()[match];
  }
  return b;
}

Branch branch_of_1d(const DigitMeasure& m, const std::vector<int>& word) {
  std::vector<Eigen::VectorXi> w;
  w.reserve(word.size());
  for (int d : word) w.push_back(Eigen::VectorXi::Constant(1, d));
  return branch_of(m, w);
}

}  // namespace mdm
