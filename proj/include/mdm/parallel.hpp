#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace mdm {

// Caps worker threads used by every data-parallel routine (0 = hardware concurrency).
void set_max_threads(unsigned n);
unsigned max_threads();

// Work budget (terms, boxes, evaluations) shared by scans. Reads MDM_BUDGET on first use.
std::uint64_t default_budget();
void set_default_budget(std::uint64_t budget);

// Runs body(i) for i in [0, n). Iterations are distributed over contiguous blocks.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Pairwise (tree) summation; the result depends only on the input order.
double pairwise_sum(std::span<const double> values);

// Sum of f(i) over [0, n), evaluated in parallel with a fixed chunk layout and a
// pairwise reduction, so the result is bit-identical for any thread count.
double deterministic_sum(std::size_t n, const std::function<double(std::size_t)>& f);

// SplitMix64 step: derives independent 64-bit seeds from (seed, stream).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace mdm
