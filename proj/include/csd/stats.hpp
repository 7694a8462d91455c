#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace csd::stats {

/// Nearest-rank quartile positions on an ascending sort of n values,
/// 1-based: q1 = ceil(n/4), q3 = ceil(3n/4).
struct QuartileIndices {
  std::size_t q1;
  std::size_t q3;
};

QuartileIndices quartile_indices(std::size_t n);

double mean(std::span<const double> values);

/// Mean of the two middle values for even n.
double median(std::span<const double> values);

/// Sorted value at the q1 position.
double lower_quartile(std::span<const double> values);

/// Mean of sorted values at positions q1..q3 inclusive; plain mean for n < 4.
double iqr_mean(std::span<const double> values);

/// Pearson's r. nullopt when either series is constant (r undefined).
/// Throws UsageError for mismatched lengths or fewer than two points.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

}  // namespace csd::stats
