#include "csd/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "csd/error.hpp"

namespace csd::stats {

namespace {

std::vector<double> sorted_copy(std::span<const double> values, const char* what) {
  if (values.empty()) throw UsageError(std::string(what) + ": empty input");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

QuartileIndices quartile_indices(std::size_t n) {
  return {(n + 3) / 4, (3 * n + 3) / 4};
}

double mean(std::span<const double> values) {
  if (values.empty()) throw UsageError("mean: empty input");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double median(std::span<const double> values) {
  auto v = sorted_copy(values, "median");
  auto n = v.size();
  return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

double lower_quartile(std::span<const double> values) {
  auto v = sorted_copy(values, "lower_quartile");
  return v[quartile_indices(v.size()).q1 - 1];
}

double iqr_mean(std::span<const double> values) {
  auto v = sorted_copy(values, "iqr_mean");
  if (v.size() < 4) return mean(v);
  auto [q1, q3] = quartile_indices(v.size());
  double sum = std::accumulate(v.begin() + static_cast<std::ptrdiff_t>(q1 - 1),
                               v.begin() + static_cast<std::ptrdiff_t>(q3), 0.0);
  return sum / static_cast<double>(q3 - q1 + 1);
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw UsageError("pearson: length mismatch");
  if (x.size() < 2) throw UsageError("pearson: need at least two points");
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
  };
  if (constant(x) || constant(y)) return std::nullopt;
  const double mx = mean(x), my = mean(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace csd::stats
