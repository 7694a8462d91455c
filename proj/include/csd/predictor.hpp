#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "csd/diversity.hpp"
#include "csd/graph.hpp"

namespace csd {

inline constexpr std::array<int, 3> kHorizons = {1, 5, 10};

bool valid_horizon(int h);

struct FeatureRow {
  std::string id;
  std::size_t n_references = 0;
  std::size_t citations_3yr = 0;
  std::optional<std::size_t> sd_value;  // absent in baseline mode
  std::size_t target = 0;  // citations in the first `horizon` years

  bool operator==(const FeatureRow&) const = default;
};

struct FeatureSet {
  std::vector<FeatureRow> rows;  // ascending id
  int horizon = 1;
  std::optional<Variant> variant;  // empty = baseline
  std::size_t excluded_undated = 0;
  std::size_t excluded_no_sd = 0;
  /// Papers too recent for the horizon to be observed in the corpus.
  std::size_t excluded_censored = 0;

  std::string mode_name() const;
};

/// One row per paper in `results` with a year, a value for `variant` (unless
/// baseline), and a horizon window ending no later than the corpus's last
/// year. Throws UsageError for a horizon outside {1, 5, 10}.
FeatureSet assemble_features(const CitationGraph& g, std::span<const DiversityResult> results,
                             std::optional<Variant> variant, int horizon);

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
};

struct Split {
  std::vector<FeatureRow> train;
  std::vector<FeatureRow> test;
};

/// Seeded shuffle, then the first floor(fraction * n) rows train. Throws
/// UsageError with fewer than 5 rows or a fraction outside (0, 1).
Split split(std::span<const FeatureRow> rows, const SplitSpec& spec);

/// n_references, citations_3yr and, when present, sd_value.
std::vector<double> feature_vector(const FeatureRow& row);

struct LinearModel {
  double intercept = 0;
  std::vector<double> coefficients;
  /// Set when the design matrix was rank deficient; the fit is then the
  /// minimum-norm least-squares solution.
  bool rank_deficient = false;
};

/// Ordinary least squares with an intercept.
LinearModel fit_linear(std::span<const FeatureRow> train);
std::vector<double> predict_linear(const LinearModel& model, std::span<const FeatureRow> rows);

struct KnnModel {
  std::size_t k = 7;
  std::vector<std::vector<double>> x;
  std::vector<double> y;
};

/// Stores the training rows. Throws DataError when there are fewer than k (UsageError for k = 0).
KnnModel fit_knn(std::span<const FeatureRow> train, std::size_t k = 7);
/// Mean target of the k nearest rows under Manhattan distance. Equal
/// distances go to the lower training index. Features are not scaled.
std::vector<double> predict_knn(const KnnModel& model, std::span<const FeatureRow> rows);
std::vector<double> predict_knn(const KnnModel& model, std::span<const std::vector<double>> queries);

/// 1 - SSres / SStot; nullopt when `actual` is constant.
std::optional<double> r_squared(std::span<const double> pred, std::span<const double> actual);
double mse(std::span<const double> pred, std::span<const double> actual);

std::vector<double> targets(std::span<const FeatureRow> rows);

enum class ModelKind { linear, knn };
std::string_view to_string(ModelKind m);

struct PredictionRun {
  ModelKind model = ModelKind::linear;
  int horizon = 1;
  std::string variant_or_baseline;
  std::optional<double> r2;
  double mse = 0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::uint64_t seed = 0;
  bool rank_deficient = false;
};

/// Split, fit on train, score on test.
PredictionRun evaluate(const FeatureSet& features, ModelKind model, const SplitSpec& spec);

/// `{model, horizon, variant_or_baseline, r2, mse, n_train, n_test, seed}`.
std::string metrics_json(const PredictionRun& run);

/// `id,n_references,citations_3yr[,sd_value],target_h{h}`.
std::string features_csv(const FeatureSet& features);
void export_features(const FeatureSet& features, const std::filesystem::path& path);
/// Inverse of features_csv; the sd column and horizon come from the header.
FeatureSet parse_features_csv(std::string_view text);

}  // namespace csd
