#include "csd/predictor.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <random>

#include <Eigen/Dense>
#include <fmt/format.h>
#include <json.hpp>

#include "csd/error.hpp"
#include "csd/io.hpp"

namespace csd {

namespace {

std::size_t total(const CitationSeries& s) {
  return std::accumulate(s.counts.begin(), s.counts.end(), std::size_t{0});
}

// Uniform draw from [0, bound) by rejection, so the sequence depends only on
// the engine and not on the standard library's distribution code.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

void check_lengths(std::span<const double> pred, std::span<const double> actual, const char* what) {
  if (pred.size() != actual.size()) throw UsageError(fmt::format("{}: length mismatch", what));
  if (pred.empty()) throw UsageError(fmt::format("{}: empty input", what));
}

std::size_t parse_count(const std::string& field, std::size_t line) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || p != field.data() + field.size()) {
    throw DataError(fmt::format("feature csv line {}: bad count '{}'", line, field));
  }
  return v;
}

}  // namespace

bool valid_horizon(int h) {
  return std::find(kHorizons.begin(), kHorizons.end(), h) != kHorizons.end();
}

std::string FeatureSet::mode_name() const {
  return variant ? std::string(column_name(*variant)) : std::string("baseline");
}

FeatureSet assemble_features(const CitationGraph& g, std::span<const DiversityResult> results,
                             std::optional<Variant> variant, int horizon) {
  if (!valid_horizon(horizon)) {
    throw UsageError(fmt::format("horizon must be 1, 5 or 10 (got {})", horizon));
  }
  std::optional<int> last_year;
  for (std::uint32_t i = 0; i < g.node_count(); ++i) {
    auto y = g.year(NodeId{i});
    if (y && (!last_year || *y > *last_year)) last_year = *y;
  }
  // The 3-year feature needs its window observed too.
  const int span = std::max(horizon, 3);

  FeatureSet out;
  out.horizon = horizon;
  out.variant = variant;
  for (const auto& r : results) {
    auto year = g.year(r.target);
    if (!year) {
      ++out.excluded_undated;
      continue;
    }
    std::optional<std::size_t> sd;
    if (variant) {
      sd = r.value(*variant);
      if (!sd) {
        ++out.excluded_no_sd;
        continue;
      }
    }
    if (*year + span - 1 > *last_year) {
      ++out.excluded_censored;
      continue;
    }
    FeatureRow row;
    row.id = g.id_of(r.target);
    row.n_references = g.references(r.target).size();
    row.citations_3yr = total(citation_series(g, r.target, *year, 3));
    row.sd_value = sd;
    row.target = total(citation_series(g, r.target, *year, horizon));
    out.rows.push_back(std::move(row));
  }
  std::sort(out.rows.begin(), out.rows.end(),
            [](const FeatureRow& a, const FeatureRow& b) { return a.id < b.id; });
  return out;
}

Split split(std::span<const FeatureRow> rows, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0 && spec.train_fraction < 1)) {
    throw UsageError("train fraction must lie strictly between 0 and 1");
  }
  if (rows.size() < 5) throw UsageError(fmt::format("split needs at least 5 rows, got {}", rows.size()));
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(spec.seed);
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    std::swap(order[i], order[bounded(rng, i + 1)]);
  }
  auto n_train = static_cast<std::size_t>(spec.train_fraction * static_cast<double>(rows.size()));
  if (n_train == 0 || n_train == rows.size()) {
    throw UsageError("split leaves the train or test side empty");
  }
  Split out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_train ? out.train : out.test).push_back(rows[order[i]]);
  }
  return out;
}

std::vector<double> feature_vector(const FeatureRow& row) {
  std::vector<double> f{static_cast<double>(row.n_references), static_cast<double>(row.citations_3yr)};
  if (row.sd_value) f.push_back(static_cast<double>(*row.sd_value));
  return f;
}

std::vector<double> targets(std::span<const FeatureRow> rows) {
  std::vector<double> y;
  y.reserve(rows.size());
  for (const auto& r : rows) y.push_back(static_cast<double>(r.target));
  return y;
}

LinearModel fit_linear(std::span<const FeatureRow> train) {
  if (train.empty()) throw UsageError("fit_linear: empty training set");
  const auto p = feature_vector(train.front()).size();
  const auto n = static_cast<Eigen::Index>(train.size());
  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(p + 1));
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = train[static_cast<std::size_t>(i)];
    auto f = feature_vector(row);
    if (f.size() != p) throw UsageError("fit_linear: rows disagree on the sd column");
    x(i, 0) = 1.0;
    for (std::size_t j = 0; j < p; ++j) x(i, static_cast<Eigen::Index>(j + 1)) = f[j];
    y(i) = static_cast<double>(row.target);
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(x);
  Eigen::VectorXd beta = cod.solve(y);
  LinearModel m;
  m.intercept = beta(0);
  for (std::size_t j = 0; j < p; ++j) m.coefficients.push_back(beta(static_cast<Eigen::Index>(j + 1)));
  m.rank_deficient = cod.rank() < x.cols();
  return m;
}

std::vector<double> predict_linear(const LinearModel& model, std::span<const FeatureRow> rows) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    auto f = feature_vector(r);
    if (f.size() != model.coefficients.size()) throw UsageError("predict_linear: feature count mismatch");
    double v = model.intercept;
    for (std::size_t j = 0; j < f.size(); ++j) v += model.coefficients[j] * f[j];
    out.push_back(v);
  }
  return out;
}

KnnModel fit_knn(std::span<const FeatureRow> train, std::size_t k) {
  if (k == 0) throw UsageError("fit_knn: k must be positive");
  if (train.size() < k) {
    throw DataError(fmt::format("fit_knn: {} training rows, fewer than k = {}", train.size(), k));
  }
  KnnModel m;
  m.k = k;
  for (const auto& r : train) {
    m.x.push_back(feature_vector(r));
    m.y.push_back(static_cast<double>(r.target));
  }
  return m;
}

std::vector<double> predict_knn(const KnnModel& model, std::span<const std::vector<double>> queries) {
  std::vector<double> out;
  out.reserve(queries.size());
  std::vector<std::pair<double, std::size_t>> dist(model.x.size());
  for (const auto& q : queries) {
    for (std::size_t i = 0; i < model.x.size(); ++i) {
      const auto& row = model.x[i];
      if (row.size() != q.size()) throw UsageError("predict_knn: feature count mismatch");
      double d = 0;
      for (std::size_t j = 0; j < q.size(); ++j) d += std::abs(row[j] - q[j]);
      dist[i] = {d, i};
    }
    auto kth = dist.begin() + static_cast<std::ptrdiff_t>(model.k);
    std::partial_sort(dist.begin(), kth, dist.end());
    double sum = 0;
    for (auto it = dist.begin(); it != kth; ++it) sum += model.y[it->second];
    out.push_back(sum / static_cast<double>(model.k));
  }
  return out;
}

std::vector<double> predict_knn(const KnnModel& model, std::span<const FeatureRow> rows) {
  std::vector<std::vector<double>> q;
  q.reserve(rows.size());
  for (const auto& r : rows) q.push_back(feature_vector(r));
  return predict_knn(model, std::span<const std::vector<double>>(q));
}

std::optional<double> r_squared(std::span<const double> pred, std::span<const double> actual) {
  check_lengths(pred, actual, "r_squared");
  const double m = std::accumulate(actual.begin(), actual.end(), 0.0) / static_cast<double>(actual.size());
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    ss_res += (actual[i] - pred[i]) * (actual[i] - pred[i]);
    ss_tot += (actual[i] - m) * (actual[i] - m);
  }
  if (ss_tot == 0) return std::nullopt;
  return 1.0 - ss_res / ss_tot;
}

double mse(std::span<const double> pred, std::span<const double> actual) {
  check_lengths(pred, actual, "mse");
  double s = 0;
  for (std::size_t i = 0; i < actual.size(); ++i) s += (actual[i] - pred[i]) * (actual[i] - pred[i]);
  return s / static_cast<double>(actual.size());
}

std::string_view to_string(ModelKind m) { return m == ModelKind::linear ? "linear" : "knn"; }

PredictionRun evaluate(const FeatureSet& features, ModelKind model, const SplitSpec& spec) {
  auto parts = split(features.rows, spec);
  PredictionRun run;
  run.model = model;
  run.horizon = features.horizon;
  run.variant_or_baseline = features.mode_name();
  run.n_train = parts.train.size();
  run.n_test = parts.test.size();
  run.seed = spec.seed;
  std::vector<double> pred;
  if (model == ModelKind::linear) {
    auto m = fit_linear(parts.train);
    run.rank_deficient = m.rank_deficient;
    pred = predict_linear(m, parts.test);
  } else {
    pred = predict_knn(fit_knn(parts.train), std::span<const FeatureRow>(parts.test));
  }
  auto actual = targets(parts.test);
  run.r2 = r_squared(pred, actual);
  run.mse = mse(pred, actual);
  return run;
}

std::string metrics_json(const PredictionRun& run) {
  nlohmann::ordered_json j;
  j["model"] = std::string(to_string(run.model));
  j["horizon"] = run.horizon;
  j["variant_or_baseline"] = run.variant_or_baseline;
  j["r2"] = run.r2 ? nlohmann::ordered_json(*run.r2) : nlohmann::ordered_json(nullptr);
  j["mse"] = run.mse;
  j["n_train"] = run.n_train;
  j["n_test"] = run.n_test;
  j["seed"] = run.seed;
  return j.dump();
}

std::string features_csv(const FeatureSet& features) {
  const bool with_sd = features.variant.has_value() ||
                       (!features.rows.empty() && features.rows.front().sd_value.has_value());
  std::string out = with_sd ? "id,n_references,citations_3yr,sd_value," : "id,n_references,citations_3yr,";
  out += fmt::format("target_h{}\n", features.horizon);
  for (const auto& r : features.rows) {
    out += fmt::format("{},{},{},", io::csv_escape(r.id), r.n_references, r.citations_3yr);
    if (with_sd) out += fmt::format("{},", r.sd_value.value_or(0));
    out += fmt::format("{}\n", r.target);
  }
  return out;
}

void export_features(const FeatureSet& features, const std::filesystem::path& path) {
  io::write_file_atomic(path, features_csv(features));
}

FeatureSet parse_features_csv(std::string_view text) {
  FeatureSet out;
  bool with_sd = false;
  bool header_seen = false;
  io::for_each_line(text, [&](std::string_view line, std::size_t no) {
    if (line.empty()) return;
    auto fields = io::split_csv_line(line);
    if (!header_seen) {
      header_seen = true;
      with_sd = fields.size() == 5;
      const std::size_t n = with_sd ? 5 : 4;
      if (fields.size() != n || fields[0] != "id" || fields[1] != "n_references" ||
          fields[2] != "citations_3yr" || (with_sd && fields[3] != "sd_value") ||
          !fields[n - 1].starts_with("target_h")) {
        throw DataError("feature csv: unexpected header");
      }
      const auto& h = fields[n - 1];
      int horizon = 0;
      std::from_chars(h.data() + 8, h.data() + h.size(), horizon);
      if (!valid_horizon(horizon)) throw DataError(fmt::format("feature csv: bad horizon column '{}'", h));
      out.horizon = horizon;
      return;
    }
    if (fields.size() != (with_sd ? 5u : 4u)) {
      throw DataError(fmt::format("feature csv line {}: expected {} fields", no, with_sd ? 5 : 4));
    }
    FeatureRow r;
    r.id = fields[0];
    r.n_references = parse_count(fields[1], no);
    r.citations_3yr = parse_count(fields[2], no);
    if (with_sd) r.sd_value = parse_count(fields[3], no);
    r.target = parse_count(fields.back(), no);
    out.rows.push_back(std::move(r));
  });
  if (!header_seen) throw DataError("feature csv: empty input");
  return out;
}

}  // namespace csd
