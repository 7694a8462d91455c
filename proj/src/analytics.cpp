#include "csd/analytics.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include <fmt/format.h>
#include <json.hpp>

#include "csd/error.hpp"
#include "csd/io.hpp"
#include "csd/stats.hpp"

namespace csd {

std::string_view to_string(StatKind s) { return s == StatKind::median ? "median" : "iqrmean"; }

std::optional<StatKind> parse_stat_kind(std::string_view text) {
  if (text == "median") return StatKind::median;
  if (text == "iqrmean" || text == "iqr_mean") return StatKind::iqr_mean;
  return std::nullopt;
}

std::string_view to_string(CorrelationMode m) {
  return m == CorrelationMode::grouped ? "grouped" : "per_paper";
}

CorrelationReport correlation_by_diversity(std::span<const DiversityPoint> points, StatKind stat,
                                           CorrelationMode mode) {
  std::map<std::size_t, std::vector<double>> groups;
  for (const auto& p : points) groups[p.sd].push_back(p.citations);
  if (groups.size() < 2) throw DataError("fewer than 2 diversity groups");

  CorrelationReport report;
  report.stat = stat;
  report.mode = mode;
  report.n_papers = points.size();
  std::vector<double> xs, ys;
  for (const auto& [sd, cites] : groups) {
    double s = stat == StatKind::median ? stats::median(cites) : stats::iqr_mean(cites);
    report.groups.push_back({sd, cites.size(), s});
    xs.push_back(static_cast<double>(sd));
    ys.push_back(s);
  }
  if (mode == CorrelationMode::per_paper) {
    xs.clear();
    ys.clear();
    for (const auto& p : points) {
      xs.push_back(static_cast<double>(p.sd));
      ys.push_back(p.citations);
    }
  }
  report.r = stats::pearson(xs, ys);
  return report;
}

std::vector<DiversityPoint> diversity_points(const CitationGraph& g,
                                             std::span<const DiversityResult> results,
                                             Variant variant, int window) {
  std::vector<DiversityPoint> points;
  for (const auto& r : results) {
    auto sd = r.value(variant);
    auto year = g.year(r.target);
    if (!sd || !year) continue;
    auto series = citation_series(g, r.target, *year, window);
    auto total = std::accumulate(series.counts.begin(), series.counts.end(), std::size_t{0});
    points.push_back({*sd, static_cast<double>(total)});
  }
  return points;
}

std::string correlation_csv(std::span<const CorrelationReport> reports) {
  std::string out = "variant,stat,mode,sd,n_papers,statistic\n";
  for (const auto& rep : reports) {
    for (const auto& grp : rep.groups) {
      out += fmt::format("{},{},{},{},{},{}\n", rep.variant, to_string(rep.stat), to_string(rep.mode),
                         grp.sd, grp.n, io::format_double(grp.statistic));
    }
  }
  return out;
}

std::string correlation_json(const CorrelationReport& report) {
  nlohmann::ordered_json j;
  j["variant"] = report.variant;
  j["stat"] = std::string(to_string(report.stat));
  j["r"] = report.r ? nlohmann::ordered_json(*report.r) : nlohmann::ordered_json(nullptr);
  j["n_groups"] = report.groups.size();
  j["mode"] = std::string(to_string(report.mode));
  return j.dump();
}

std::vector<double> normalize_trend(std::span<const double> yearly) {
  if (yearly.size() != kTrendYears) {
    throw UsageError(fmt::format("normalize_trend: expected {} yearly counts, got {}", kTrendYears,
                                 yearly.size()));
  }
  double total = 0;
  for (double q : yearly) {
    if (q < 0) throw UsageError("normalize_trend: negative citation count");
    total += q;
  }
  std::vector<double> out(yearly.size(), 0.0);
  if (total == 0) return out;
  std::transform(yearly.begin(), yearly.end(), out.begin(), [&](double q) { return q / total; });
  return out;
}

std::string_view to_string(DiversityBin b) {
  switch (b) {
    case DiversityBin::low: return "low";
    case DiversityBin::medium: return "medium";
    case DiversityBin::high: return "high";
  }
  return "low";
}

std::optional<DiversityBin> bin_of(std::size_t sd) {
  if (sd == 0) return std::nullopt;
  if (sd <= 3) return DiversityBin::low;
  if (sd <= 6) return DiversityBin::medium;
  return DiversityBin::high;
}

TrendReport trend_by_bin(std::span<const TrendInput> papers) {
  std::array<std::vector<double>, 3> sums;
  std::array<std::size_t, 3> counts{};
  for (auto& s : sums) s.assign(kTrendYears, 0.0);
  TrendReport report;
  for (const auto& p : papers) {
    auto norm = normalize_trend(p.yearly);
    auto bin = bin_of(p.sd);
    if (!bin) {
      ++report.unbinned;
      continue;
    }
    auto b = static_cast<std::size_t>(*bin);
    ++counts[b];
    for (std::size_t t = 0; t < kTrendYears; ++t) sums[b][t] += norm[t];
  }
  for (std::size_t b = 0; b < 3; ++b) {
    auto bin = static_cast<DiversityBin>(b);
    if (counts[b] == 0) {
      report.omitted.push_back(bin);
      continue;
    }
    TrendSeries s{bin, std::move(sums[b]), counts[b]};
    for (auto& v : s.mean_normalized) v /= static_cast<double>(counts[b]);
    report.series.push_back(std::move(s));
  }
  return report;
}

std::vector<TrendInput> trend_inputs(const CitationGraph& g, std::span<const DiversityResult> results,
                                     Variant variant) {
  std::vector<TrendInput> out;
  for (const auto& r : results) {
    auto sd = r.value(variant);
    auto year = g.year(r.target);
    if (!sd || !year) continue;
    auto series = citation_series(g, r.target, *year, static_cast<int>(kTrendYears));
    out.push_back({*sd, std::vector<double>(series.counts.begin(), series.counts.end())});
  }
  return out;
}

std::string trends_csv(const TrendReport& report) {
  std::string out = "bin,year_offset,mean_normalized,n_papers\n";
  for (const auto& s : report.series) {
    for (std::size_t t = 0; t < s.mean_normalized.size(); ++t) {
      out += fmt::format("{},{},{},{}\n", to_string(s.bin), t, io::format_double(s.mean_normalized[t]),
                         s.n_papers);
    }
  }
  return out;
}

std::optional<double> topic_correlation(std::span<const DiversityResult> results,
                                        const CitationGraph& g, const Corpus& corpus,
                                        Variant variant) {
  std::vector<double> xs, ys;
  bool any_topics = false;
  for (const auto& r : results) {
    auto sd = r.value(variant);
    const auto* rec = corpus.find(g.id_of(r.target));
    if (!sd || !rec) continue;
    any_topics = any_topics || rec->topics.has_value();
    xs.push_back(static_cast<double>(*sd));
    ys.push_back(static_cast<double>(rec->n_topics()));
  }
  if (!any_topics) throw DataError("no topic data on the selected papers");
  if (xs.size() < 2) throw DataError("topic correlation needs at least two papers");
  return stats::pearson(xs, ys);
}

}  // namespace csd
