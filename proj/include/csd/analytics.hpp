#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "csd/corpus.hpp"
#include "csd/diversity.hpp"
#include "csd/graph.hpp"

namespace csd {

enum class StatKind { median, iqr_mean };

std::string_view to_string(StatKind s);
/// "median", "iqrmean" (also "iqr_mean").
std::optional<StatKind> parse_stat_kind(std::string_view text);

/// grouped: one point per distinct sd value (sd, statistic of citations).
/// per_paper: one point per paper (sd, citations).
enum class CorrelationMode { grouped, per_paper };

std::string_view to_string(CorrelationMode m);

struct DiversityPoint {
  std::size_t sd;
  double citations;
};

struct GroupSummary {
  std::size_t sd;
  std::size_t n;
  double statistic;
};

struct CorrelationReport {
  std::string variant;
  StatKind stat = StatKind::median;
  CorrelationMode mode = CorrelationMode::grouped;
  std::vector<GroupSummary> groups;  // ascending sd
  std::size_t n_papers = 0;
  /// Empty when r is undefined (a constant series).
  std::optional<double> r;
};

/// Groups papers by exact sd value and correlates sd with the chosen
/// citation statistic (or with raw citations in per_paper mode). Throws
/// DataError "fewer than 2 diversity groups" when all papers share one sd.
CorrelationReport correlation_by_diversity(std::span<const DiversityPoint> points, StatKind stat,
                                           CorrelationMode mode = CorrelationMode::grouped);

/// Citations received within `window` calendar years starting at the
/// paper's publication year, paired with its sd for `variant`. Papers
/// lacking a year or a value for the variant are skipped.
std::vector<DiversityPoint> diversity_points(const CitationGraph& g,
                                             std::span<const DiversityResult> results,
                                             Variant variant, int window = 3);

/// Per-group rows: `variant,stat,mode,sd,n_papers,statistic`.
std::string correlation_csv(std::span<const CorrelationReport> reports);
/// `{"variant", "stat", "r", "n_groups", "mode"}`; r is null when undefined.
std::string correlation_json(const CorrelationReport& report);

inline constexpr std::size_t kTrendYears = 10;

/// Q_i / sum(Q). All-zero input maps to all zeros. Throws UsageError on a
/// negative entry or a length other than kTrendYears.
std::vector<double> normalize_trend(std::span<const double> yearly);

enum class DiversityBin { low, medium, high };

std::string_view to_string(DiversityBin b);
/// low = 1..3, medium = 4..6, high = 7+; sd 0 has no bin.
std::optional<DiversityBin> bin_of(std::size_t sd);

struct TrendSeries {
  DiversityBin bin;
  std::vector<double> mean_normalized;  // kTrendYears entries
  std::size_t n_papers = 0;
};

struct TrendInput {
  std::size_t sd;
  std::vector<double> yearly;  // kTrendYears raw counts
};

struct TrendReport {
  std::vector<TrendSeries> series;  // non-empty bins, low→high
  std::vector<DiversityBin> omitted;  // bins with no papers
  std::size_t unbinned = 0;  // papers with sd 0
};

/// Normalises each paper's series, then averages per bin.
TrendReport trend_by_bin(std::span<const TrendInput> papers);

/// Builds TrendInput from diversity results and each paper's citations in
/// the kTrendYears years from publication. Skips undated papers and papers
/// without a value for `variant`.
std::vector<TrendInput> trend_inputs(const CitationGraph& g, std::span<const DiversityResult> results,
                                     Variant variant);

/// `bin,year_offset,mean_normalized,n_papers`.
std::string trends_csv(const TrendReport& report);

/// Pearson r between sd (for `variant`) and topic count across the
/// results' papers. Throws DataError when no paper carries topics;
/// nullopt when r is undefined.
std::optional<double> topic_correlation(std::span<const DiversityResult> results,
                                        const CitationGraph& g, const Corpus& corpus,
                                        Variant variant);

}  // namespace csd
