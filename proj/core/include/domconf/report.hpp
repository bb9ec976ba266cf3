#pragma once

// Aggregation of bench results: summaries, paired significance tests,
// bootstrap spread, and table output.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "domconf/bench.hpp"

namespace domconf::report {

/// Metrics of one (planner, domain, variant) group over its median records.
/// The IPC score compares every planner/variant pair of the same domain.
struct MetricsSummary {
  std::string planner;
  std::string domain;
  std::string variant;
  std::size_t problems = 0;
  std::size_t solved = 0;
  double coverage = 0.0;
  double par10 = 0.0;
  double ipc = 0.0;
  double cutoff = 0.0;
};

/// Rows sorted by (planner, domain, variant); independent of record order.
std::vector<MetricsSummary> summarize(const std::vector<bench::RunRecord>& records);

/// Best/worst/median/stdev across the variants of one (planner, domain).
struct VariantSpread {
  std::string planner;
  std::string domain;
  std::size_t variants = 0;
  double par10_best = 0.0;
  double par10_worst = 0.0;
  double par10_median = 0.0;
  double par10_stdev = 0.0;  ///< population standard deviation
  std::size_t coverage_best = 0;
  std::size_t coverage_worst = 0;
  double coverage_median = 0.0;
};

std::vector<VariantSpread> spread_by_variant(const std::vector<MetricsSummary>& summaries);

/// Per planner: domain-wise median PAR10 and coverage, summed over domains.
struct CumulativeMedian {
  std::string planner;
  std::size_t domains = 0;
  double par10 = 0.0;
  double coverage = 0.0;
};

std::vector<CumulativeMedian> cumulative_median(const std::vector<VariantSpread>& spreads);

/// Mean of the two middle values for even sizes.
double median(std::vector<double> values);

/// Linear interpolation between order statistics (R type 7).
double quantile(std::vector<double> values, double q);

// ---- Wilcoxon signed-rank ---------------------------------------------

struct PairedSample {
  std::string label_a;
  std::string label_b;
  std::vector<std::string> keys;
  std::vector<std::pair<double, double>> pairs;
};

/// Picks median records by planner, optionally narrowed to a domain and a
/// variant. Written `planner[@variant]` on the command line.
struct Selector {
  std::string planner;
  std::optional<std::string> domain;
  std::optional<std::string> variant;

  static Selector parse(const std::string& text);
  std::string label() const;
};

/// PAR10 values of the two selections matched by problem. Throws unless
/// both cover the same problems exactly once.
PairedSample paired_par10(const std::vector<bench::RunRecord>& records, const Selector& a, const Selector& b);

enum class WilcoxonMethod { Auto, Exact, Normal };

struct WilcoxonResult {
  bool inconclusive = false;  ///< every difference was zero
  std::size_t n = 0;          ///< nonzero differences
  std::size_t zeros = 0;
  double w_plus = 0.0;
  double w_minus = 0.0;
  double statistic = 0.0;  ///< min(W+, W-)
  double p_value = 1.0;
  bool significant = false;
  bool exact = false;
  double alpha = 0.05;
};

/// Largest n handled by exhaustive enumeration under Auto.
inline constexpr std::size_t kWilcoxonExactLimit = 25;

/// Two-sided test on the differences. Zeros are discarded, tied absolute
/// values share their average rank. Exact p-values come from the full
/// distribution of W+ over all 2^n sign assignments; the normal
/// approximation uses continuity and tie corrections.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& differences, double alpha = 0.05,
                                    WilcoxonMethod method = WilcoxonMethod::Auto);

/// Differences a - b.
WilcoxonResult wilcoxon_signed_rank(const PairedSample& sample, double alpha = 0.05,
                                    WilcoxonMethod method = WilcoxonMethod::Auto);

nlohmann::json to_json(const WilcoxonResult& r);

// ---- bootstrap --------------------------------------------------------

struct BoxSummary {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  std::size_t resamples = 0;
  std::size_t problems = 0;
  std::uint64_t seed = 0;
};

/// `per_problem[i]` holds one PAR10 value per configuration run on problem
/// i. Each resample draws one configuration per problem uniformly with
/// replacement, from a seed derived from (seed, resample index), and
/// records the mean.
BoxSummary bootstrap_par10(const std::vector<std::vector<double>>& per_problem, std::size_t resamples,
                           std::uint64_t seed);

/// Median-record PAR10 values of one (planner, domain) grouped by problem,
/// one entry per variant.
std::vector<std::vector<double>> per_problem_par10(const std::vector<bench::RunRecord>& records,
                                                   const std::string& planner, const std::string& domain);

nlohmann::json to_json(const BoxSummary& b);

// ---- tables -----------------------------------------------------------

enum class TableFormat { Csv, Tsv, Json };

TableFormat format_from_string(const std::string& s);

/// Cells are strings, numbers or null (rendered empty). The first
/// `key_columns` columns identify a row; the long TSV format repeats them
/// once per remaining column.
struct Table {
  std::vector<std::string> columns;
  std::size_t key_columns = 0;
  std::vector<std::vector<nlohmann::json>> rows;
};

Table summary_table(const std::vector<MetricsSummary>& summaries);
Table spread_table(const std::vector<VariantSpread>& spreads);
Table cumulative_table(const std::vector<CumulativeMedian>& rows);

/// CSV (RFC 4180 quoting), long-format TSV, or a JSON array of objects.
std::string emit(const Table& table, TableFormat format);

/// Shortest decimal that reads back to the same double; empty for NaN and
/// infinities.
std::string format_number(double x);

}  // namespace domconf::report
