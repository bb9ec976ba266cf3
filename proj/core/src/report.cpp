#include "domconf/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "domconf/rng.hpp"

namespace domconf::report {

using bench::RunRecord;

double median(std::vector<double> values) {
  if (values.empty()) throw InputError("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw InputError("quantile of an empty set");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = static_cast<std::size_t>(std::ceil(h));
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<MetricsSummary> summarize(const std::vector<RunRecord>& records) {
  if (records.empty()) throw InputError("nothing to summarize: no run records");
  const auto medians = bench::median_records(records);

  std::map<std::tuple<std::string, std::string, std::string>, std::vector<RunRecord>> groups;
  std::map<std::string, std::vector<bench::Outcome>> outcomes_by_domain;
  for (const auto& r : medians) {
    groups[{r.planner, r.domain, r.variant}].push_back(r);
    outcomes_by_domain[r.domain].push_back({r.planner + '\t' + r.variant, r.problem, r.solved, r.time});
  }
  std::map<std::string, std::map<std::string, double>> ipc;
  for (const auto& [domain, outcomes] : outcomes_by_domain) ipc[domain] = bench::ipc_scores(outcomes);

  std::vector<MetricsSummary> out;
  for (const auto& [key, group] : groups) {
    const auto& [planner, domain, variant] = key;
    const double cutoff = group.front().cutoff;
    for (const auto& r : group)
      if (r.cutoff != cutoff)
        throw InputError("records of " + planner + " on " + domain + " use different cutoffs");
    MetricsSummary s;
    s.planner = planner;
    s.domain = domain;
    s.variant = variant;
    const auto cov = bench::coverage(group);
    s.problems = cov.total;
    s.solved = cov.solved;
    s.coverage = cov.fraction();
    s.par10 = bench::par10(group, cutoff);
    s.ipc = ipc.at(domain).at(planner + '\t' + variant);
    s.cutoff = cutoff;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<VariantSpread> spread_by_variant(const std::vector<MetricsSummary>& summaries) {
  std::map<std::pair<std::string, std::string>, std::vector<const MetricsSummary*>> groups;
  for (const auto& s : summaries) groups[{s.planner, s.domain}].push_back(&s);
  std::vector<VariantSpread> out;
  for (const auto& [key, group] : groups) {
    VariantSpread v;
    v.planner = key.first;
    v.domain = key.second;
    v.variants = group.size();
    std::vector<double> par10;
    std::vector<double> solved;
    for (const auto* s : group) {
      par10.push_back(s->par10);
      solved.push_back(static_cast<double>(s->solved));
    }
    v.par10_best = *std::min_element(par10.begin(), par10.end());
    v.par10_worst = *std::max_element(par10.begin(), par10.end());
    v.par10_median = median(par10);
    const double mean = std::accumulate(par10.begin(), par10.end(), 0.0) / static_cast<double>(par10.size());
    double ss = 0.0;
    for (double x : par10) ss += (x - mean) * (x - mean);
    v.par10_stdev = std::sqrt(ss / static_cast<double>(par10.size()));
    v.coverage_best = static_cast<std::size_t>(*std::max_element(solved.begin(), solved.end()));
    v.coverage_worst = static_cast<std::size_t>(*std::min_element(solved.begin(), solved.end()));
    v.coverage_median = median(solved);
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<CumulativeMedian> cumulative_median(const std::vector<VariantSpread>& spreads) {
  std::map<std::string, CumulativeMedian> acc;
  for (const auto& s : spreads) {
    auto& c = acc[s.planner];
    c.planner = s.planner;
    ++c.domains;
    c.par10 += s.par10_median;
    c.coverage += s.coverage_median;
  }
  std::vector<CumulativeMedian> out;
  for (auto& [_, c] : acc) out.push_back(std::move(c));
  return out;
}

// ---- Wilcoxon ---------------------------------------------------------

Selector Selector::parse(const std::string& text) {
  Selector s;
  const auto at = text.find('@');
  s.planner = text.substr(0, at);
  if (at != std::string::npos) s.variant = text.substr(at + 1);
  if (s.planner.empty()) throw InputError("empty planner in selector '" + text + "'");
  return s;
}

std::string Selector::label() const {
  std::string out = planner;
  if (domain) out += " on " + *domain;
  if (variant) out += "@" + *variant;
  return out;
}

PairedSample paired_par10(const std::vector<RunRecord>& records, const Selector& a, const Selector& b) {
  const auto medians = bench::median_records(records);
  auto collect = [&](const Selector& s) {
    std::map<std::string, double> out;
    for (const auto& r : medians) {
      if (r.planner != s.planner || (s.domain && r.domain != *s.domain) || (s.variant && r.variant != *s.variant))
        continue;
      const std::string key = s.domain ? r.problem : r.domain + "/" + r.problem;
      if (!out.emplace(key, bench::par10_value(r, r.cutoff)).second)
        throw InputError("selection '" + s.label() + "' matches several records for " + key +
                         "; name a variant or a domain");
    }
    if (out.empty()) throw InputError("selection '" + s.label() + "' matches no records");
    return out;
  };
  const auto va = collect(a);
  const auto vb = collect(b);
  PairedSample sample;
  sample.label_a = a.label();
  sample.label_b = b.label();
  for (const auto& [key, x] : va) {
    auto it = vb.find(key);
    if (it == vb.end()) throw InputError("'" + sample.label_b + "' has no record for " + key);
    sample.keys.push_back(key);
    sample.pairs.emplace_back(x, it->second);
  }
  if (vb.size() != va.size()) throw InputError("'" + sample.label_a + "' lacks problems present in '" + sample.label_b + "'");
  return sample;
}

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& differences, double alpha, WilcoxonMethod method) {
  WilcoxonResult r;
  r.alpha = alpha;
  std::vector<double> d;
  for (double x : differences) {
    if (std::isnan(x)) throw InputError("difference is not a number");
    if (x == 0.0) {
      ++r.zeros;
    } else {
      d.push_back(x);
    }
  }
  r.n = d.size();
  if (d.empty()) {
    r.inconclusive = true;
    return r;
  }

  // Average ranks of |d|, kept doubled so that they stay integers.
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return std::abs(d[x]) < std::abs(d[y]); });
  std::vector<std::size_t> rank2(d.size());
  double tie_term = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) ++j;
    const std::size_t doubled = (i + 1) + (j + 1);
    for (std::size_t k = i; k <= j; ++k) rank2[order[k]] = doubled;
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  std::size_t w_plus2 = 0;
  std::size_t total2 = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    total2 += rank2[i];
    if (d[i] > 0) w_plus2 += rank2[i];
  }
  r.w_plus = static_cast<double>(w_plus2) / 2.0;
  r.w_minus = static_cast<double>(total2 - w_plus2) / 2.0;
  r.statistic = std::min(r.w_plus, r.w_minus);

  const bool exact = method == WilcoxonMethod::Exact || (method == WilcoxonMethod::Auto && r.n <= kWilcoxonExactLimit);
  if (exact) {
    if (r.n > 62) throw InputError("exact Wilcoxon test supports at most 62 differences");
    // counts[s]: sign assignments whose doubled W+ equals s.
    std::vector<double> counts(total2 + 1, 0.0);
    counts[0] = 1.0;
    std::size_t reach = 0;
    for (auto rk : rank2) {
      for (std::size_t s = reach + 1; s-- > 0;)
        if (counts[s] != 0.0) counts[s + rk] += counts[s];
      reach += rk;
    }
    const double all = std::ldexp(1.0, static_cast<int>(r.n));
    double lower = 0.0;
    double upper = 0.0;
    for (std::size_t s = 0; s <= total2; ++s) {
      if (s <= w_plus2) lower += counts[s];
      if (s >= w_plus2) upper += counts[s];
    }
    r.p_value = std::min(1.0, 2.0 * std::min(lower, upper) / all);
    r.exact = true;
  } else {
    const double n = static_cast<double>(r.n);
    const double mean = n * (n + 1.0) / 4.0;
    const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    const double z = var > 0.0 ? std::max(0.0, std::abs(r.w_plus - mean) - 0.5) / std::sqrt(var) : 0.0;
    r.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  }
  r.significant = r.p_value < alpha;
  return r;
}

WilcoxonResult wilcoxon_signed_rank(const PairedSample& sample, double alpha, WilcoxonMethod method) {
  std::vector<double> d;
  for (const auto& [a, b] : sample.pairs) d.push_back(a - b);
  return wilcoxon_signed_rank(d, alpha, method);
}

nlohmann::json to_json(const WilcoxonResult& r) {
  nlohmann::json j;
  j["inconclusive"] = r.inconclusive;
  j["n"] = r.n;
  j["zeros"] = r.zeros;
  j["wPlus"] = r.w_plus;
  j["wMinus"] = r.w_minus;
  j["statistic"] = r.statistic;
  j["pValue"] = r.inconclusive ? nlohmann::json(nullptr) : nlohmann::json(r.p_value);
  j["significant"] = r.significant;
  j["method"] = r.inconclusive ? "none" : (r.exact ? "exact" : "normal");
  j["alpha"] = r.alpha;
  return j;
}

// ---- bootstrap --------------------------------------------------------

BoxSummary bootstrap_par10(const std::vector<std::vector<double>>& per_problem, std::size_t resamples,
                           std::uint64_t seed) {
  if (per_problem.empty()) throw InputError("bootstrap needs at least one problem");
  if (resamples == 0) throw InputError("bootstrap needs at least one resample");
  for (const auto& p : per_problem)
    if (p.empty()) throw InputError("bootstrap needs at least one configuration per problem");
  std::vector<double> means;
  means.reserve(resamples);
  for (std::size_t r = 0; r < resamples; ++r) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    double sum = 0.0;
    for (const auto& p : per_problem) sum += p[static_cast<std::size_t>(rng.below(p.size()))];
    means.push_back(sum / static_cast<double>(per_problem.size()));
  }
  BoxSummary b;
  b.min = *std::min_element(means.begin(), means.end());
  b.max = *std::max_element(means.begin(), means.end());
  b.q1 = quantile(means, 0.25);
  b.median = quantile(means, 0.5);
  b.q3 = quantile(means, 0.75);
  b.resamples = resamples;
  b.problems = per_problem.size();
  b.seed = seed;
  return b;
}

std::vector<std::vector<double>> per_problem_par10(const std::vector<RunRecord>& records, const std::string& planner,
                                                   const std::string& domain) {
  std::map<std::string, std::vector<double>> by_problem;
  for (const auto& r : bench::median_records(records))
    if (r.planner == planner && r.domain == domain) by_problem[r.problem].push_back(bench::par10_value(r, r.cutoff));
  if (by_problem.empty()) throw InputError("no records for planner '" + planner + "' on domain '" + domain + "'");
  std::vector<std::vector<double>> out;
  for (auto& [_, v] : by_problem) out.push_back(std::move(v));
  return out;
}

nlohmann::json to_json(const BoxSummary& b) {
  return {{"min", b.min},
          {"q1", b.q1},
          {"median", b.median},
          {"q3", b.q3},
          {"max", b.max},
          {"metadata",
           {{"resamples", b.resamples},
            {"problems", b.problems},
            {"seed", b.seed},
            {"whiskers", "min/max"},
            {"quantiles", "linear interpolation"},
            {"resamplingUnit", "one configuration per problem, uniform with replacement"}}}};
}

// ---- tables -----------------------------------------------------------

TableFormat format_from_string(const std::string& s) {
  if (s == "csv") return TableFormat::Csv;
  if (s == "tsv") return TableFormat::Tsv;
  if (s == "json") return TableFormat::Json;
  throw InputError("unknown format '" + s + "' (expected csv, tsv or json)");
}

std::string format_number(double x) {
  if (!std::isfinite(x)) return {};
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string{};
}

namespace {

nlohmann::json number(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

std::string render(const nlohmann::json& cell) {
  if (cell.is_null()) return {};
  if (cell.is_string()) return cell.get<std::string>();
  if (cell.is_number_float()) return format_number(cell.get<double>());
  return cell.dump();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string tsv_field(std::string s) {
  for (char& c : s)
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  return s;
}

}  // namespace

Table summary_table(const std::vector<MetricsSummary>& summaries) {
  auto sorted = summaries;
  std::sort(sorted.begin(), sorted.end(), [](const MetricsSummary& a, const MetricsSummary& b) {
    return std::tie(a.planner, a.domain, a.variant) < std::tie(b.planner, b.domain, b.variant);
  });
  Table t{{"planner", "domain", "variant", "problems", "solved", "coverage", "par10", "ipc"}, 3, {}};
  for (const auto& s : sorted)
    t.rows.push_back({s.planner, s.domain, s.variant, s.problems, s.solved, number(s.coverage), number(s.par10),
                      number(s.ipc)});
  return t;
}

Table spread_table(const std::vector<VariantSpread>& spreads) {
  auto sorted = spreads;
  std::sort(sorted.begin(), sorted.end(), [](const VariantSpread& a, const VariantSpread& b) {
    return std::tie(a.planner, a.domain) < std::tie(b.planner, b.domain);
  });
  Table t{{"planner", "domain", "variants", "par10_best", "par10_worst", "par10_median", "par10_stdev",
           "coverage_best", "coverage_worst", "coverage_median"},
          2,
          {}};
  for (const auto& s : sorted)
    t.rows.push_back({s.planner, s.domain, s.variants, number(s.par10_best), number(s.par10_worst),
                      number(s.par10_median), number(s.par10_stdev), s.coverage_best, s.coverage_worst,
                      number(s.coverage_median)});
  return t;
}

Table cumulative_table(const std::vector<CumulativeMedian>& rows) {
  Table t{{"planner", "domains", "par10_cumulative_median", "coverage_cumulative_median"}, 1, {}};
  for (const auto& r : rows) t.rows.push_back({r.planner, r.domains, number(r.par10), number(r.coverage)});
  return t;
}

std::string emit(const Table& table, TableFormat format) {
  if (table.rows.empty()) throw InputError("nothing to emit: the table is empty");
  std::string out;
  switch (format) {
    case TableFormat::Csv: {
      for (std::size_t c = 0; c < table.columns.size(); ++c) out += (c ? "," : "") + csv_field(table.columns[c]);
      out += "\r\n";
      for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + csv_field(render(row[c]));
        out += "\r\n";
      }
      break;
    }
    case TableFormat::Tsv: {
      for (std::size_t c = 0; c < table.key_columns; ++c) out += table.columns[c] + "\t";
      out += "metric\tvalue\n";
      for (const auto& row : table.rows)
        for (std::size_t c = table.key_columns; c < row.size(); ++c) {
          for (std::size_t k = 0; k < table.key_columns; ++k) out += tsv_field(render(row[k])) + "\t";
          out += table.columns[c] + "\t" + tsv_field(render(row[c])) + "\n";
        }
      break;
    }
    case TableFormat::Json: {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const auto& row : table.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < row.size(); ++c) obj[table.columns[c]] = nlohmann::ordered_json::parse(row[c].dump());
        arr.push_back(std::move(obj));
      }
      out = arr.dump(2) + "\n";
      break;
    }
  }
  return out;
}

}  // namespace domconf::report
