#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>

#include "domconf/bench.hpp"

namespace domconf::bench {

RunRecord median_record(std::vector<RunRecord> records) {
  if (records.empty()) throw InputError("median of no records");
  if (records.size() % 2 == 0) throw InputError("median needs an odd number of repetitions");
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::stable_sort(records.begin(), records.end(), [&](const RunRecord& a, const RunRecord& b) {
    const double ta = a.solved ? a.time : inf;
    const double tb = b.solved ? b.time : inf;
    if (ta != tb) return ta < tb;
    return a.run < b.run;
  });
  return records[records.size() / 2];
}

double par10_value(const RunRecord& r, double cutoff) { return r.solved ? r.time : 10.0 * cutoff; }

double par10(const std::vector<RunRecord>& records, double cutoff) {
  if (records.empty()) throw InputError("PAR10 of an empty record set");
  double sum = 0.0;
  for (const auto& r : records) sum += par10_value(r, cutoff);
  return sum / static_cast<double>(records.size());
}

double ipc_problem_score(double time, double best_time) {
  const double t = std::max(time, kIpcTimeFloor);
  const double best = std::max(best_time, kIpcTimeFloor);
  return 1.0 / (1.0 + std::log10(t / best));
}

std::map<std::string, double> ipc_scores(const std::vector<Outcome>& outcomes) {
  std::map<std::string, double> scores;
  std::map<std::string, double> best;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& o : outcomes) {
    if (!seen.emplace(o.system, o.problem).second)
      throw InputError("two outcomes for " + o.system + " on " + o.problem);
    scores.emplace(o.system, 0.0);
    if (!o.solved) continue;
    const double t = std::max(o.time, kIpcTimeFloor);
    auto [it, fresh] = best.emplace(o.problem, t);
    if (!fresh) it->second = std::min(it->second, t);
  }
  for (const auto& o : outcomes)
    if (o.solved) scores[o.system] += ipc_problem_score(o.time, best.at(o.problem));
  return scores;
}

Coverage coverage(const std::vector<RunRecord>& records) {
  Coverage c;
  c.total = records.size();
  c.solved = static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const RunRecord& r) { return r.solved; }));
  return c;
}

std::vector<RunRecord> median_records(std::vector<RunRecord> records) {
  std::sort(records.begin(), records.end(), record_less);
  std::vector<RunRecord> out;
  auto same_cell = [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.planner, a.domain, a.variant, a.problem) == std::tie(b.planner, b.domain, b.variant, b.problem);
  };
  for (std::size_t i = 0; i < records.size();) {
    std::size_t j = i + 1;
    while (j < records.size() && same_cell(records[i], records[j])) ++j;
    out.push_back(median_record({records.begin() + static_cast<std::ptrdiff_t>(i),
                                 records.begin() + static_cast<std::ptrdiff_t>(j)}));
    i = j;
  }
  return out;
}

}  // namespace domconf::bench
