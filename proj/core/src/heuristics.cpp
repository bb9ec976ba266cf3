#include "domconf/heuristics.hpp"

#include <algorithm>

namespace domconf::heuristics {

namespace {
constexpr std::string_view kMetricNames[] = {"eff", "pre", "rat", "neg", "par"};
}

std::string HeuristicId::to_string() const {
  return std::string(kMetricNames[static_cast<int>(metric)]) + (direction == Direction::Decreasing ? "1" : "2");
}

HeuristicId HeuristicId::parse(std::string_view text) {
  for (const auto& h : all_heuristics())
    if (h.to_string() == text) return h;
  throw InputError("unknown heuristic '" + std::string(text) + "' (expected eff1|eff2|pre1|pre2|rat1|rat2|neg1|neg2|par1|par2)");
}

const std::vector<HeuristicId>& all_heuristics() {
  static const std::vector<HeuristicId> ids = [] {
    std::vector<HeuristicId> out;
    for (Metric m : {Metric::Eff, Metric::Pre, Metric::Rat, Metric::Neg, Metric::Par})
      for (Direction d : {Direction::Decreasing, Direction::Increasing}) out.push_back({m, d});
    return out;
  }();
  return ids;
}

bool less(const OperatorScore& a, const OperatorScore& b) {
  if (a.infinite() || b.infinite()) return !a.infinite() && b.infinite();
  // Denominators are positive here, so cross-multiplication keeps the order.
  return a.numerator * b.denominator < b.numerator * a.denominator;
}

OperatorScore score_operator(const pddl::OperatorSchema& op, Metric metric) {
  OperatorScore s{op.name, 0, 1};
  const auto effects = static_cast<std::int64_t>(op.eff.size());
  const auto pres = static_cast<std::int64_t>(op.pre.size());
  switch (metric) {
    case Metric::Eff:
      s.numerator = effects;
      break;
    case Metric::Pre:
      s.numerator = pres;
      break;
    case Metric::Rat:
      s.numerator = effects;
      s.denominator = pres;
      break;
    case Metric::Neg:
      s.numerator = static_cast<std::int64_t>(op.delete_effects().size());
      break;
    case Metric::Par:
      s.numerator = static_cast<std::int64_t>(op.params.size());
      break;
  }
  return s;
}

pddl::DomainModel order_operators(const pddl::DomainModel& d, HeuristicId h) {
  std::vector<std::pair<OperatorScore, std::size_t>> keyed;
  keyed.reserve(d.operators.size());
  for (std::size_t i = 0; i < d.operators.size(); ++i) keyed.emplace_back(score_operator(d.operators[i], h.metric), i);
  std::stable_sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
    return h.direction == Direction::Increasing ? less(a.first, b.first) : less(b.first, a.first);
  });
  pddl::DomainModel out = d;
  for (std::size_t i = 0; i < keyed.size(); ++i) out.operators[i] = d.operators[keyed[i].second];
  return out;
}

std::vector<std::pair<HeuristicId, pddl::DomainModel>> all_heuristic_models(const pddl::DomainModel& d) {
  std::vector<std::pair<HeuristicId, pddl::DomainModel>> out;
  for (const auto& h : all_heuristics()) out.emplace_back(h, order_operators(d, h));
  return out;
}

}  // namespace domconf::heuristics
