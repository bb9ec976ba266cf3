#pragma once

// Online operator-ordering heuristics. Each metric is used in two
// directions: 1 sorts decreasingly, 2 increasingly. Only the operator list
// is permuted; ties keep the original relative order.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "domconf/pddl.hpp"

namespace domconf::heuristics {

enum class Metric { Eff, Pre, Rat, Neg, Par };
enum class Direction { Decreasing = 1, Increasing = 2 };

struct HeuristicId {
  Metric metric = Metric::Eff;
  Direction direction = Direction::Decreasing;

  /// `eff1` ... `par2`
  std::string to_string() const;
  static HeuristicId parse(std::string_view text);

  friend bool operator==(const HeuristicId&, const HeuristicId&) = default;
};

/// All ten ids: eff1, eff2, pre1, ..., par2.
const std::vector<HeuristicId>& all_heuristics();

/// Exact rational score. A zero denominator stands for +infinity.
struct OperatorScore {
  std::string op;
  std::int64_t numerator = 0;
  std::int64_t denominator = 1;

  bool infinite() const { return denominator == 0; }
};

/// Total order on scores; all infinities compare equal.
bool less(const OperatorScore& a, const OperatorScore& b);

OperatorScore score_operator(const pddl::OperatorSchema& op, Metric metric);

pddl::DomainModel order_operators(const pddl::DomainModel& d, HeuristicId h);

std::vector<std::pair<HeuristicId, pddl::DomainModel>> all_heuristic_models(const pddl::DomainModel& d);

}  // namespace domconf::heuristics
