#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "domconf/pddl.hpp"
#include "domconf/types.hpp"

namespace domconf::pddl {

using AtomId = std::uint32_t;

/// Sorted, duplicate-free set of atom ids.
using State = std::vector<AtomId>;

struct GroundAction {
  std::string name;  ///< `op a b`
  std::string op;
  std::vector<std::string> args;
  State pre;
  State del;
  State add;
};

/// Fully ground planning task. `atoms[i]` is the key (`pred a b`) of atom i.
struct GroundTask {
  std::vector<std::string> atoms;
  std::unordered_map<std::string, AtomId> atom_index;
  std::vector<GroundAction> actions;
  std::unordered_map<std::string, std::size_t> action_index;
  State init;
  State goal;

  const GroundAction* find_action(std::string_view name) const;
  std::optional<AtomId> find_atom(std::string_view key) const;
  std::vector<std::string> names_of(const State& state) const;
};

/// Grounds every type-consistent substitution of every operator; equality
/// preconditions are decided here and never reach the ground actions.
GroundTask ground_task(const DomainModel& domain, const ProblemModel& problem);

/// Objects of the problem followed by the domain constants.
std::vector<TypedName> all_objects(const DomainModel& domain, const ProblemModel& problem);

/// Thrown by apply_action when a precondition does not hold.
class InapplicableActionError : public InputError {
 public:
  InapplicableActionError(std::string action, std::string missing_atom);
  const std::string& action() const noexcept { return action_; }
  const std::string& missing_atom() const noexcept { return missing_; }

 private:
  std::string action_;
  std::string missing_;
};

bool applicable(const State& state, const GroundAction& action);

/// (s \ del) ∪ add. Throws InapplicableActionError naming the first
/// unsatisfied precondition.
State apply_action(const GroundTask& task, const State& state, const GroundAction& action);

/// Unchecked transition, for search loops that already tested applicability.
State successor(const State& state, const GroundAction& action);

bool satisfies(const State& state, const State& goal);

struct PlanStep {
  std::string op;
  std::vector<std::string> args;

  std::string name() const;
  friend bool operator==(const PlanStep&, const PlanStep&) = default;
};

using Plan = std::vector<PlanStep>;

/// Reads one action per line, `(op a b)`. Tolerates `N:` step prefixes,
/// trailing `[cost]` annotations and `;` comments.
Plan parse_plan(std::string_view text);
std::string print_plan(const Plan& plan);

struct ValidationReport {
  bool valid = false;
  std::optional<std::size_t> fail_step;  ///< 1-based
  std::string fail_reason;
  std::size_t plan_length = 0;
};

nlohmann::json to_json(const ValidationReport& report);

class UnknownActionError : public InputError {
 public:
  using InputError::InputError;
};

/// Simulates `plan` from the initial state. Throws UnknownActionError when a
/// step names no action of `task`.
ValidationReport validate_plan(const GroundTask& task, const Plan& plan);

/// Builds a task restricted to the atoms and actions a plan touches. Steps
/// that are not type-consistent instances of a domain operator are left
/// out, so validate_plan reports them as unknown.
GroundTask ground_for_plan(const DomainModel& domain, const ProblemModel& problem, const Plan& plan);

/// Convenience: ground_for_plan + validate_plan, unknown actions reported as
/// an invalid step rather than thrown.
ValidationReport validate_plan(const DomainModel& domain, const ProblemModel& problem, const Plan& plan);

/// Breadth-first enumeration of every state reachable from init.
std::vector<State> reachable_states(const GroundTask& task, std::size_t limit = 1'000'000);

/// Shortest plan by breadth-first search, if the goal is reachable.
std::optional<Plan> breadth_first_plan(const GroundTask& task, std::size_t limit = 1'000'000);

}  // namespace domconf::pddl
