#pragma once

// Macro-operator composition and placement of macros inside a domain's
// operator list.

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "domconf/pddl.hpp"
#include "domconf/types.hpp"

namespace domconf::macros {

/// Maps one operator's parameters (`?x`) to shared macro variables (`a`).
/// Steps that bind the same variable refer to the same object.
struct MacroStep {
  std::string op;
  std::vector<std::pair<std::string, std::string>> bind;
};

struct MacroRecipe {
  std::string macro_name;  ///< empty: `m-<step1>-<step2>-...`
  std::vector<MacroStep> steps;

  std::string resolved_name() const;
};

/// Raised when an earlier step deletes a precondition of a later one.
class MacroConflictError : public InputError {
 public:
  MacroConflictError(std::size_t step, std::string literal);
  /// 1-based index of the step whose precondition is deleted.
  std::size_t step() const noexcept { return step_; }
  const std::string& literal() const noexcept { return literal_; }

 private:
  std::size_t step_;
  std::string literal_;
};

/// Recipe or placement that does not fit the model.
class MacroError : public InputError {
 public:
  using InputError::InputError;
};

/// Renames `op`'s parameters through `bind`; bound variables become `?var`.
/// Every parameter must be bound.
pddl::OperatorSchema unify(const pddl::OperatorSchema& op, const MacroStep& step);

/// Composes two already-unified schemas:
///   pre  = pre(i) ∪ (pre(j) \ eff+(i))
///   eff- = (eff-(i) \ eff+(j)) ∪ eff-(j)
///   eff+ = (eff+(i) \ eff-(j)) ∪ eff+(j)
/// Element order: survivors of i in i's order, then survivors of j.
/// Parameters: union in first-use order. When both declare a shared
/// variable with different types, the more specific one wins (`types`
/// decides; without it the types must agree).
pddl::OperatorSchema compose_pair(const pddl::OperatorSchema& first, const pddl::OperatorSchema& second,
                                  std::string name, const pddl::TypeHierarchy* types = nullptr);

/// Left fold of compose_pair over the recipe's steps.
pddl::OperatorSchema compose_chain(const MacroRecipe& recipe, const pddl::DomainModel& d);

/// Inserts `macro` so that it becomes operator number `position` (1-based,
/// 1..n+1). Every other element keeps its order.
pddl::DomainModel insert_at(const pddl::DomainModel& d, const pddl::OperatorSchema& macro, std::size_t position);

/// Removes the named operator.
pddl::DomainModel remove_operator(const pddl::DomainModel& d, std::string_view name);

/// n+1 models; model i (0-based) has the macro at position i+1.
std::vector<pddl::DomainModel> enumerate_positions(const pddl::DomainModel& d, const pddl::OperatorSchema& macro);

struct Placement {
  enum class Kind { Index, End, Top, BeforeFirst, AfterFirst, Between };
  Kind kind = Kind::End;
  std::size_t value = 0;  ///< position for Index, 1-based slot for Between

  /// `3`, `end`, `top`, `before-first`, `after-first`, `between:<k>`
  static Placement parse(std::string_view text);
  std::string to_string() const;
};

/// Concrete 1-based insert position. "First" refers to the recipe's first
/// step; Between slots count the gaps strictly between the earliest and
/// latest encapsulated operators of `d`.
std::size_t resolve_position(const pddl::DomainModel& d, const MacroRecipe& recipe, const Placement& placement);

/// Number of Between slots available for `recipe` in `d`.
std::size_t between_slots(const pddl::DomainModel& d, const MacroRecipe& recipe);

pddl::DomainModel place(const pddl::DomainModel& d, const MacroRecipe& recipe, const Placement& placement);

/// Places several macros, one after another in the given order; positions
/// are resolved against the model as extended so far.
pddl::DomainModel place_all(const pddl::DomainModel& d, const std::vector<std::pair<MacroRecipe, Placement>>& items);

/// `{macroName, steps:[{op, bind:{param:var}}]}`
MacroRecipe recipe_from_json(const nlohmann::json& j);
nlohmann::json to_json(const MacroRecipe& recipe);

}  // namespace domconf::macros
