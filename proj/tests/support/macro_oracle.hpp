#pragma once

// Checks that every ground instance of a composed macro behaves exactly
// like running its primitive steps one after another, over all reachable
// states of the original domain. Primitive steps are simulated on lifted
// schemas with string atoms; only the macro itself goes through the
// library's grounding.

#include <map>
#include <string>

#include "domconf/grounding.hpp"
#include "domconf/macros.hpp"
#include "test_support.hpp"

namespace testsupport {

struct MacroCheck {
  std::size_t states = 0;
  std::size_t instances = 0;
  std::size_t applicable = 0;      ///< (state, instance) pairs where the macro fires
  std::size_t mismatches = 0;      ///< successor differs from the sequence
  std::size_t missed = 0;          ///< sequence applies but the macro does not
  std::string first_problem;
};

namespace detail {

inline std::string var_key(const std::string& v) { return v.rfind('?', 0) == 0 ? v : "?" + v; }

// Applies one primitive step; false when a precondition fails.
inline bool apply_step(const pddl::OperatorSchema& op, const std::map<std::string, std::string>& args,
                       NamedState& s) {
  auto sub = [&](const std::string& term) {
    auto it = args.find(term);
    return it == args.end() ? term : it->second;
  };
  auto atom = [&](const pddl::Literal& l) {
    std::string a = l.predicate;
    for (const auto& t : l.args) a += " " + sub(t);
    return a;
  };
  for (const auto& l : op.pre) {
    if (l.predicate == "=") {
      if ((sub(l.args[0]) == sub(l.args[1])) == l.negative()) return false;
      continue;
    }
    if (!s.count(atom(l))) return false;
  }
  NamedState t = s;
  for (const auto& l : op.eff)
    if (l.negative()) t.erase(atom(l));
  for (const auto& l : op.eff)
    if (!l.negative()) t.insert(atom(l));
  s = std::move(t);
  return true;
}

}  // namespace detail

inline MacroCheck check_macro_equivalence(const pddl::DomainModel& d, const pddl::ProblemModel& p,
                                          const macros::MacroRecipe& recipe) {
  MacroCheck out;
  const auto extended = macros::place(d, recipe, macros::Placement::parse("end"));
  const std::string name = recipe.resolved_name();
  const auto* macro = extended.find_operator(name);
  if (!macro) {
    out.first_problem = "macro missing from extended domain";
    ++out.mismatches;
    return out;
  }
  const auto task = pddl::ground_task(extended, p);
  const auto states = naive_reachable(d, p);
  out.states = states.size();

  auto names = [&](const pddl::State& ids) {
    NamedState s;
    for (auto id : ids) s.insert(task.atoms[id]);
    return s;
  };

  for (const auto& ga : task.actions) {
    if (ga.op != name) continue;
    ++out.instances;
    std::map<std::string, std::string> var_value;
    for (std::size_t i = 0; i < macro->params.size(); ++i) var_value[macro->params[i].name] = ga.args[i];
    std::vector<std::pair<const pddl::OperatorSchema*, std::map<std::string, std::string>>> steps;
    for (const auto& step : recipe.steps) {
      std::map<std::string, std::string> args;
      for (const auto& [param, var] : step.bind) args[detail::var_key(param)] = var_value.at(detail::var_key(var));
      steps.emplace_back(d.find_operator(step.op), std::move(args));
    }
    const auto pre = names(ga.pre);
    const auto del = names(ga.del);
    const auto add = names(ga.add);
    for (const auto& s : states) {
      const bool fires = std::all_of(pre.begin(), pre.end(), [&](const auto& a) { return s.count(a) > 0; });
      NamedState seq = s;
      bool seq_ok = true;
      for (const auto& [op, args] : steps)
        if (!detail::apply_step(*op, args, seq)) {
          seq_ok = false;
          break;
        }
      if (!fires) {
        if (seq_ok) {
          ++out.missed;
          if (out.first_problem.empty()) out.first_problem = "sequence applies but macro does not: " + ga.name;
        }
        continue;
      }
      ++out.applicable;
      NamedState succ = s;
      for (const auto& a : del) succ.erase(a);
      for (const auto& a : add) succ.insert(a);
      if (!seq_ok || succ != seq) {
        ++out.mismatches;
        if (out.first_problem.empty()) out.first_problem = "successor differs for " + ga.name;
      }
    }
  }
  return out;
}

}  // namespace testsupport
