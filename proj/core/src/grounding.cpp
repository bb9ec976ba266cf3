#include "domconf/grounding.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

namespace domconf::pddl {
namespace {

class Grounder {
 public:
  Grounder(const DomainModel& d, const ProblemModel& p) : domain_(d), hierarchy_(d), objects_(all_objects(d, p)) {}

  AtomId intern(const std::string& key) {
    auto [it, inserted] = task_.atom_index.try_emplace(key, static_cast<AtomId>(task_.atoms.size()));
    if (inserted) task_.atoms.push_back(key);
    return it->second;
  }

  std::vector<std::string> candidates(const TypedName& param) const {
    std::vector<std::string> out;
    for (const auto& o : objects_)
      if (!domain_.typed() || hierarchy_.is_subtype(o.type, param.type)) out.push_back(o.name);
    return out;
  }

  bool object_fits(const std::string& name, const std::string& type) const {
    for (const auto& o : objects_)
      if (o.name == name) return !domain_.typed() || hierarchy_.is_subtype(o.type, type);
    return false;
  }

  // Calls `visit` with every assignment of candidate objects to `params`.
  void enumerate(const std::vector<TypedName>& params,
                 const std::function<void(const std::vector<std::string>&)>& visit) const {
    std::vector<std::vector<std::string>> options;
    for (const auto& p : params) {
      options.push_back(candidates(p));
      if (options.back().empty()) return;
    }
    std::vector<std::string> current(params.size());
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == params.size()) {
        visit(current);
        return;
      }
      for (const auto& o : options[i]) {
        current[i] = o;
        rec(i + 1);
      }
    };
    rec(0);
  }

  void add_atoms_of_predicates() {
    for (const auto& pred : domain_.predicates) {
      enumerate(pred.params, [&](const std::vector<std::string>& args) { intern(Atom{pred.name, args}.key()); });
    }
  }

  void add_init_goal(const ProblemModel& p) {
    for (const auto& a : p.init) task_.init.push_back(intern(a.key()));
    for (const auto& a : p.goal) task_.goal.push_back(intern(a.key()));
    normalize(task_.init);
    normalize(task_.goal);
  }

  // Instantiates `op` with `args`; nullopt when an equality test fails.
  std::optional<GroundAction> instantiate(const OperatorSchema& op, const std::vector<std::string>& args) {
    auto substitute = [&](const std::string& term) -> const std::string& {
      for (std::size_t i = 0; i < op.params.size(); ++i)
        if (op.params[i].name == term) return args[i];
      return term;
    };
    auto key_of = [&](const Literal& l) {
      std::string key = l.predicate;
      for (const auto& t : l.args) key += " " + substitute(t);
      return key;
    };
    for (const auto& l : op.pre) {
      if (!l.is_equality()) continue;
      const bool equal = substitute(l.args[0]) == substitute(l.args[1]);
      if (equal == l.negative()) return std::nullopt;
    }
    GroundAction a;
    a.op = op.name;
    a.args = args;
    a.name = PlanStep{op.name, args}.name();
    for (const auto& l : op.pre)
      if (!l.is_equality()) a.pre.push_back(intern(key_of(l)));
    for (const auto& l : op.eff) (l.negative() ? a.del : a.add).push_back(intern(key_of(l)));
    normalize(a.pre);
    normalize(a.del);
    normalize(a.add);
    return a;
  }

  void add_action(GroundAction a) {
    task_.action_index.emplace(a.name, task_.actions.size());
    task_.actions.push_back(std::move(a));
  }

  const DomainModel& domain() const { return domain_; }
  GroundTask take() { return std::move(task_); }

  static void normalize(State& s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }

 private:
  const DomainModel& domain_;
  TypeHierarchy hierarchy_;
  std::vector<TypedName> objects_;
  GroundTask task_;
};

}  // namespace

std::vector<TypedName> all_objects(const DomainModel& d, const ProblemModel& p) {
  std::vector<TypedName> out = p.objects;
  for (const auto& c : d.constants) {
    const bool shadowed = std::any_of(out.begin(), out.end(), [&](const TypedName& o) { return o.name == c.name; });
    if (!shadowed) out.push_back(c);
  }
  return out;
}

const GroundAction* GroundTask::find_action(std::string_view name) const {
  auto it = action_index.find(std::string(name));
  return it == action_index.end() ? nullptr : &actions[it->second];
}

std::optional<AtomId> GroundTask::find_atom(std::string_view key) const {
  auto it = atom_index.find(std::string(key));
  if (it == atom_index.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> GroundTask::names_of(const State& state) const {
  std::vector<std::string> out;
  out.reserve(state.size());
  for (AtomId id : state) out.push_back(atoms.at(id));
  std::sort(out.begin(), out.end());
  return out;
}

GroundTask ground_task(const DomainModel& domain, const ProblemModel& problem) {
  validate_problem(domain, problem);
  Grounder g(domain, problem);
  g.add_atoms_of_predicates();
  g.add_init_goal(problem);
  for (const auto& op : domain.operators) {
    g.enumerate(op.params, [&](const std::vector<std::string>& args) {
      if (auto a = g.instantiate(op, args)) g.add_action(std::move(*a));
    });
  }
  return g.take();
}

GroundTask ground_for_plan(const DomainModel& domain, const ProblemModel& problem, const Plan& plan) {
  validate_problem(domain, problem);
  Grounder g(domain, problem);
  g.add_init_goal(problem);
  std::set<std::string> done;
  for (const auto& step : plan) {
    const OperatorSchema* op = domain.find_operator(step.op);
    if (op == nullptr || op->params.size() != step.args.size()) continue;
    if (!done.insert(step.name()).second) continue;
    bool fits = true;
    for (std::size_t i = 0; i < step.args.size() && fits; ++i) fits = g.object_fits(step.args[i], op->params[i].type);
    if (!fits) continue;
    if (auto a = g.instantiate(*op, step.args)) g.add_action(std::move(*a));
  }
  return g.take();
}

InapplicableActionError::InapplicableActionError(std::string action, std::string missing_atom)
    : InputError("action (" + action + ") is not applicable: precondition (" + missing_atom + ") does not hold"),
      action_(std::move(action)),
      missing_(std::move(missing_atom)) {}

bool applicable(const State& state, const GroundAction& action) {
  return std::includes(state.begin(), state.end(), action.pre.begin(), action.pre.end());
}

State successor(const State& state, const GroundAction& action) {
  State removed;
  removed.reserve(state.size());
  std::set_difference(state.begin(), state.end(), action.del.begin(), action.del.end(), std::back_inserter(removed));
  State out;
  out.reserve(removed.size() + action.add.size());
  std::set_union(removed.begin(), removed.end(), action.add.begin(), action.add.end(), std::back_inserter(out));
  return out;
}

State apply_action(const GroundTask& task, const State& state, const GroundAction& action) {
  for (AtomId p : action.pre)
    if (!std::binary_search(state.begin(), state.end(), p))
      throw InapplicableActionError(action.name, task.atoms.at(p));
  return successor(state, action);
}

bool satisfies(const State& state, const State& goal) {
  return std::includes(state.begin(), state.end(), goal.begin(), goal.end());
}

std::vector<State> reachable_states(const GroundTask& task, std::size_t limit) {
  std::set<State> seen{task.init};
  std::deque<State> open{task.init};
  std::vector<State> out{task.init};
  while (!open.empty()) {
    State s = std::move(open.front());
    open.pop_front();
    for (const auto& a : task.actions) {
      if (!applicable(s, a)) continue;
      State next = successor(s, a);
      if (seen.insert(next).second) {
        if (seen.size() > limit) throw InputError("state space exceeds " + std::to_string(limit) + " states");
        out.push_back(next);
        open.push_back(std::move(next));
      }
    }
  }
  return out;
}

std::optional<Plan> breadth_first_plan(const GroundTask& task, std::size_t limit) {
  struct Entry {
    std::size_t parent;
    std::size_t action;
  };
  std::map<State, std::size_t> index{{task.init, 0}};
  std::vector<const State*> states;
  std::vector<Entry> entries{{0, 0}};
  std::deque<std::size_t> open{0};
  states.push_back(&index.begin()->first);

  auto unwind = [&](std::size_t i) {
    Plan plan;
    while (i != 0) {
      const auto& a = task.actions[entries[i].action];
      plan.push_back({a.op, a.args});
      i = entries[i].parent;
    }
    std::reverse(plan.begin(), plan.end());
    return plan;
  };

  if (satisfies(task.init, task.goal)) return Plan{};
  while (!open.empty()) {
    const std::size_t current = open.front();
    open.pop_front();
    const State s = *states[current];
    for (std::size_t ai = 0; ai < task.actions.size(); ++ai) {
      const auto& a = task.actions[ai];
      if (!applicable(s, a)) continue;
      auto [it, inserted] = index.try_emplace(successor(s, a), states.size());
      if (!inserted) continue;
      if (states.size() >= limit) throw InputError("state space exceeds " + std::to_string(limit) + " states");
      states.push_back(&it->first);
      entries.push_back({current, ai});
      if (satisfies(it->first, task.goal)) return unwind(it->second);
      open.push_back(it->second);
    }
  }
  return std::nullopt;
}

}  // namespace domconf::pddl
