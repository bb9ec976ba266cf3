#include "domconf/macros.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include <nlohmann/json.hpp>

namespace domconf::macros {

using pddl::DomainModel;
using pddl::Literal;
using pddl::OperatorSchema;

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string as_param(std::string s) {
  s = lower(std::move(s));
  return (!s.empty() && s.front() == '?') ? s : "?" + s;
}

bool contains_atom(const std::vector<Literal>& lits, const Literal& l, pddl::Polarity polarity) {
  return std::any_of(lits.begin(), lits.end(),
                     [&](const Literal& x) { return x.polarity == polarity && x.same_atom(l); });
}

}  // namespace

std::string MacroRecipe::resolved_name() const {
  if (!macro_name.empty()) return lower(macro_name);
  std::string out = "m";
  for (const auto& s : steps) out += "-" + lower(s.op);
  return out;
}

MacroConflictError::MacroConflictError(std::size_t step, std::string literal)
    : InputError("step " + std::to_string(step) + " requires " + literal + ", which an earlier step deletes"),
      step_(step),
      literal_(std::move(literal)) {}

OperatorSchema unify(const OperatorSchema& op, const MacroStep& step) {
  std::vector<std::pair<std::string, std::string>> renames;
  for (const auto& [param, var] : step.bind) {
    const std::string p = as_param(param);
    if (!op.param_type(p)) throw MacroError("operator " + op.name + " has no parameter " + p);
    renames.emplace_back(p, as_param(var));
  }
  std::set<std::string> targets;
  OperatorSchema out = op;
  for (auto& p : out.params) {
    auto it = std::find_if(renames.begin(), renames.end(), [&](const auto& r) { return r.first == p.name; });
    if (it == renames.end()) throw MacroError("parameter " + p.name + " of " + op.name + " is not bound");
    if (!targets.insert(it->second).second)
      throw MacroError("operator " + op.name + " binds two parameters to " + it->second);
    p.name = it->second;
  }
  auto rename = [&](Literal& l) {
    for (auto& t : l.args) {
      auto it = std::find_if(renames.begin(), renames.end(), [&](const auto& r) { return r.first == t; });
      if (it != renames.end()) t = it->second;
    }
  };
  for (auto& l : out.pre) rename(l);
  for (auto& l : out.eff) rename(l);
  return out;
}

OperatorSchema compose_pair(const OperatorSchema& first, const OperatorSchema& second, std::string name,
                            const pddl::TypeHierarchy* types) {
  using pddl::Polarity;
  const auto first_del = first.delete_effects();
  const auto first_add = first.add_effects();
  const auto second_del = second.delete_effects();
  const auto second_add = second.add_effects();

  for (const auto& p : second.pre) {
    if (p.is_equality()) continue;
    if (contains_atom(first_del, p, Polarity::Negative)) throw MacroConflictError(2, p.to_pddl());
  }

  OperatorSchema out;
  out.name = std::move(name);

  out.params = first.params;
  for (const auto& p : second.params) {
    auto it = std::find_if(out.params.begin(), out.params.end(), [&](const pddl::TypedName& x) { return x.name == p.name; });
    if (it == out.params.end()) {
      out.params.push_back(p);
      continue;
    }
    if (it->type == p.type) continue;
    const std::string merged = types != nullptr ? types->meet(it->type, p.type) : std::string{};
    if (merged.empty())
      throw MacroError("variable " + p.name + " is used with incompatible types " + it->type + " and " + p.type);
    it->type = merged;
  }

  out.pre = first.pre;
  for (const auto& p : second.pre) {
    if (!p.is_equality() && contains_atom(first_add, p, Polarity::Positive)) continue;
    if (std::find(out.pre.begin(), out.pre.end(), p) != out.pre.end()) continue;
    out.pre.push_back(p);
  }

  for (const auto& e : first.eff) {
    const bool cancelled = e.negative() ? contains_atom(second_add, e, Polarity::Positive)
                                        : contains_atom(second_del, e, Polarity::Negative);
    if (!cancelled) out.eff.push_back(e);
  }
  for (const auto& e : second.eff)
    if (std::find(out.eff.begin(), out.eff.end(), e) == out.eff.end()) out.eff.push_back(e);
  return out;
}

OperatorSchema compose_chain(const MacroRecipe& recipe, const DomainModel& d) {
  if (recipe.steps.size() < 2) throw MacroError("a macro needs at least two steps");
  const pddl::TypeHierarchy types(d);
  std::vector<OperatorSchema> unified;
  for (const auto& step : recipe.steps) {
    const OperatorSchema* op = d.find_operator(lower(step.op));
    if (op == nullptr) throw MacroError("recipe step names unknown operator '" + step.op + "'");
    unified.push_back(unify(*op, step));
  }
  const std::string name = recipe.resolved_name();
  OperatorSchema acc = unified.front();
  acc.name = name;
  for (std::size_t k = 1; k < unified.size(); ++k) {
    try {
      acc = compose_pair(acc, unified[k], name, &types);
    } catch (const MacroConflictError& e) {
      throw MacroConflictError(k + 1, e.literal());
    }
  }
  return acc;
}

DomainModel insert_at(const DomainModel& d, const OperatorSchema& macro, std::size_t position) {
  const std::size_t n = d.operators.size();
  if (position < 1 || position > n + 1)
    throw MacroError("position " + std::to_string(position) + " out of range 1.." + std::to_string(n + 1));
  if (d.find_operator(macro.name) != nullptr) throw MacroError("operator '" + macro.name + "' already exists");
  DomainModel out = d;
  out.operators.insert(out.operators.begin() + static_cast<std::ptrdiff_t>(position - 1), macro);
  return out;
}

DomainModel remove_operator(const DomainModel& d, std::string_view name) {
  DomainModel out = d;
  auto it = std::find_if(out.operators.begin(), out.operators.end(), [&](const OperatorSchema& o) { return o.name == name; });
  if (it == out.operators.end()) throw MacroError("no operator '" + std::string(name) + "'");
  out.operators.erase(it);
  return out;
}

std::vector<DomainModel> enumerate_positions(const DomainModel& d, const OperatorSchema& macro) {
  std::vector<DomainModel> out;
  for (std::size_t p = 1; p <= d.operators.size() + 1; ++p) out.push_back(insert_at(d, macro, p));
  return out;
}

Placement Placement::parse(std::string_view text) {
  const std::string t = lower(std::string(text));
  if (t == "end") return {Kind::End, 0};
  if (t == "top") return {Kind::Top, 0};
  if (t == "before-first") return {Kind::BeforeFirst, 0};
  if (t == "after-first") return {Kind::AfterFirst, 0};
  auto number = [&](std::string_view digits) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty() || v == 0)
      throw MacroError("invalid placement '" + std::string(text) + "' (positions and slots count from 1)");
    return v;
  };
  if (t.rfind("between:", 0) == 0) return {Kind::Between, number(std::string_view(t).substr(8))};
  return {Kind::Index, number(t)};
}

std::string Placement::to_string() const {
  switch (kind) {
    case Kind::Index:
      return std::to_string(value);
    case Kind::End:
      return "end";
    case Kind::Top:
      return "top";
    case Kind::BeforeFirst:
      return "before-first";
    case Kind::AfterFirst:
      return "after-first";
    case Kind::Between:
      return "between:" + std::to_string(value);
  }
  return "?";
}

namespace {

std::vector<std::size_t> encapsulated_indices(const DomainModel& d, const MacroRecipe& recipe) {
  std::vector<std::size_t> out;
  for (const auto& s : recipe.steps) {
    auto idx = d.operator_index(lower(s.op));
    if (!idx) throw MacroError("encapsulated operator '" + s.op + "' is not in the model");
    out.push_back(*idx);
  }
  return out;
}

}  // namespace

std::size_t between_slots(const DomainModel& d, const MacroRecipe& recipe) {
  const auto idx = encapsulated_indices(d, recipe);
  const auto [lo, hi] = std::minmax_element(idx.begin(), idx.end());
  return *hi - *lo;
}

std::size_t resolve_position(const DomainModel& d, const MacroRecipe& recipe, const Placement& placement) {
  const std::size_t n = d.operators.size();
  switch (placement.kind) {
    case Placement::Kind::Index:
      if (placement.value < 1 || placement.value > n + 1)
        throw MacroError("position " + std::to_string(placement.value) + " out of range 1.." + std::to_string(n + 1));
      return placement.value;
    case Placement::Kind::End:
      return n + 1;
    case Placement::Kind::Top:
      return 1;
    case Placement::Kind::BeforeFirst:
      return encapsulated_indices(d, recipe).front() + 1;
    case Placement::Kind::AfterFirst:
      return encapsulated_indices(d, recipe).front() + 2;
    case Placement::Kind::Between: {
      const auto idx = encapsulated_indices(d, recipe);
      const std::size_t lo = *std::min_element(idx.begin(), idx.end());
      const std::size_t slots = between_slots(d, recipe);
      if (placement.value < 1 || placement.value > slots)
        throw MacroError("between slot " + std::to_string(placement.value) + " out of range; " + std::to_string(slots) +
                         " slot(s) exist");
      return lo + 1 + placement.value;
    }
  }
  throw MacroError("unknown placement");
}

DomainModel place(const DomainModel& d, const MacroRecipe& recipe, const Placement& placement) {
  const OperatorSchema macro = compose_chain(recipe, d);
  return insert_at(d, macro, resolve_position(d, recipe, placement));
}

DomainModel place_all(const DomainModel& d, const std::vector<std::pair<MacroRecipe, Placement>>& items) {
  DomainModel out = d;
  for (const auto& [recipe, placement] : items) out = place(out, recipe, placement);
  return out;
}

MacroRecipe recipe_from_json(const nlohmann::json& j) {
  try {
    MacroRecipe r;
    r.macro_name = j.value("macroName", std::string{});
    for (const auto& s : j.at("steps")) {
      MacroStep step;
      step.op = lower(s.at("op").get<std::string>());
      for (const auto& [param, var] : s.at("bind").items()) step.bind.emplace_back(param, var.get<std::string>());
      r.steps.push_back(std::move(step));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw MacroError(std::string("malformed macro recipe: ") + e.what());
  }
}

nlohmann::json to_json(const MacroRecipe& recipe) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : recipe.steps) {
    nlohmann::json bind = nlohmann::json::object();
    for (const auto& [p, v] : s.bind) bind[p] = v;
    steps.push_back({{"op", s.op}, {"bind", bind}});
  }
  return {{"macroName", recipe.resolved_name()}, {"steps", steps}};
}

}  // namespace domconf::macros
