#include "domconf/config_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "domconf/digest.hpp"
#include "domconf/rng.hpp"

namespace domconf::config {

using pddl::DomainModel;
using pddl::Literal;
using pddl::OperatorSchema;

namespace {

std::vector<std::string> names_of(const std::vector<Literal>& lits) {
  std::vector<std::string> out;
  out.reserve(lits.size());
  for (const auto& l : lits) out.push_back(l.canonical_name());
  return out;
}

BigInt factorial(std::size_t n) {
  BigInt out = 1;
  for (std::size_t i = 2; i <= n; ++i) out *= i;
  return out;
}

// Returns `items` reordered so that their keys follow `order`; throws unless
// `order` is a permutation of the keys.
template <typename T, typename KeyFn>
std::vector<T> reorder(const std::vector<T>& items, const std::vector<std::string>& order, KeyFn key,
                       const std::string& what) {
  if (order.size() != items.size())
    throw ConfigurationMismatch(what + ": expected " + std::to_string(items.size()) + " elements, got " +
                                std::to_string(order.size()));
  std::vector<T> out;
  out.reserve(items.size());
  std::vector<bool> used(items.size(), false);
  for (const auto& name : order) {
    std::size_t i = 0;
    while (i < items.size() && (used[i] || key(items[i]) != name)) ++i;
    if (i == items.size()) {
      const bool dup = std::any_of(items.begin(), items.end(), [&](const T& x) { return key(x) == name; });
      throw ConfigurationMismatch(what + ": " + (dup ? "repeated element '" : "unknown element '") + name + "'");
    }
    used[i] = true;
    out.push_back(items[i]);
  }
  return out;
}

void check_owner_keys(const std::map<std::string, std::vector<std::string>>& m, const DomainModel& d,
                      const char* what) {
  if (m.size() != d.operators.size())
    throw ConfigurationMismatch(std::string(what) + ": expected an order for each of the " +
                                std::to_string(d.operators.size()) + " operators");
  for (const auto& [name, order] : m)
    if (d.find_operator(name) == nullptr)
      throw ConfigurationMismatch(std::string(what) + ": unknown operator '" + name + "'");
}

GroupKind kind_from_string(const std::string& s) {
  if (s == "predicates") return GroupKind::Predicates;
  if (s == "operators") return GroupKind::Operators;
  if (s == "pre") return GroupKind::Preconditions;
  if (s == "eff") return GroupKind::Effects;
  throw ConfigurationMismatch("unknown group kind '" + s + "'");
}

}  // namespace

const char* to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::Predicates:
      return "predicates";
    case GroupKind::Operators:
      return "operators";
    case GroupKind::Preconditions:
      return "pre";
    case GroupKind::Effects:
      return "eff";
  }
  return "?";
}

std::vector<GroupDescriptor> precedence_layout(const DomainModel& d) {
  std::vector<GroupDescriptor> layout;
  GroupDescriptor preds{GroupKind::Predicates, {}, {}};
  for (const auto& p : d.predicates) preds.elements.push_back(p.name);
  GroupDescriptor ops{GroupKind::Operators, {}, {}};
  for (const auto& o : d.operators) ops.elements.push_back(o.name);
  layout.push_back(std::move(preds));
  layout.push_back(std::move(ops));
  for (const auto& o : d.operators) {
    layout.push_back({GroupKind::Preconditions, o.name, names_of(o.pre)});
    layout.push_back({GroupKind::Effects, o.name, names_of(o.eff)});
  }
  return layout;
}

std::size_t vector_dimension(const DomainModel& d) {
  std::size_t m = d.predicates.size() + d.operators.size();
  for (const auto& o : d.operators) m += o.pre.size() + o.eff.size();
  return m;
}

BigInt operator_space_size(const OperatorSchema& op) { return factorial(op.pre.size()) * factorial(op.eff.size()); }

BigInt space_size(const DomainModel& d) {
  BigInt out = factorial(d.predicates.size()) * factorial(d.operators.size());
  for (const auto& o : d.operators) out *= operator_space_size(o);
  return out;
}

ConfigurationSpec configuration_of(const DomainModel& d) {
  ConfigurationSpec c;
  for (const auto& p : d.predicates) c.pred_order.push_back(p.name);
  for (const auto& o : d.operators) {
    c.op_order.push_back(o.name);
    c.pre_order[o.name] = names_of(o.pre);
    c.eff_order[o.name] = names_of(o.eff);
  }
  return c;
}

ConfigurationSpec random_configuration(const DomainModel& d, std::uint64_t seed) {
  Rng rng(seed);
  ConfigurationSpec c = configuration_of(d);
  rng.shuffle(c.pred_order);
  rng.shuffle(c.op_order);
  // Operators are visited in model order so the draw sequence is fixed.
  for (const auto& o : d.operators) {
    rng.shuffle(c.pre_order[o.name]);
    rng.shuffle(c.eff_order[o.name]);
  }
  return c;
}

DomainModel apply_configuration(const DomainModel& d, const ConfigurationSpec& c) {
  check_owner_keys(c.pre_order, d, "preOrder");
  check_owner_keys(c.eff_order, d, "effOrder");
  DomainModel out = d;
  out.predicates = reorder(d.predicates, c.pred_order, [](const pddl::PredicateDecl& p) { return p.name; }, "predOrder");
  out.operators = reorder(d.operators, c.op_order, [](const OperatorSchema& o) { return o.name; }, "opOrder");
  auto literal_key = [](const Literal& l) { return l.canonical_name(); };
  for (auto& o : out.operators) {
    o.pre = reorder(o.pre, c.pre_order.at(o.name), literal_key, "preOrder[" + o.name + "]");
    o.eff = reorder(o.eff, c.eff_order.at(o.name), literal_key, "effOrder[" + o.name + "]");
  }
  return out;
}

PrecedenceVector uniform_vector(const DomainModel& d, double fill) {
  PrecedenceVector v;
  v.layout = precedence_layout(d);
  v.values.assign(vector_dimension(d), fill);
  return v;
}

ConfigurationSpec decode_precedence(const DomainModel& d, const PrecedenceVector& v) {
  const auto expected = precedence_layout(d);
  std::size_t total = 0;
  for (const auto& g : v.layout) total += g.elements.size();
  if (total != v.values.size())
    throw ConfigurationMismatch("dimension mismatch: layout has " + std::to_string(total) + " elements but " +
                                std::to_string(v.values.size()) + " values were given");
  if (total != vector_dimension(d) || v.layout.size() != expected.size())
    throw ConfigurationMismatch("dimension mismatch: model needs " + std::to_string(vector_dimension(d)) +
                                " values in " + std::to_string(expected.size()) + " groups");
  for (double x : v.values)
    if (!(x >= 0.0 && x <= 1.0)) throw ConfigurationMismatch("precedence value outside [0,1]");

  ConfigurationSpec c;
  std::set<std::pair<GroupKind, std::string>> seen;
  std::size_t offset = 0;
  for (const auto& g : v.layout) {
    auto match = std::find_if(expected.begin(), expected.end(), [&](const GroupDescriptor& e) {
      return e.kind == g.kind && e.owner == g.owner;
    });
    if (match == expected.end() || !seen.emplace(g.kind, g.owner).second)
      throw ConfigurationMismatch(std::string("layout group ") + to_string(g.kind) + " '" + g.owner +
                                  "' does not match the model");
    auto a = match->elements;
    auto b = g.elements;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b)
      throw ConfigurationMismatch(std::string("layout group ") + to_string(g.kind) + " '" + g.owner +
                                  "' lists different elements than the model");

    std::vector<std::size_t> idx(g.elements.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
      const double vx = v.values[offset + x];
      const double vy = v.values[offset + y];
      if (vx != vy) return vx < vy;
      return g.elements[x] < g.elements[y];
    });
    std::vector<std::string> order;
    order.reserve(idx.size());
    for (auto i : idx) order.push_back(g.elements[i]);
    offset += g.elements.size();

    switch (g.kind) {
      case GroupKind::Predicates:
        c.pred_order = std::move(order);
        break;
      case GroupKind::Operators:
        c.op_order = std::move(order);
        break;
      case GroupKind::Preconditions:
        c.pre_order[g.owner] = std::move(order);
        break;
      case GroupKind::Effects:
        c.eff_order[g.owner] = std::move(order);
        break;
    }
  }
  return c;
}

nlohmann::json to_json(const ConfigurationSpec& c) {
  nlohmann::json j;
  j["predOrder"] = c.pred_order;
  j["opOrder"] = c.op_order;
  j["preOrder"] = c.pre_order;
  j["effOrder"] = c.eff_order;
  return j;
}

ConfigurationSpec configuration_from_json(const nlohmann::json& j) {
  try {
    ConfigurationSpec c;
    j.at("predOrder").get_to(c.pred_order);
    j.at("opOrder").get_to(c.op_order);
    j.at("preOrder").get_to(c.pre_order);
    j.at("effOrder").get_to(c.eff_order);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationMismatch(std::string("malformed configuration: ") + e.what());
  }
}

nlohmann::json to_json(const PrecedenceVector& v) {
  nlohmann::json layout = nlohmann::json::array();
  for (const auto& g : v.layout) {
    layout.push_back({{"kind", to_string(g.kind)}, {"owner", g.owner}, {"elements", g.elements}});
  }
  return {{"layout", layout}, {"values", v.values}};
}

PrecedenceVector precedence_from_json(const nlohmann::json& j) {
  try {
    PrecedenceVector v;
    for (const auto& g : j.at("layout")) {
      v.layout.push_back({kind_from_string(g.at("kind").get<std::string>()), g.value("owner", std::string{}),
                          g.at("elements").get<std::vector<std::string>>()});
    }
    j.at("values").get_to(v.values);
    return v;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationMismatch(std::string("malformed precedence vector: ") + e.what());
  }
}

std::string config_digest(const ConfigurationSpec& c) { return digest_hex(to_json(c).dump()); }

}  // namespace domconf::config
