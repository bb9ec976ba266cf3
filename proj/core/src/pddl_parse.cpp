#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "domconf/pddl.hpp"
#include "domconf/sexpr.hpp"
#include "domconf/types.hpp"

namespace domconf::pddl {

// ---------------------------------------------------------------------------
// Model helpers

std::string Literal::canonical_name() const {
  std::string out = negative() ? "not:" : "";
  out += predicate;
  for (const auto& a : args) {
    out += ' ';
    out += a;
  }
  return out;
}

std::string Literal::to_pddl() const {
  std::string atom = "(" + predicate;
  for (const auto& a : args) atom += " " + a;
  atom += ")";
  return negative() ? "(not " + atom + ")" : atom;
}

std::vector<Literal> OperatorSchema::delete_effects() const {
  std::vector<Literal> out;
  for (const auto& l : eff)
    if (l.negative()) out.push_back(l);
  return out;
}

std::vector<Literal> OperatorSchema::add_effects() const {
  std::vector<Literal> out;
  for (const auto& l : eff)
    if (!l.negative()) out.push_back(l);
  return out;
}

std::optional<std::string> OperatorSchema::param_type(std::string_view variable) const {
  for (const auto& p : params)
    if (p.name == variable) return p.type;
  return std::nullopt;
}

bool DomainModel::typed() const { return has_requirement(":typing") || !types.empty(); }

bool DomainModel::has_requirement(std::string_view tag) const {
  return std::find(requirements.begin(), requirements.end(), tag) != requirements.end();
}

const PredicateDecl* DomainModel::find_predicate(std::string_view n) const {
  for (const auto& p : predicates)
    if (p.name == n) return &p;
  return nullptr;
}

const OperatorSchema* DomainModel::find_operator(std::string_view n) const {
  for (const auto& o : operators)
    if (o.name == n) return &o;
  return nullptr;
}

std::optional<std::size_t> DomainModel::operator_index(std::string_view n) const {
  for (std::size_t i = 0; i < operators.size(); ++i)
    if (operators[i].name == n) return i;
  return std::nullopt;
}

std::string Atom::key() const {
  std::string out = predicate;
  for (const auto& a : args) {
    out += ' ';
    out += a;
  }
  return out;
}

const std::vector<std::string>& supported_requirements() {
  static const std::vector<std::string> tags{":strips", ":typing", ":equality"};
  return tags;
}

// ---------------------------------------------------------------------------
// Shared checks

namespace {

using sexpr::Node;

bool is_variable(std::string_view term) { return !term.empty() && term.front() == '?'; }

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Returns an error message for the first broken invariant of `lit` inside
// `op`, or an empty string.
std::string literal_problem(const Literal& lit, const OperatorSchema& op, const DomainModel& d,
                            const std::set<std::string, std::less<>>& constants) {
  if (lit.is_equality()) {
    if (lit.args.size() != 2) return "equality takes exactly two terms";
  } else {
    const PredicateDecl* decl = d.find_predicate(lit.predicate);
    if (decl == nullptr) return "undeclared predicate '" + lit.predicate + "' in action " + op.name;
    if (decl->arity() != lit.args.size()) {
      return "predicate '" + lit.predicate + "' expects " + std::to_string(decl->arity()) +
             " arguments, got " + std::to_string(lit.args.size());
    }
  }
  for (const auto& t : lit.args) {
    if (is_variable(t)) {
      if (!op.param_type(t)) return "variable " + t + " is not a parameter of action " + op.name;
    } else if (!constants.contains(t)) {
      return "unknown constant '" + t + "' in action " + op.name;
    }
  }
  return {};
}

std::set<std::string, std::less<>> constant_names(const DomainModel& d) {
  std::set<std::string, std::less<>> out;
  for (const auto& c : d.constants) out.insert(c.name);
  return out;
}

// ---------------------------------------------------------------------------
// Parser

class DomainParser {
 public:
  explicit DomainParser(Warnings* warnings) : warnings_(warnings) {}

  DomainModel parse(std::string_view text) {
    const Node root = sexpr::parse(text);
    expect_list(root, "domain definition");
    if (root.items.empty() || !root.items[0].is_atom() || lower(root.items[0].text) != "define") {
      throw SyntaxError("expected (define ...)", root.line, root.column);
    }
    if (root.items.size() < 2) throw SyntaxError("missing (domain <name>)", root.line, root.column);
    const Node& header = root.items[1];
    expect_list(header, "domain header");
    if (header.items.size() != 2 || !header.items[0].is_atom() || lower(header.items[0].text) != "domain" ||
        !header.items[1].is_atom()) {
      throw SyntaxError("expected (domain <name>)", header.line, header.column);
    }
    model_.name = lower(header.items[1].text);

    // Requirements and types decide how untyped names are read, so they
    // are handled before the remaining sections.
    std::vector<const Node*> rest;
    for (std::size_t i = 2; i < root.items.size(); ++i) {
      const Node& section = root.items[i];
      expect_list(section, "domain section");
      const std::string key = section_key(section);
      if (key == ":requirements") {
        parse_requirements(section);
      } else {
        if (key == ":types") saw_types_ = true;
        rest.push_back(&section);
      }
    }
    typed_ = model_.has_requirement(":typing") || saw_types_;

    for (const Node* section : rest) {
      const std::string key = section_key(*section);
      if (key == ":types") {
        parse_types(*section);
      } else if (key == ":constants") {
        model_.constants = parse_typed_list(*section, 1);
      } else if (key == ":predicates") {
        parse_predicates(*section);
      } else if (key == ":action") {
        parse_action(*section);
      } else if (key == ":functions") {
        throw UnsupportedRequirementError(":numeric-fluents", section->line, section->column);
      } else if (key == ":derived") {
        throw UnsupportedRequirementError(":derived-predicates", section->line, section->column);
      } else if (key == ":durative-action") {
        throw UnsupportedRequirementError(":durative-actions", section->line, section->column);
      } else {
        throw SyntaxError("unknown domain section " + key, section->line, section->column);
      }
    }
    check_types();
    return std::move(model_);
  }

 private:
  static void expect_list(const Node& n, const char* what) {
    if (!n.is_list()) throw SyntaxError(std::string("expected a list for ") + what, n.line, n.column);
  }

  static std::string section_key(const Node& section) {
    if (section.items.empty() || !section.items[0].is_atom())
      throw SyntaxError("expected a section keyword", section.line, section.column);
    return lower(section.items[0].text);
  }

  void warn(const std::string& message, const Node& at) {
    if (warnings_ != nullptr)
      warnings_->push_back(std::to_string(at.line) + ":" + std::to_string(at.column) + ": " + message);
  }

  void parse_requirements(const Node& section) {
    const auto& supported = supported_requirements();
    for (std::size_t i = 1; i < section.items.size(); ++i) {
      const Node& tag = section.items[i];
      if (!tag.is_atom()) throw SyntaxError("requirement must be a keyword", tag.line, tag.column);
      const std::string name = lower(tag.text);
      if (std::find(supported.begin(), supported.end(), name) == supported.end())
        throw UnsupportedRequirementError(name, tag.line, tag.column);
      if (!model_.has_requirement(name)) model_.requirements.push_back(name);
    }
  }

  // Reads `a b - t c` style lists starting at item `first`.
  std::vector<TypedName> parse_typed_list(const Node& list, std::size_t first) {
    std::vector<TypedName> out;
    std::size_t pending_from = 0;
    for (std::size_t i = first; i < list.items.size(); ++i) {
      const Node& item = list.items[i];
      if (item.is_list()) {
        if (!item.items.empty() && item.items[0].is_atom() && lower(item.items[0].text) == "either")
          throw UnsupportedRequirementError(":either-types", item.line, item.column);
        throw SyntaxError("expected a name", item.line, item.column);
      }
      if (item.text == "-") {
        if (i + 1 >= list.items.size()) throw SyntaxError("missing type after '-'", item.line, item.column);
        const Node& type = list.items[i + 1];
        if (type.is_list()) {
          if (!type.items.empty() && type.items[0].is_atom() && lower(type.items[0].text) == "either")
            throw UnsupportedRequirementError(":either-types", type.line, type.column);
          throw SyntaxError("expected a type name", type.line, type.column);
        }
        if (pending_from == out.size()) throw SyntaxError("type without names", item.line, item.column);
        for (std::size_t k = pending_from; k < out.size(); ++k) out[k].type = lower(type.text);
        pending_from = out.size();
        ++i;
        continue;
      }
      out.push_back({lower(item.text), {}});
    }
    if (typed_)
      for (std::size_t k = pending_from; k < out.size(); ++k) out[k].type = std::string(kObjectType);
    return out;
  }

  void parse_types(const Node& section) {
    for (auto& t : parse_typed_list(section, 1)) {
      if (t.name == kObjectType) continue;
      model_.types.push_back({t.name, t.type});
    }
  }

  void parse_predicates(const Node& section) {
    for (std::size_t i = 1; i < section.items.size(); ++i) {
      const Node& item = section.items[i];
      expect_list(item, "predicate declaration");
      if (item.items.empty() || !item.items[0].is_atom())
        throw SyntaxError("expected predicate name", item.line, item.column);
      PredicateDecl decl{lower(item.items[0].text), parse_typed_list(item, 1)};
      if (model_.find_predicate(decl.name) != nullptr)
        throw ValidationError("duplicate predicate '" + decl.name + "'", item.line, item.column);
      std::set<std::string> seen;
      for (const auto& p : decl.params) {
        if (!is_variable(p.name))
          throw SyntaxError("predicate parameter must be a variable", item.line, item.column);
        if (!seen.insert(p.name).second)
          throw ValidationError("repeated variable " + p.name + " in predicate " + decl.name, item.line,
                                item.column);
      }
      model_.predicates.push_back(std::move(decl));
    }
  }

  Literal parse_atom(const Node& n) {
    expect_list(n, "atom");
    if (n.items.empty() || !n.items[0].is_atom()) throw SyntaxError("expected predicate name", n.line, n.column);
    Literal lit;
    lit.predicate = lower(n.items[0].text);
    for (std::size_t i = 1; i < n.items.size(); ++i) {
      if (!n.items[i].is_atom()) throw SyntaxError("expected a term", n.items[i].line, n.items[i].column);
      lit.args.push_back(lower(n.items[i].text));
    }
    return lit;
  }

  static std::string head_of(const Node& n) {
    if (n.is_list() && !n.items.empty() && n.items[0].is_atom()) return lower(n.items[0].text);
    return {};
  }

  void parse_condition(const Node& n, std::vector<std::pair<Literal, const Node*>>& out) {
    expect_list(n, "precondition");
    if (n.items.empty()) return;
    const std::string head = head_of(n);
    if (head == "and") {
      for (std::size_t i = 1; i < n.items.size(); ++i) parse_condition(n.items[i], out);
      return;
    }
    if (head == "not") {
      if (n.items.size() != 2) throw SyntaxError("(not ...) takes one argument", n.line, n.column);
      Literal inner = parse_atom(n.items[1]);
      if (!inner.is_equality())
        throw UnsupportedRequirementError(":negative-preconditions", n.line, n.column);
      inner.polarity = Polarity::Negative;
      out.emplace_back(std::move(inner), &n);
      return;
    }
    if (head == "or" || head == "imply")
      throw UnsupportedRequirementError(":disjunctive-preconditions", n.line, n.column);
    if (head == "exists") throw UnsupportedRequirementError(":existential-preconditions", n.line, n.column);
    if (head == "forall") throw UnsupportedRequirementError(":universal-preconditions", n.line, n.column);
    if (head == "<" || head == ">" || head == "<=" || head == ">=")
      throw UnsupportedRequirementError(":numeric-fluents", n.line, n.column);
    out.emplace_back(parse_atom(n), &n);
  }

  void parse_effect(const Node& n, std::vector<std::pair<Literal, const Node*>>& out) {
    expect_list(n, "effect");
    if (n.items.empty()) return;
    const std::string head = head_of(n);
    if (head == "and") {
      for (std::size_t i = 1; i < n.items.size(); ++i) parse_effect(n.items[i], out);
      return;
    }
    if (head == "not") {
      if (n.items.size() != 2) throw SyntaxError("(not ...) takes one argument", n.line, n.column);
      Literal inner = parse_atom(n.items[1]);
      inner.polarity = Polarity::Negative;
      out.emplace_back(std::move(inner), &n);
      return;
    }
    if (head == "when" || head == "forall")
      throw UnsupportedRequirementError(":conditional-effects", n.line, n.column);
    if (head == "increase" || head == "decrease" || head == "assign" || head == "scale-up" ||
        head == "scale-down")
      throw UnsupportedRequirementError(":action-costs", n.line, n.column);
    out.emplace_back(parse_atom(n), &n);
  }

  void parse_action(const Node& section) {
    if (section.items.size() < 2 || !section.items[1].is_atom())
      throw SyntaxError("expected action name", section.line, section.column);
    OperatorSchema op;
    op.name = lower(section.items[1].text);
    if (model_.find_operator(op.name) != nullptr)
      throw ValidationError("duplicate action '" + op.name + "'", section.line, section.column);

    std::vector<std::pair<Literal, const Node*>> pre;
    std::vector<std::pair<Literal, const Node*>> eff;
    for (std::size_t i = 2; i < section.items.size(); i += 2) {
      const Node& key = section.items[i];
      if (!key.is_atom()) throw SyntaxError("expected an action keyword", key.line, key.column);
      if (i + 1 >= section.items.size())
        throw SyntaxError("missing value for " + key.text, key.line, key.column);
      const Node& value = section.items[i + 1];
      const std::string k = lower(key.text);
      if (k == ":parameters") {
        expect_list(value, ":parameters");
        op.params = parse_typed_list(value, 0);
        std::set<std::string> seen;
        for (const auto& p : op.params) {
          if (!is_variable(p.name)) throw SyntaxError("parameter must be a variable", value.line, value.column);
          if (!seen.insert(p.name).second)
            throw ValidationError("repeated parameter " + p.name + " in action " + op.name, value.line,
                                  value.column);
        }
      } else if (k == ":precondition") {
        parse_condition(value, pre);
      } else if (k == ":effect") {
        parse_effect(value, eff);
      } else {
        throw SyntaxError("unknown action keyword " + k, key.line, key.column);
      }
    }

    const auto constants = constant_names(model_);
    for (auto& [lit, node] : pre) {
      if (const auto problem = literal_problem(lit, op, model_, constants); !problem.empty())
        throw ValidationError(problem, node->line, node->column);
      if (std::find(op.pre.begin(), op.pre.end(), lit) != op.pre.end()) {
        warn("duplicate precondition " + lit.to_pddl() + " in " + op.name + " ignored", *node);
        continue;
      }
      op.pre.push_back(std::move(lit));
    }
    for (auto& [lit, node] : eff) {
      if (lit.is_equality()) throw ValidationError("equality cannot be an effect", node->line, node->column);
      if (const auto problem = literal_problem(lit, op, model_, constants); !problem.empty())
        throw ValidationError(problem, node->line, node->column);
      if (std::find(op.eff.begin(), op.eff.end(), lit) != op.eff.end()) {
        warn("duplicate effect " + lit.to_pddl() + " in " + op.name + " ignored", *node);
        continue;
      }
      const bool opposite = std::any_of(op.eff.begin(), op.eff.end(), [&](const Literal& e) {
        return e.same_atom(lit) && e.polarity != lit.polarity;
      });
      if (opposite) warn("effect " + lit.canonical_name() + " in " + op.name + " appears with both polarities", *node);
      op.eff.push_back(std::move(lit));
    }
    model_.operators.push_back(std::move(op));
  }

  void check_types() {
    if (!typed_) return;
    TypeHierarchy hierarchy(model_);
    auto check = [&](const TypedName& n, const std::string& where) {
      if (!hierarchy.known(n.type)) throw ValidationError("unknown type '" + n.type + "' in " + where, 0, 0);
    };
    for (const auto& t : model_.types)
      if (!hierarchy.known(t.parent)) throw ValidationError("unknown parent type '" + t.parent + "'", 0, 0);
    for (const auto& c : model_.constants) check(c, "constants");
    for (const auto& p : model_.predicates)
      for (const auto& a : p.params) check(a, "predicate " + p.name);
    for (const auto& o : model_.operators)
      for (const auto& a : o.params) check(a, "action " + o.name);
  }

  DomainModel model_;
  Warnings* warnings_;
  bool saw_types_ = false;
  bool typed_ = false;
};

class ProblemParser {
 public:
  explicit ProblemParser(Warnings* warnings) : warnings_(warnings) {}

  ProblemModel parse(std::string_view text) {
    const Node root = sexpr::parse(text);
    if (!root.is_list() || root.items.empty() || !root.items[0].is_atom() || lower(root.items[0].text) != "define")
      throw SyntaxError("expected (define ...)", root.line, root.column);
    if (root.items.size() < 2 || !root.items[1].is_list() || root.items[1].items.size() != 2 ||
        lower(root.items[1].items[0].text) != "problem" || !root.items[1].items[1].is_atom())
      throw SyntaxError("expected (problem <name>)", root.line, root.column);
    model_.name = lower(root.items[1].items[1].text);

    bool saw_goal = false;
    for (std::size_t i = 2; i < root.items.size(); ++i) {
      const Node& section = root.items[i];
      if (!section.is_list() || section.items.empty() || !section.items[0].is_atom())
        throw SyntaxError("expected a problem section", section.line, section.column);
      const std::string key = lower(section.items[0].text);
      if (key == ":domain") {
        if (section.items.size() != 2 || !section.items[1].is_atom())
          throw SyntaxError("expected (:domain <name>)", section.line, section.column);
        model_.domain_name = lower(section.items[1].text);
      } else if (key == ":requirements") {
        for (std::size_t k = 1; k < section.items.size(); ++k) {
          const std::string tag = lower(section.items[k].text);
          const auto& ok = supported_requirements();
          if (std::find(ok.begin(), ok.end(), tag) == ok.end())
            throw UnsupportedRequirementError(tag, section.items[k].line, section.items[k].column);
        }
      } else if (key == ":objects") {
        parse_objects(section);
      } else if (key == ":init") {
        for (std::size_t k = 1; k < section.items.size(); ++k) {
          const Node& n = section.items[k];
          if (n.is_list() && !n.items.empty() && n.items[0].is_atom()) {
            const std::string head = lower(n.items[0].text);
            if (head == "=") throw UnsupportedRequirementError(":numeric-fluents", n.line, n.column);
            if (head == "not") throw SyntaxError("negative literal in :init", n.line, n.column);
          }
          add_unique(model_.init, ground_atom(n), n, "initial atom");
        }
      } else if (key == ":goal") {
        if (section.items.size() != 2) throw SyntaxError("expected (:goal <condition>)", section.line, section.column);
        parse_goal(section.items[1]);
        saw_goal = true;
      } else if (key == ":metric") {
        throw UnsupportedRequirementError(":action-costs", section.line, section.column);
      } else {
        throw SyntaxError("unknown problem section " + key, section.line, section.column);
      }
    }
    if (!saw_goal || model_.goal.empty()) throw ValidationError("goal nonempty", root.line, root.column);
    return std::move(model_);
  }

 private:
  void parse_objects(const Node& section) {
    std::size_t pending = 0;
    bool any_typed = false;
    for (std::size_t i = 1; i < section.items.size(); ++i) {
      const Node& item = section.items[i];
      if (!item.is_atom()) throw SyntaxError("expected an object name", item.line, item.column);
      if (item.text == "-") {
        if (i + 1 >= section.items.size() || !section.items[i + 1].is_atom())
          throw SyntaxError("missing type after '-'", item.line, item.column);
        for (std::size_t k = pending; k < model_.objects.size(); ++k)
          model_.objects[k].type = lower(section.items[i + 1].text);
        pending = model_.objects.size();
        any_typed = true;
        ++i;
        continue;
      }
      const std::string name = lower(item.text);
      for (const auto& o : model_.objects)
        if (o.name == name) throw ValidationError("duplicate object '" + name + "'", item.line, item.column);
      model_.objects.push_back({name, {}});
    }
    if (any_typed)
      for (auto& o : model_.objects)
        if (o.type.empty()) o.type = std::string(kObjectType);
  }

  static Atom ground_atom(const Node& n) {
    if (!n.is_list() || n.items.empty() || !n.items[0].is_atom()) throw SyntaxError("expected an atom", n.line, n.column);
    Atom a{lower(n.items[0].text), {}};
    for (std::size_t i = 1; i < n.items.size(); ++i) {
      const Node& t = n.items[i];
      if (!t.is_atom()) throw SyntaxError("expected a constant", t.line, t.column);
      if (is_variable(t.text)) throw ValidationError("variable in ground atom", t.line, t.column);
      a.args.push_back(lower(t.text));
    }
    return a;
  }

  void parse_goal(const Node& n) {
    if (!n.is_list()) throw SyntaxError("expected a goal condition", n.line, n.column);
    if (n.items.empty()) return;
    const std::string head = n.items[0].is_atom() ? lower(n.items[0].text) : std::string{};
    if (head == "and") {
      for (std::size_t i = 1; i < n.items.size(); ++i) parse_goal(n.items[i]);
      return;
    }
    if (head == "not") throw UnsupportedRequirementError(":negative-preconditions", n.line, n.column);
    if (head == "or" || head == "imply") throw UnsupportedRequirementError(":disjunctive-preconditions", n.line, n.column);
    if (head == "exists" || head == "forall")
      throw UnsupportedRequirementError(":quantified-preconditions", n.line, n.column);
    add_unique(model_.goal, ground_atom(n), n, "goal atom");
  }

  void add_unique(std::vector<Atom>& into, Atom a, const Node& at, const char* what) {
    if (std::find(into.begin(), into.end(), a) != into.end()) {
      if (warnings_ != nullptr)
        warnings_->push_back(std::to_string(at.line) + ":" + std::to_string(at.column) + ": duplicate " + what +
                             " (" + a.key() + ") ignored");
      return;
    }
    into.push_back(std::move(a));
  }

  ProblemModel model_;
  Warnings* warnings_;
};

}  // namespace

DomainModel parse_domain(std::string_view text, Warnings* warnings) { return DomainParser(warnings).parse(text); }

ProblemModel parse_problem(std::string_view text, Warnings* warnings) {
  return ProblemParser(warnings).parse(text);
}

void validate_domain(const DomainModel& d) {
  std::set<std::string> names;
  for (const auto& p : d.predicates) {
    if (p.name.empty()) throw ValidationError("empty predicate name", 0, 0);
    if (!names.insert(p.name).second) throw ValidationError("duplicate predicate '" + p.name + "'", 0, 0);
    std::set<std::string> vars;
    for (const auto& a : p.params)
      if (!vars.insert(a.name).second)
        throw ValidationError("repeated variable " + a.name + " in predicate " + p.name, 0, 0);
  }
  names.clear();
  const auto constants = constant_names(d);
  for (const auto& o : d.operators) {
    if (!names.insert(o.name).second) throw ValidationError("duplicate action '" + o.name + "'", 0, 0);
    std::set<std::string> vars;
    for (const auto& a : o.params)
      if (!vars.insert(a.name).second) throw ValidationError("repeated parameter " + a.name + " in " + o.name, 0, 0);
    for (std::size_t i = 0; i < o.pre.size(); ++i) {
      const Literal& l = o.pre[i];
      if (auto msg = literal_problem(l, o, d, constants); !msg.empty()) throw ValidationError(msg, 0, 0);
      if (l.negative() && !l.is_equality())
        throw ValidationError("negative precondition in " + o.name, 0, 0);
      if (std::find(o.pre.begin(), o.pre.begin() + static_cast<std::ptrdiff_t>(i), l) != o.pre.begin() + static_cast<std::ptrdiff_t>(i))
        throw ValidationError("duplicate precondition " + l.to_pddl() + " in " + o.name, 0, 0);
    }
    for (std::size_t i = 0; i < o.eff.size(); ++i) {
      const Literal& l = o.eff[i];
      if (l.is_equality()) throw ValidationError("equality cannot be an effect", 0, 0);
      if (auto msg = literal_problem(l, o, d, constants); !msg.empty()) throw ValidationError(msg, 0, 0);
      if (std::find(o.eff.begin(), o.eff.begin() + static_cast<std::ptrdiff_t>(i), l) != o.eff.begin() + static_cast<std::ptrdiff_t>(i))
        throw ValidationError("duplicate effect " + l.to_pddl() + " in " + o.name, 0, 0);
    }
  }
}

void validate_problem(const DomainModel& d, const ProblemModel& p) {
  if (p.domain_name != d.name)
    throw ValidationError("problem is for domain '" + p.domain_name + "', not '" + d.name + "'", 0, 0);
  if (p.goal.empty()) throw ValidationError("goal nonempty", 0, 0);
  TypeHierarchy hierarchy(d);
  std::set<std::string, std::less<>> objects;
  for (const auto& c : d.constants) objects.insert(c.name);
  for (const auto& o : p.objects) {
    if (d.typed() && !o.type.empty() && !hierarchy.known(o.type))
      throw ValidationError("object '" + o.name + "' has unknown type '" + o.type + "'", 0, 0);
    objects.insert(o.name);
  }
  auto check = [&](const Atom& a, const char* where) {
    const PredicateDecl* decl = d.find_predicate(a.predicate);
    if (decl == nullptr) throw ValidationError(std::string(where) + " uses undeclared predicate '" + a.predicate + "'", 0, 0);
    if (decl->arity() != a.args.size())
      throw ValidationError(std::string(where) + " atom (" + a.key() + ") has wrong arity", 0, 0);
    for (const auto& arg : a.args)
      if (!objects.contains(arg))
        throw ValidationError(std::string(where) + " atom (" + a.key() + ") uses undeclared object '" + arg + "'", 0, 0);
  };
  for (const auto& a : p.init) check(a, "init");
  for (const auto& a : p.goal) check(a, "goal");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw InputError("failed writing " + path);
}

DomainModel load_domain_file(const std::string& path, Warnings* warnings) {
  return parse_domain(read_text_file(path), warnings);
}

ProblemModel load_problem_file(const std::string& path, Warnings* warnings) {
  return parse_problem(read_text_file(path), warnings);
}

}  // namespace domconf::pddl
