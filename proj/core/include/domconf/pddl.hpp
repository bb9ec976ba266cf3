#pragma once

// STRIPS + typing + equality subset of PDDL. Element order in every list is
// significant and preserved through parse and print.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "domconf/errors.hpp"

namespace domconf::pddl {

/// Name of the implicit root type.
inline constexpr std::string_view kObjectType = "object";

/// A variable or constant with an optional type. `type` is empty only in
/// untyped domains.
struct TypedName {
  std::string name;
  std::string type;

  friend bool operator==(const TypedName&, const TypedName&) = default;
};

struct TypeDecl {
  std::string name;
  std::string parent;

  friend bool operator==(const TypeDecl&, const TypeDecl&) = default;
};

struct PredicateDecl {
  std::string name;
  std::vector<TypedName> params;

  std::size_t arity() const { return params.size(); }
  friend bool operator==(const PredicateDecl&, const PredicateDecl&) = default;
};

enum class Polarity { Positive, Negative };

/// Predicate applied to terms. Terms starting with `?` are variables,
/// everything else is a constant. The predicate `=` is the static equality
/// test of `:equality`.
struct Literal {
  std::string predicate;
  std::vector<std::string> args;
  Polarity polarity = Polarity::Positive;

  bool negative() const { return polarity == Polarity::Negative; }
  bool is_equality() const { return predicate == "="; }

  /// Same predicate and arguments, polarity ignored.
  bool same_atom(const Literal& other) const {
    return predicate == other.predicate && args == other.args;
  }

  /// `pred a b` for positive, `not:pred a b` for negative literals. Used as
  /// the element name inside configurations.
  std::string canonical_name() const;

  /// PDDL rendering, e.g. `(not (on ?x ?y))`.
  std::string to_pddl() const;

  friend bool operator==(const Literal&, const Literal&) = default;
};

/// Lifted operator. `eff` is one ordered list mixing both polarities;
/// negative entries form eff-, positive entries eff+.
struct OperatorSchema {
  std::string name;
  std::vector<TypedName> params;
  std::vector<Literal> pre;
  std::vector<Literal> eff;

  std::vector<Literal> delete_effects() const;
  std::vector<Literal> add_effects() const;
  std::optional<std::string> param_type(std::string_view variable) const;

  friend bool operator==(const OperatorSchema&, const OperatorSchema&) = default;
};

struct DomainModel {
  std::string name;
  std::vector<std::string> requirements;
  std::vector<TypeDecl> types;
  std::vector<TypedName> constants;
  std::vector<PredicateDecl> predicates;
  std::vector<OperatorSchema> operators;

  bool typed() const;
  bool has_requirement(std::string_view tag) const;
  const PredicateDecl* find_predicate(std::string_view name) const;
  const OperatorSchema* find_operator(std::string_view name) const;
  std::optional<std::size_t> operator_index(std::string_view name) const;

  friend bool operator==(const DomainModel&, const DomainModel&) = default;
};

/// Ground atom (positive, constants only).
struct Atom {
  std::string predicate;
  std::vector<std::string> args;

  /// `pred a b`
  std::string key() const;
  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

struct ProblemModel {
  std::string name;
  std::string domain_name;
  std::vector<TypedName> objects;
  std::vector<Atom> init;
  std::vector<Atom> goal;

  friend bool operator==(const ProblemModel&, const ProblemModel&) = default;
};

/// Non-fatal findings collected while parsing (duplicate literals, etc).
using Warnings = std::vector<std::string>;

/// Requirement tags the parser accepts.
const std::vector<std::string>& supported_requirements();

DomainModel parse_domain(std::string_view text, Warnings* warnings = nullptr);
ProblemModel parse_problem(std::string_view text, Warnings* warnings = nullptr);

/// Checks a problem against its domain: matching domain name, declared
/// predicates and arities, objects declared, known types.
void validate_problem(const DomainModel& domain, const ProblemModel& problem);

/// Checks model invariants (unique names, declared predicates, arities,
/// variables bound by parameters, duplicate-free lists). Throws
/// ValidationError.
void validate_domain(const DomainModel& domain);

std::string print_domain(const DomainModel& domain);
std::string print_problem(const ProblemModel& problem);

/// `(:action ...)` block alone, indented as inside a domain.
std::string print_operator(const OperatorSchema& op);

DomainModel load_domain_file(const std::string& path, Warnings* warnings = nullptr);
ProblemModel load_problem_file(const std::string& path, Warnings* warnings = nullptr);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view contents);

}  // namespace domconf::pddl
