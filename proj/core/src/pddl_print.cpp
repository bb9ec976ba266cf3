#include <sstream>

#include "domconf/pddl.hpp"

namespace domconf::pddl {
namespace {

// `?a ?b - t ?c - u`; consecutive names sharing a type are grouped.
std::string typed_list(const std::vector<TypedName>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!out.empty()) out += ' ';
    out += names[i].name;
    const bool last_of_run = i + 1 == names.size() || names[i + 1].type != names[i].type;
    if (last_of_run && !names[i].type.empty()) out += " - " + names[i].type;
  }
  return out;
}

void print_literals(std::ostringstream& out, const char* key, const std::vector<Literal>& lits) {
  out << "    " << key << " (and";
  for (const auto& l : lits) out << "\n      " << l.to_pddl();
  out << ")";
}

}  // namespace

std::string print_operator(const OperatorSchema& op) {
  std::ostringstream out;
  out << "  (:action " << op.name << "\n";
  out << "    :parameters (" << typed_list(op.params) << ")\n";
  print_literals(out, ":precondition", op.pre);
  out << "\n";
  print_literals(out, ":effect", op.eff);
  out << ")\n";
  return out.str();
}

std::string print_domain(const DomainModel& d) {
  std::ostringstream out;
  out << "(define (domain " << d.name << ")\n";
  if (!d.requirements.empty()) {
    out << "  (:requirements";
    for (const auto& r : d.requirements) out << ' ' << r;
    out << ")\n";
  }
  if (!d.types.empty()) {
    std::vector<TypedName> as_names;
    for (const auto& t : d.types) as_names.push_back({t.name, t.parent.empty() ? std::string(kObjectType) : t.parent});
    out << "  (:types " << typed_list(as_names) << ")\n";
  }
  if (!d.constants.empty()) out << "  (:constants " << typed_list(d.constants) << ")\n";
  out << "  (:predicates";
  for (const auto& p : d.predicates) {
    out << "\n    (" << p.name;
    if (!p.params.empty()) out << ' ' << typed_list(p.params);
    out << ")";
  }
  out << ")\n";
  for (const auto& op : d.operators) out << print_operator(op);
  out << ")\n";
  return out.str();
}

std::string print_problem(const ProblemModel& p) {
  std::ostringstream out;
  out << "(define (problem " << p.name << ")\n";
  out << "  (:domain " << p.domain_name << ")\n";
  out << "  (:objects " << typed_list(p.objects) << ")\n";
  out << "  (:init";
  for (const auto& a : p.init) out << "\n    (" << a.key() << ")";
  out << ")\n";
  out << "  (:goal (and";
  for (const auto& a : p.goal) out << "\n    (" << a.key() << ")";
  out << ")))\n";
  return out.str();
}

}  // namespace domconf::pddl
