#pragma once

// Domain model configurations: one total order over the predicates, one over
// the operators, and one over the preconditions and the effects of every
// operator.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json_fwd.hpp>

#include "domconf/pddl.hpp"

namespace domconf::config {

using BigInt = boost::multiprecision::cpp_int;

/// Orders referenced by canonical element name: identifiers for predicates
/// and operators, Literal::canonical_name() for preconditions and effects.
struct ConfigurationSpec {
  std::vector<std::string> pred_order;
  std::vector<std::string> op_order;
  std::map<std::string, std::vector<std::string>> pre_order;
  std::map<std::string, std::vector<std::string>> eff_order;

  friend bool operator==(const ConfigurationSpec&, const ConfigurationSpec&) = default;
};

enum class GroupKind { Predicates, Operators, Preconditions, Effects };

struct GroupDescriptor {
  GroupKind kind = GroupKind::Predicates;
  std::string owner;  ///< operator name for Preconditions/Effects groups
  std::vector<std::string> elements;

  friend bool operator==(const GroupDescriptor&, const GroupDescriptor&) = default;
};

/// One precedence value in [0,1] per configurable element. `layout` fixes
/// which value governs which element: values are consumed group by group,
/// element by element.
struct PrecedenceVector {
  std::vector<GroupDescriptor> layout;
  std::vector<double> values;

  std::size_t dimension() const { return values.size(); }
  friend bool operator==(const PrecedenceVector&, const PrecedenceVector&) = default;
};

/// Raised when a configuration or vector does not fit the model it is
/// applied to.
class ConfigurationMismatch : public InputError {
 public:
  using InputError::InputError;
};

/// 2 + 2k groups: predicates, operators, then pre and eff for each of the k
/// operators in model order.
std::vector<GroupDescriptor> precedence_layout(const pddl::DomainModel& d);

/// |P| + |Ops| + Σ(|pre(o)| + |eff(o)|)
std::size_t vector_dimension(const pddl::DomainModel& d);

/// |P|! |Ops|! Π(|pre(o)|! |eff(o)|!), exact.
BigInt space_size(const pddl::DomainModel& d);

/// |pre(o)|! |eff(o)|!
BigInt operator_space_size(const pddl::OperatorSchema& op);

/// Every group shuffled independently and uniformly.
ConfigurationSpec random_configuration(const pddl::DomainModel& d, std::uint64_t seed);

/// The orders currently embodied by `d`.
ConfigurationSpec configuration_of(const pddl::DomainModel& d);

/// Reorders `d` per `c`. Throws ConfigurationMismatch unless every order is
/// a bijection onto the corresponding element set.
pddl::DomainModel apply_configuration(const pddl::DomainModel& d, const ConfigurationSpec& c);

/// Vector with `d`'s layout and every value set to `fill`.
PrecedenceVector uniform_vector(const pddl::DomainModel& d, double fill = 0.0);

/// Sorts every group by ascending value, ties by ascending canonical name.
ConfigurationSpec decode_precedence(const pddl::DomainModel& d, const PrecedenceVector& v);

nlohmann::json to_json(const ConfigurationSpec& c);
ConfigurationSpec configuration_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PrecedenceVector& v);
PrecedenceVector precedence_from_json(const nlohmann::json& j);

/// Digest of the canonical JSON rendering.
std::string config_digest(const ConfigurationSpec& c);

const char* to_string(GroupKind kind);

}  // namespace domconf::config
