#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "domconf/pddl.hpp"

namespace domconf::pddl {

/// Subtype relation of a domain's `:types` block. In untyped domains every
/// name is compatible with every other.
class TypeHierarchy {
 public:
  explicit TypeHierarchy(const DomainModel& domain);

  bool known(std::string_view type) const;
  /// True when `type` equals `ancestor` or descends from it.
  bool is_subtype(std::string_view type, std::string_view ancestor) const;
  /// The more specific of two related types; empty when unrelated.
  std::string meet(std::string_view a, std::string_view b) const;

 private:
  bool typed_ = false;
  std::map<std::string, std::string, std::less<>> parent_;
};

}  // namespace domconf::pddl
