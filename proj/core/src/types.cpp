#include "domconf/types.hpp"

namespace domconf::pddl {

TypeHierarchy::TypeHierarchy(const DomainModel& domain) : typed_(domain.typed()) {
  for (const auto& t : domain.types) parent_[t.name] = t.parent.empty() ? std::string(kObjectType) : t.parent;
}

bool TypeHierarchy::known(std::string_view type) const {
  if (!typed_) return true;
  return type.empty() || type == kObjectType || parent_.find(type) != parent_.end();
}

bool TypeHierarchy::is_subtype(std::string_view type, std::string_view ancestor) const {
  if (!typed_) return true;
  if (ancestor.empty() || ancestor == kObjectType) return true;
  std::string_view current = type.empty() ? kObjectType : type;
  // Bounded so that a cyclic hierarchy terminates.
  for (std::size_t steps = 0; steps <= parent_.size(); ++steps) {
    if (current == ancestor) return true;
    auto it = parent_.find(current);
    if (it == parent_.end()) return false;
    current = it->second;
  }
  return false;
}

std::string TypeHierarchy::meet(std::string_view a, std::string_view b) const {
  if (is_subtype(a, b)) return std::string(a);
  if (is_subtype(b, a)) return std::string(b);
  return {};
}

}  // namespace domconf::pddl
