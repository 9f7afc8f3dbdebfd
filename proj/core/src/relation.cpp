#include "seg/relation.hpp"

namespace seg {

std::string_view relation_name(RelationType r) noexcept {
  switch (r) {
    case RelationType::hierarchical: return "is_subevent_of";
    case RelationType::temporal: return "happened_before";
    case RelationType::causal: return "caused_by";
  }
  return {};
}

std::string_view relation_label(RelationType r) noexcept {
  switch (r) {
    case RelationType::hierarchical: return "hierarchical";
    case RelationType::temporal: return "temporal";
    case RelationType::causal: return "causal";
  }
  return {};
}

std::optional<RelationType> parse_relation(std::string_view s) noexcept {
  for (auto r : kRelationOrder) {
    if (s == relation_name(r) || s == relation_label(r)) return r;
  }
  return std::nullopt;
}

}  // namespace seg
