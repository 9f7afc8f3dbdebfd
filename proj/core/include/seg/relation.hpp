#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace seg {

enum class RelationType { hierarchical, temporal, causal };

/// Generation order: each relation may depend on the ones before it.
inline constexpr std::array<RelationType, 3> kRelationOrder = {
    RelationType::hierarchical, RelationType::temporal, RelationType::causal};

/// "is_subevent_of", "happened_before" or "caused_by".
std::string_view relation_name(RelationType r) noexcept;

/// "hierarchical", "temporal" or "causal".
std::string_view relation_label(RelationType r) noexcept;

/// Accepts either the serialized name or the label.
std::optional<RelationType> parse_relation(std::string_view s) noexcept;

}  // namespace seg
