#include "seg/agreement.hpp"

namespace seg {

std::set<Event> event_set(const EventGraphBundle& bundle) {
  return {bundle.events().begin(), bundle.events().end()};
}

std::set<RelationTriplet> relation_triplets(const EventGraphBundle& bundle) {
  std::set<RelationTriplet> out;
  for (auto r : kRelationOrder) {
    for (const auto& e : bundle.graph(r).edges()) {
      out.emplace(e.head.key(), std::string(relation_name(r)), e.tail.key());
    }
  }
  return out;
}

}  // namespace seg
