#pragma once

#include <algorithm>
#include <iterator>
#include <set>
#include <string>
#include <tuple>

#include "seg/bundle.hpp"

namespace seg {

struct AgreementScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Agreement between one annotation `s1` and a pseudo-reference `s2`:
/// precision = |S1 n S2| / |S1|, recall = |S1 n S2| / |S2|,
/// F1 = 2 |S1 n S2| / (|S1| + |S2|). An empty denominator yields 0; two empty
/// sets agree perfectly.
template <class T, class Compare>
AgreementScore set_agreement(const std::set<T, Compare>& s1, const std::set<T, Compare>& s2) {
  if (s1.empty() && s2.empty()) return {1.0, 1.0, 1.0};
  std::size_t common = 0;
  auto a = s1.begin();
  auto b = s2.begin();
  const auto& less = s1.key_comp();
  while (a != s1.end() && b != s2.end()) {
    if (less(*a, *b)) {
      ++a;
    } else if (less(*b, *a)) {
      ++b;
    } else {
      ++common;
      ++a;
      ++b;
    }
  }
  AgreementScore s;
  auto c = static_cast<double>(common);
  if (!s1.empty()) s.precision = c / static_cast<double>(s1.size());
  if (!s2.empty()) s.recall = c / static_cast<double>(s2.size());
  s.f1 = 2.0 * c / static_cast<double>(s1.size() + s2.size());
  return s;
}

/// (head key, relation name, tail key)
using RelationTriplet = std::tuple<std::string, std::string, std::string>;

std::set<Event> event_set(const EventGraphBundle& bundle);
std::set<RelationTriplet> relation_triplets(const EventGraphBundle& bundle);

}  // namespace seg
