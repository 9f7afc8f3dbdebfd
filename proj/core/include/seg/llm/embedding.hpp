#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace seg::llm {

struct EmbeddingVector {
  std::vector<double> values;

  std::size_t dimension() const noexcept { return values.size(); }
  double norm() const noexcept;
};

/// 1 - cos(a, b). Throws InvalidArgument on a dimension mismatch or a zero-norm vector.
double cosine_distance(const EmbeddingVector& a, const EmbeddingVector& b);

}  // namespace seg::llm
