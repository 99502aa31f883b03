#pragma once

#include <cstddef>
#include <span>

namespace nambu_em {

/// Fixed-order pairwise (cascade) summation. The split points depend only on
/// the input length, so results are bit-identical across runs and thread
/// counts as long as the terms themselves are.
template <class T>
T pairwise_sum(std::span<const T> terms) {
  constexpr std::size_t kLeaf = 8;
  if (terms.size() <= kLeaf) {
    T acc{};
    for (const auto& t : terms) acc += t;
    return acc;
  }
  const std::size_t half = terms.size() / 2;
  return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

template <class Container>
auto pairwise_sum(const Container& c) {
  using T = typename Container::value_type;
  return pairwise_sum(std::span<const T>(c.data(), c.size()));
}

}  // namespace nambu_em
