#pragma once

#include "limtower/int_matrix.hpp"
#include "limtower/normal_form.hpp"

#include <random>

namespace limtower::testutil {

using Rng = std::mt19937_64;

inline Int rand_int(Rng& rng, long lo, long hi) {
  std::uniform_int_distribution<long> d(lo, hi);
  return Int(d(rng));
}

inline IntMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols,
                               long lo, long hi) {
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rand_int(rng, lo, hi);
  return m;
}

inline IntVec random_vec(Rng& rng, std::size_t n, long lo, long hi) {
  IntVec v(n);
  for (auto& x : v) x = rand_int(rng, lo, hi);
  return v;
}

} // namespace limtower::testutil
