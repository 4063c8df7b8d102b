#pragma once

#include <initializer_list>
#include <vector>

#include "leglab/rational.hpp"

namespace leglab::test {

inline Rational R(long long p, long long q = 1) { return Rational(BigInt(p), BigInt(q)); }

inline std::vector<BigInt> T(std::initializer_list<long long> xs) {
  std::vector<BigInt> out;
  for (long long x : xs) out.emplace_back(x);
  return out;
}

}  // namespace leglab::test
