#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace zzlab {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt big_pow(std::uint64_t base, unsigned exponent) {
  return boost::multiprecision::pow(BigInt(base), exponent);
}

inline std::string to_string(const BigInt& v) { return v.str(); }

/// Exact binomial coefficient C(n, k) for a (possibly huge) nonnegative n.
inline BigInt binomial(const BigInt& n, unsigned k) {
  if (n < k) return 0;
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= (n - (i - 1));
    r /= i;
  }
  return r;
}

}  // namespace zzlab
