#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "wignerlab/errors.hpp"

namespace wignerlab {

enum class Verdict {
  /// k_* = 1: every surjective rank-k self-map is a Wigner map.
  Conclusive,
  /// The recursion stops at a proper divisor k_* > 1 of n; the question
  /// reduces to the k_* | n case.
  ReducesToDivisor,
};

inline const char* to_string(Verdict v) {
  return v == Verdict::Conclusive ? "Conclusive" : "ReducesToDivisor";
}

/// k_0 = k, k_{i+1} = n mod k_i, stopped before the terminating zero.
struct KSequence {
  std::int64_t n = 0;
  std::vector<std::int64_t> ks;
  std::int64_t k_star = 0;
  Verdict verdict = Verdict::Conclusive;
};

inline KSequence compute_sequence(std::int64_t n, std::int64_t k) {
  if (k < 1 || k >= n)
    throw InvalidRank("compute_sequence: need 1 <= k < n (n=" +
                      std::to_string(n) + ", k=" + std::to_string(k) + ")");
  KSequence s;
  s.n = n;
  for (std::int64_t cur = k; cur != 0; cur = n % cur) s.ks.push_back(cur);
  s.k_star = s.ks.back();
  s.verdict = s.k_star == 1 ? Verdict::Conclusive : Verdict::ReducesToDivisor;
  return s;
}

/// gcd(n, k) divides every element of the sequence. Always true.
inline bool divisor_invariant_check(std::int64_t n, std::int64_t k) {
  const KSequence s = compute_sequence(n, k);
  const std::int64_t g = std::gcd(n, k);
  for (const auto v : s.ks)
    if (v % g != 0) return false;
  return true;
}

}  // namespace wignerlab
