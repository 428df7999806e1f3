#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ldcforge/modulus.hpp"

namespace ldcforge::matchfam {

/// n vectors in Z_m^h with zero self inner products and all cross inner
/// products inside target_set (normally the canonical set of m).
struct MatchingFamily {
  uint64_t m = 0;
  size_t h = 0;
  std::vector<std::vector<uint64_t>> vectors;  // n rows of h coordinates
  std::vector<uint64_t> target_set;            // sorted

  size_t n() const { return vectors.size(); }
};

/// Result of verify_matching. When ok is false, (i, j) is the first
/// offending pair in scan order (i == j for a self product) and value is
/// the inner product mod m.
struct MatchingCheck {
  bool ok = true;
  size_t i = 0, j = 0;
  uint64_t value = 0;
  std::string reason;

  explicit operator bool() const { return ok; }
};

/// Checks both family conditions over all pairs in O(n^2 h).
MatchingCheck verify_matching(const MatchingFamily& f);

/// Deterministic family of n vectors whose Gram matrix is J_n - I_n mod m
/// (every cross inner product equals 1), built per prime factor by
/// symmetric congruence diagonalization, a two-square split of each
/// diagonal entry, and coordinatewise CRT. h <= 2n, except n = 1 where the
/// empty realization is padded to a single zero coordinate. Requires a
/// two-prime modulus (InvalidModulus otherwise).
MatchingFamily gram_family(uint64_t m, size_t n);

/// Smallest x >= 0 with d - x^2 a quadratic residue mod the odd prime p,
/// paired with a square root y of d - x^2 (Tonelli-Shanks; direct
/// exponent (p+1)/4 when p = 3 mod 4). Always solvable.
std::pair<uint64_t, uint64_t> sum_of_two_squares(uint64_t d, uint64_t p);

/// Randomized growth: samples uniform vectors in Z_m^h, keeping each iff it
/// is isotropic and every cross product with the kept set lies in the
/// canonical set. Stops at target_n vectors or after budget samples; the
/// result is a function of the seed. May return fewer than target_n.
MatchingFamily greedy_search(uint64_t m, size_t h, size_t target_n, uint64_t seed,
                             uint64_t budget);

}  // namespace ldcforge::matchfam
