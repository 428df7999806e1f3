#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace ldcforge::intfactor {

/// Primality with certification level. Below 2^64 the test is a
/// deterministic Miller-Rabin base set and the result is proven; above,
/// 64 fixed-seed Miller-Rabin rounds give a probable verdict.
enum class Primality { composite, proven_prime, probable_prime };

Primality classify(const mpz_class& n);
bool is_prime(const mpz_class& n);
bool is_prime_u64(uint64_t n);

/// One prime power in a factorization.
struct PrimePower {
  mpz_class p;
  uint32_t e = 0;
  Primality primality = Primality::composite;
};

/// Full factorization by trial division to 10^6 followed by Pollard rho
/// (Brent variant) with a wall-clock budget. Throws FactorBudgetExceeded
/// when a cofactor resists within the budget; the exception message lists
/// the factors found so far. Factors are sorted ascending.
std::vector<PrimePower> factor(const mpz_class& n,
                               std::chrono::milliseconds budget = std::chrono::milliseconds(30000));

/// Factorization for 64-bit n; never needs a budget.
std::vector<PrimePower> factor_u64(uint64_t n);

/// Distinct primes of a 64-bit n, ascending.
std::vector<uint64_t> prime_factors_u64(uint64_t n);

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m);
uint64_t powmod_u64(uint64_t b, uint64_t e, uint64_t m);
uint64_t gcd_u64(uint64_t a, uint64_t b);

/// Multiplicative order of a mod m; requires gcd(a, m) = 1.
uint64_t order_u64(uint64_t a, uint64_t m);

}  // namespace ldcforge::intfactor
