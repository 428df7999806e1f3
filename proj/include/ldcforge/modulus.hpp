#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ldcforge/errors.hpp"
#include "ldcforge/intfactor.hpp"

namespace ldcforge::modulus {

/// Arithmetic profile of an odd squarefree modulus m with at least two
/// prime factors: its primes, t = ord_m(2), and the canonical target set
/// (residues congruent to 0 or 1 modulo every prime factor, except the
/// all-zero one). Cyclotomic cosets of 2 are materialized only for
/// m <= 2^24; larger profiles carry coset_count = 0 and an empty list.
struct ModulusProfile {
  uint64_t m = 0;
  std::vector<uint64_t> primes;
  uint32_t t = 0;
  std::vector<uint64_t> canonical;  // sorted ascending; size 2^r - 1
  uint64_t coset_count = 0;
  std::vector<std::vector<uint64_t>> cosets;  // each sorted, led by its minimum
  bool cosets_materialized = false;
};

/// Validates m (odd, squarefree, >= 2 prime factors) and computes the
/// profile. Throws InvalidModulus on violation.
ModulusProfile profile(uint64_t m);

/// Number of cyclotomic cosets of 2 modulo any odd m >= 3, with the cosets
/// themselves. Throws InvalidModulus for even or tiny m.
std::pair<uint64_t, std::vector<std::vector<uint64_t>>> cyclotomic_cosets(uint64_t m);

/// CRT combine: x = residues[i] mod moduli[i]. Moduli must be pairwise
/// coprime (CrtConflict otherwise). Returns x in [0, prod).
mpz_class crt(const std::vector<mpz_class>& residues, const std::vector<mpz_class>& moduli);
uint64_t crt_u64(const std::vector<uint64_t>& residues, const std::vector<uint64_t>& moduli);

/// True if the moduli are pairwise coprime; witness holds the first
/// offending pair and gcd otherwise.
struct CoprimeWitness {
  size_t i = 0, j = 0;
  mpz_class gcd;
};
bool pairwise_coprime(const std::vector<mpz_class>& moduli, CoprimeWitness* witness = nullptr);

/// Structure report for factor_semiprime.
struct CompositeStructure {
  mpz_class n;
  std::vector<intfactor::PrimePower> factors;
  bool is_semiprime = false;  // exactly two distinct primes, each once
};

/// Factors n within the budget and reports whether it is a product of two
/// distinct primes. Throws FactorBudgetExceeded when factoring stalls.
CompositeStructure factor_semiprime(const mpz_class& n,
                                    std::chrono::milliseconds budget = std::chrono::milliseconds(30000));

/// One usable Mersenne-number row: 2^t - 1 = p * q with p < q prime.
struct MersenneRow {
  uint32_t t = 0;
  mpz_class m;  // 2^t - 1
  mpz_class p;
  mpz_class q;
  intfactor::Primality p_primality = intfactor::Primality::composite;
  intfactor::Primality q_primality = intfactor::Primality::composite;
};

/// A skipped exponent with the reason (m prime, more than two factors,
/// repeated factor, or factoring budget exhausted).
struct MersenneSkip {
  uint32_t t = 0;
  std::string reason;
};

struct MersenneScan {
  std::vector<MersenneRow> rows;
  std::vector<MersenneSkip> skipped;
};

/// Scans prime exponents t in [t_min, t_max] and classifies 2^t - 1.
/// budget_per_t bounds the factoring time for each exponent.
MersenneScan scan_mersenne(uint32_t t_min, uint32_t t_max,
                           std::chrono::milliseconds budget_per_t = std::chrono::milliseconds(30000));

/// The fifty known usable rows, embedded as (t, p) with p the smaller
/// prime as a decimal string; q is recovered as (2^t - 1) / p.
struct KnownMersenneRow {
  uint32_t t;
  const char* p;
};
const std::vector<KnownMersenneRow>& known_mersenne_rows();

}  // namespace ldcforge::modulus
