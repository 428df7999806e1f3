#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ldcforge/decpoly.hpp"
#include "ldcforge/errors.hpp"

namespace ldcforge::compose {

/// Root bookkeeping for one composition: the composite field GF(2^t) with
/// t = ord_{m1*m2}(2), a primitive (m1*m2)-th root gamma, and the induced
/// factor roots gamma1 = gamma^(mu*m2) of order m1 and gamma2 =
/// gamma^(nu*m1) of order m2. This library fixes mu = nu = 1 and rebuilds
/// the inputs against gamma1 and gamma2 instead of solving for mu, nu.
struct CompositionPlan {
  uint64_t m1 = 0, m2 = 0, m = 0;
  uint32_t t1 = 0, t2 = 0, t = 0;
  uint64_t mu = 1, nu = 1;
  algebra::FieldPtr field;
  algebra::FieldElement gamma;   // order m
  algebra::FieldElement gamma1;  // gamma^m2, order m1
  algebra::FieldElement gamma2;  // gamma^m1, order m2
};

/// Builds the composite field and roots for coprime moduli m1, m2. Throws
/// CrtConflict when gcd(m1, m2) > 1 and InvalidModulus when the product is
/// not a valid modulus (the product of two valid coprime moduli always is,
/// barring 64-bit overflow, which throws BudgetExceeded).
CompositionPlan plan_composition(uint64_t m1, uint64_t m2,
                                 const decpoly::SearchOptions& opts = {});

/// Product composition: rebuilds p1 and p2 against the composite roots,
/// expands p1(X^m2) * p2(X^m1) with exponents merged mod m1*m2 and
/// canceled terms dropped, and verifies the result against the canonical
/// set of the product before returning it (source "composed").
///
/// Rebuild rules by source: "lagrange" re-interpolates in the composite
/// field; "three-monomial" re-derives from the certificate exponents.
/// Any other source (including "composed") throws
/// RepresentationUnsupported. A composed result that fails verification
/// throws CompositionInvalid; the construction guarantees validity, so
/// that error signals a bug, not bad input.
decpoly::DecodingPolynomial compose(const decpoly::DecodingPolynomial& p1,
                                    const decpoly::DecodingPolynomial& p2,
                                    const decpoly::SearchOptions& opts = {});

/// One block of a query plan: "member" blocks spend 3 queries on one
/// certified modulus (2 primes), a "three-prime" block spends 8 queries on
/// 3 fresh odd primes, and a "generic" block spends 2^j queries on j fresh
/// odd primes. Non-member blocks carry modulus 0.
struct PlanBlock {
  std::string kind;  // "member", "three-prime", or "generic"
  uint64_t modulus = 0;
  uint32_t primes = 0;
  mpz_class queries;
};

struct QueryPlan {
  uint32_t r = 0;
  std::vector<PlanBlock> recipe;
  mpz_class k_bound;  // product of block query counts
};

/// Plans a k-query scheme whose modulus covers r distinct odd primes.
/// Certified members are taken ascending, skipping any that share a factor
/// with one already chosen. Even r with enough members: r/2 member blocks,
/// k = 3^(r/2). Odd r with the three-prime pool and enough members:
/// (r-3)/2 member blocks plus the 8-query block, k = 8 * 3^((r-3)/2).
/// Otherwise c = min(usable members, floor(r/2)) member blocks plus one
/// generic 2^(r-2c)-query block. Fresh odd primes for non-member blocks
/// are treated as unlimited. Throws InventoryExhausted for r < 2.
QueryPlan plan_queries(uint32_t r, const std::vector<uint64_t>& members,
                       bool with_three_prime_pool);

}  // namespace ldcforge::compose
