#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ldcforge/algebra.hpp"
#include "ldcforge/modulus.hpp"

namespace ldcforge::decpoly {

/// One monomial of a decoding polynomial.
struct Term {
  uint64_t exp = 0;
  algebra::FieldElement coef;
};

/// P(X) over GF(2^t) with P(1) = 1 and P(gamma^s) = 0 for every s in the
/// canonical target set of m. gamma is the primitive m-th root the
/// polynomial was built and is verified against. Terms are sorted by
/// strictly ascending exponent and all coefficients are nonzero.
struct DecodingPolynomial {
  uint64_t m = 0;
  algebra::FieldPtr field;
  algebra::FieldElement gamma;
  std::vector<Term> terms;
  std::string source;  // "lagrange", "three-monomial", or "composed"

  size_t k() const { return terms.size(); }
};

enum class Verdict { member, non_member, unknown };

/// Outcome of a membership search. For a member verdict the witness
/// fields, coefficients, and the verified three-monomial polynomial are
/// set; u = alpha * 2^c mod m and v = beta * 2^d mod m name the monomial
/// exponents. For other verdicts the exhaustion statistics describe how
/// much of the space was covered.
struct M2Certificate {
  uint64_t m = 0;
  Verdict verdict = Verdict::unknown;
  algebra::FieldPtr field;
  algebra::FieldElement gamma;

  uint64_t alpha = 0, beta = 0;
  uint32_t c = 0, d = 0;
  uint64_t u = 0, v = 0;
  std::optional<algebra::FieldElement> a, b;
  std::optional<DecodingPolynomial> poly;

  uint64_t admissible_reps = 0;  // coset representatives examined
  std::string note;
};

struct SearchOptions {
  /// Wall-clock limit for the search itself; zero means unlimited. A
  /// timeout yields verdict unknown.
  std::chrono::milliseconds budget{0};
  /// Shard count for the enumeration; zero means worker_count().
  unsigned shards = 0;
  /// Budget handed to primitive_root's factoring attempt.
  std::chrono::milliseconds root_budget{2000};
};

/// Interpolated 2^r-term polynomial through (gamma^s, 0) for canonical s
/// plus (1, 1). Works for any valid modulus.
DecodingPolynomial lagrange_polynomial(uint64_t m);
DecodingPolynomial lagrange_polynomial(const modulus::ModulusProfile& prof,
                                       const algebra::FieldPtr& field,
                                       const algebra::FieldElement& gamma);

/// R_alpha = (gamma^alpha + gamma^(alpha*s01)) / (gamma^alpha + gamma^(alpha*s10))
/// for two-prime m, where s01 (0 mod p, 1 mod q) and s10 (1 mod p, 0 mod q)
/// are the mixed canonical residues. Throws ForbiddenCoset when p | alpha
/// or q | alpha (the denominator or numerator would vanish).
algebra::FieldElement coset_ratio(const modulus::ModulusProfile& prof,
                                  const algebra::FieldElement& gamma, uint64_t alpha);

/// Full-coset collision search over two-prime m: enumerates admissible
/// coset representatives, groups Frobenius orbits of their ratios by a
/// canonical key, and reports the lexicographically smallest witness
/// (alpha, beta, c, d) with alpha <= beta. Every reported collision is
/// re-verified by direct field comparison and the resulting polynomial is
/// re-verified against the canonical set. m above 2^37 - 1 is rejected
/// with BudgetExceeded.
M2Certificate collision_search(uint64_t m, const SearchOptions& opts = {});
M2Certificate collision_search(const modulus::ModulusProfile& prof,
                               const algebra::FieldPtr& field,
                               const algebra::FieldElement& gamma,
                               const SearchOptions& opts = {});

/// Builds the normalized three-monomial polynomial
/// (X^u + a X^v + b) / (1 + a + b) from a member witness, solving the two
/// mixed-residue rows and checking the third row plus the nonzero
/// constraints. Throws CertificateInconsistent if any check fails.
DecodingPolynomial build_three_monomial(const modulus::ModulusProfile& prof,
                                        const algebra::FieldPtr& field,
                                        const algebra::FieldElement& gamma,
                                        uint64_t alpha, uint32_t c, uint64_t beta, uint32_t d);
DecodingPolynomial build_three_monomial(const M2Certificate& cert);

/// Checks structure (sorted exponents below m, nonzero coefficients),
/// root order, P(1) = 1, and P(gamma^s) = 0 for every canonical s.
bool verify_decoding_polynomial(const DecodingPolynomial& p);

/// Definition-level exhaustive check over all admissible exponent pairs,
/// grouped by coset ratio. Agrees with collision_search by construction;
/// capped at m <= 10^5 (BudgetExceeded above).
M2Certificate brute_force_m2(uint64_t m, const SearchOptions& opts = {});

/// Mixed canonical residues (s01, s10) of a two-prime profile.
std::pair<uint64_t, uint64_t> mixed_residues(const modulus::ModulusProfile& prof);

}  // namespace ldcforge::decpoly
