#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ldcforge/errors.hpp"

namespace ldcforge::algebra {

/// GF(2^t) described by an irreducible modulus polynomial over GF(2).
/// Coefficient bit i of word k is the coefficient of X^(64k + i); the
/// modulus has degree t, so bit t is always set and all words above it
/// are zero.
struct FieldSpec {
  uint32_t t = 0;
  std::vector<uint64_t> modulus;

  size_t words() const { return (static_cast<size_t>(t) + 63) / 64; }
  bool operator==(const FieldSpec& o) const { return t == o.t && modulus == o.modulus; }
};

using FieldPtr = std::shared_ptr<const FieldSpec>;

/// Builds GF(2^t). Uses the built-in modulus table for t in {4, 9, 11, 23};
/// for every other degree, searches candidates in ascending coefficient
/// bit-string value and takes the first irreducible. Results are cached,
/// so repeated calls for the same degree share one FieldSpec.
FieldPtr field_create(uint32_t t);

/// Builds GF(2^t) with an explicit modulus in FieldSpec bit layout.
/// Throws IrreducibleViolation if deg != t or the polynomial is reducible.
FieldPtr field_create(uint32_t t, std::vector<uint64_t> modulus);

/// Rabin irreducibility test for a polynomial of degree t in FieldSpec
/// layout. Degree 0 or mismatched top bit returns false.
bool is_irreducible(const std::vector<uint64_t>& poly, uint32_t t);

/// An element of GF(2^t). Holds a shared reference to its field; all words
/// above bit t-1 are zero.
class FieldElement {
 public:
  FieldElement() = default;
  explicit FieldElement(FieldPtr f);
  FieldElement(FieldPtr f, std::vector<uint64_t> w);

  const FieldPtr& field() const { return field_; }
  const std::vector<uint64_t>& words() const { return w_; }
  bool is_zero() const;
  bool is_one() const;

  bool operator==(const FieldElement& o) const;
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

 private:
  FieldPtr field_;
  std::vector<uint64_t> w_;

  friend FieldElement fe_add(const FieldElement&, const FieldElement&);
  friend FieldElement fe_mul(const FieldElement&, const FieldElement&);
  friend FieldElement fe_inv(const FieldElement&);
  friend FieldElement fe_pow(const FieldElement&, const mpz_class&);
  friend FieldElement frobenius(const FieldElement&, uint64_t);
};

FieldElement fe_zero(const FieldPtr& f);
FieldElement fe_one(const FieldPtr& f);
/// The class of X, written gamma in this library.
FieldElement fe_x(const FieldPtr& f);

FieldElement fe_add(const FieldElement& x, const FieldElement& y);
FieldElement fe_mul(const FieldElement& x, const FieldElement& y);
/// Throws DivisionByZero on zero input.
FieldElement fe_inv(const FieldElement& x);
/// Exponent is reduced mod 2^t - 1 for nonzero bases; negative exponents
/// invert. 0^0 = 1, 0^e = 0 for e > 0, and 0^e with e < 0 throws.
FieldElement fe_pow(const FieldElement& x, const mpz_class& e);
FieldElement fe_pow(const FieldElement& x, int64_t e);

inline FieldElement operator+(const FieldElement& x, const FieldElement& y) { return fe_add(x, y); }
inline FieldElement operator*(const FieldElement& x, const FieldElement& y) { return fe_mul(x, y); }

/// x^(2^j); j is reduced mod t.
FieldElement frobenius(const FieldElement& x, uint64_t j);

/// Lowercase hex, low word first, exactly ceil(t/4) digits.
std::string fe_to_hex(const FieldElement& x);
FieldElement fe_from_hex(const FieldPtr& f, const std::string& s);

/// Multiplicative order of x. Requires factoring 2^t - 1; throws
/// OrderBudgetExceeded when that does not finish within the budget and
/// DivisionByZero for x = 0.
mpz_class element_order(const FieldElement& x,
                        std::chrono::milliseconds factor_budget = std::chrono::milliseconds(10000));

/// Deterministic primitive m-th root of unity in GF(2^t). Requires
/// m | 2^t - 1 (OrderUnsupported otherwise). When 2^t - 1 factors within
/// the budget: g^((2^t-1)/m) for the smallest-bit-string generator g of
/// the full multiplicative group. When factoring times out: the smallest-
/// bit-string x whose power y = x^((2^t-1)/m) has verified order exactly m
/// (checked through the factorization of m). Both paths are deterministic.
FieldElement primitive_root(const FieldPtr& f, const mpz_class& m,
                            std::chrono::milliseconds factor_budget = std::chrono::milliseconds(10000));

/// Checks ord(x) == m given m's prime factorization: x != 0, x^m == 1 and
/// x^(m/p) != 1 for every prime p. Cheap; needs no factoring of 2^t - 1.
bool has_order(const FieldElement& x, const mpz_class& m,
               const std::vector<mpz_class>& m_primes);

namespace gf {
// Low-level word-span kernels. Spans hold f.words() words unless noted.
// Callers guarantee operands belong to f and outputs do not alias inputs
// where stated. These back the FieldElement API and the hot search paths.

bool is_zero(const FieldSpec& f, const uint64_t* a);
bool equal(const FieldSpec& f, const uint64_t* a, const uint64_t* b);
void set_zero(const FieldSpec& f, uint64_t* a);
void set_one(const FieldSpec& f, uint64_t* a);
void add_into(const FieldSpec& f, uint64_t* acc, const uint64_t* x);
/// out must not alias a or b.
void mul(const FieldSpec& f, uint64_t* out, const uint64_t* a, const uint64_t* b);
/// In-place square via bit spreading and word-level reduction; wide is a
/// scratch span of 2 * f.words() + 1 words.
void sqr(const FieldSpec& f, uint64_t* a, uint64_t* wide);
/// out may alias base.
void pow_u64(const FieldSpec& f, uint64_t* out, const uint64_t* base, uint64_t e);
void pow_mpz(const FieldSpec& f, uint64_t* out, const uint64_t* base, const mpz_class& e);
void inv(const FieldSpec& f, uint64_t* out, const uint64_t* a);
/// Integer-value comparison of bit strings: -1, 0, or 1.
int cmp(const FieldSpec& f, const uint64_t* a, const uint64_t* b);

}  // namespace gf

}  // namespace ldcforge::algebra
