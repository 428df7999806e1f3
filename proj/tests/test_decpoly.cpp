#include "doctest.h"

#include <chrono>
#include <string>
#include <vector>

#include "ldcforge/algebra.hpp"
#include "ldcforge/decpoly.hpp"
#include "ldcforge/errors.hpp"
#include "ldcforge/modulus.hpp"

using namespace ldcforge;
using namespace ldcforge::decpoly;
namespace a = ldcforge::algebra;

namespace {

std::string coef_hex(const DecodingPolynomial& p, uint64_t exp) {
  for (const auto& t : p.terms)
    if (t.exp == exp) return a::fe_to_hex(t.coef);
  return "<missing>";
}

}  // namespace

TEST_CASE("dense interpolation for m = 15") {
  auto p = lagrange_polynomial(15);
  CHECK(p.m == 15);
  CHECK(p.k() == 4);
  CHECK(p.source == "lagrange");
  CHECK(a::fe_to_hex(p.gamma) == "2");
  CHECK(coef_hex(p, 0) == "7");
  CHECK(coef_hex(p, 1) == "8");
  CHECK(coef_hex(p, 2) == "b");
  CHECK(coef_hex(p, 3) == "5");
  CHECK(verify_decoding_polynomial(p));
}

TEST_CASE("dense interpolation for m = 511") {
  auto p = lagrange_polynomial(511);
  CHECK(p.k() == 4);
  CHECK(coef_hex(p, 0) == "09b");
  CHECK(coef_hex(p, 1) == "16a");
  CHECK(coef_hex(p, 2) == "05a");
  CHECK(coef_hex(p, 3) == "1aa");
  CHECK(verify_decoding_polynomial(p));
}

TEST_CASE("interpolation never exceeds 2^r terms") {
  for (uint64_t m : {35ull, 2047ull}) {
    auto p = lagrange_polynomial(m);
    auto prof = modulus::profile(m);
    CHECK(p.k() <= prof.canonical.size() + 1);
    CHECK(verify_decoding_polynomial(p));
  }
}

TEST_CASE("mixed residues of two-prime moduli") {
  CHECK(mixed_residues(modulus::profile(15)) == std::pair<uint64_t, uint64_t>{6, 10});
  CHECK(mixed_residues(modulus::profile(511)) == std::pair<uint64_t, uint64_t>{147, 365});
  CHECK(mixed_residues(modulus::profile(2047)) == std::pair<uint64_t, uint64_t>{713, 1335});
}

TEST_CASE("coset ratios square under the doubling map") {
  auto prof = modulus::profile(15);
  auto f = a::field_create(4);
  auto gamma = a::fe_x(f);
  auto r1 = coset_ratio(prof, gamma, 1);
  auto r2 = coset_ratio(prof, gamma, 2);
  CHECK(r2 == r1 * r1);
  auto r7 = coset_ratio(prof, gamma, 7);
  CHECK(coset_ratio(prof, gamma, 14) == a::fe_pow(r7, 2));
}

TEST_CASE("ratios are undefined on prime-divisor cosets") {
  auto prof = modulus::profile(15);
  auto gamma = a::fe_x(a::field_create(4));
  CHECK_THROWS_AS(coset_ratio(prof, gamma, 0), ForbiddenCoset);
  CHECK_THROWS_AS(coset_ratio(prof, gamma, 3), ForbiddenCoset);
  CHECK_THROWS_AS(coset_ratio(prof, gamma, 5), ForbiddenCoset);
  CHECK_THROWS_AS(coset_ratio(prof, gamma, 10), ForbiddenCoset);
}

TEST_CASE("search rejects 15") {
  auto cert = collision_search(15);
  CHECK(cert.m == 15);
  CHECK(cert.verdict == Verdict::non_member);
  CHECK(cert.admissible_reps == 2);
  CHECK_FALSE(cert.poly.has_value());
}

TEST_CASE("search certifies 511 with the minimal witness") {
  auto cert = collision_search(511);
  REQUIRE(cert.verdict == Verdict::member);
  CHECK(cert.alpha == 3);
  CHECK(cert.c == 0);
  CHECK(cert.beta == 9);
  CHECK(cert.d == 4);
  CHECK(cert.u == 3);
  CHECK(cert.v == 144);
  CHECK(cert.admissible_reps == 48);
  REQUIRE(cert.a.has_value());
  REQUIRE(cert.b.has_value());
  CHECK(a::fe_to_hex(*cert.a) == "191");
  CHECK(a::fe_to_hex(*cert.b) == "035");
  REQUIRE(cert.poly.has_value());
  CHECK(cert.poly->k() == 3);
  CHECK(coef_hex(*cert.poly, 0) == "189");
  CHECK(coef_hex(*cert.poly, 3) == "135");
  CHECK(coef_hex(*cert.poly, 144) == "0bd");
  CHECK(verify_decoding_polynomial(*cert.poly));
}

TEST_CASE("search certifies 2047") {
  auto cert = collision_search(2047);
  REQUIRE(cert.verdict == Verdict::member);
  CHECK(cert.alpha == 1);
  CHECK(cert.c == 0);
  CHECK(cert.beta == 59);
  CHECK(cert.d == 1);
  CHECK(cert.u == 1);
  CHECK(cert.v == 118);
  CHECK(cert.admissible_reps == 176);
  REQUIRE(cert.poly.has_value());
  CHECK(coef_hex(*cert.poly, 0) == "053");
  CHECK(coef_hex(*cert.poly, 1) == "2f8");
  CHECK(coef_hex(*cert.poly, 118) == "2aa");
  CHECK(verify_decoding_polynomial(*cert.poly));
}

TEST_CASE("witness rebuild reproduces the certified polynomial") {
  auto cert = collision_search(511);
  REQUIRE(cert.verdict == Verdict::member);
  auto rebuilt = build_three_monomial(cert);
  REQUIRE(rebuilt.terms.size() == cert.poly->terms.size());
  for (size_t i = 0; i < rebuilt.terms.size(); ++i) {
    CHECK(rebuilt.terms[i].exp == cert.poly->terms[i].exp);
    CHECK(rebuilt.terms[i].coef == cert.poly->terms[i].coef);
  }
}

TEST_CASE("non-collision witnesses are refused") {
  auto prof = modulus::profile(15);
  auto f = a::field_create(4);
  auto gamma = a::fe_x(f);
  CHECK_THROWS_AS(build_three_monomial(prof, f, gamma, 1, 0, 7, 0), CertificateInconsistent);
}

TEST_CASE("verification is definition-level") {
  auto p = lagrange_polynomial(15);
  REQUIRE(verify_decoding_polynomial(p));

  auto tampered = p;
  tampered.terms[1].coef = tampered.terms[1].coef + a::fe_one(p.field);
  CHECK_FALSE(verify_decoding_polynomial(tampered));

  auto shifted = p;
  shifted.terms[3].exp = 15;  // exponent outside [0, m)
  CHECK_FALSE(verify_decoding_polynomial(shifted));

  auto unsorted = p;
  std::swap(unsorted.terms[0], unsorted.terms[1]);
  CHECK_FALSE(verify_decoding_polynomial(unsorted));

  auto wrong_root = p;
  wrong_root.gamma = a::fe_one(p.field);  // order 1, not 15
  CHECK_FALSE(verify_decoding_polynomial(wrong_root));
}

TEST_CASE("pair scan and collision search agree on small moduli") {
  for (uint64_t m : {15ull, 21ull, 33ull, 35ull, 39ull, 511ull}) {
    auto brute = brute_force_m2(m);
    auto fast = collision_search(m);
    CHECK(brute.verdict == fast.verdict);
    if (brute.verdict == Verdict::member) {
      REQUIRE(brute.poly.has_value());
      CHECK(verify_decoding_polynomial(*brute.poly));
    }
  }
}

TEST_CASE("scale caps reject oversized searches") {
  CHECK_THROWS_AS(brute_force_m2(100001), BudgetExceeded);
  CHECK_THROWS_AS(collision_search(uint64_t{1} << 40), BudgetExceeded);
}

TEST_CASE("an exhausted budget yields an unknown verdict") {
  // 22369621 = 2731 * 8191 divides 2^26 - 1 and has no ratio collision, so a
  // 1ms budget cannot reach any verdict over its ~860000 representatives.
  SearchOptions opts;
  opts.budget = std::chrono::milliseconds(1);
  opts.shards = 1;
  auto cert = collision_search(22369621, opts);
  CHECK(cert.verdict == Verdict::unknown);
  CHECK_FALSE(cert.note.empty());
  CHECK_FALSE(cert.poly.has_value());
}

TEST_CASE("a witness found before the budget expires still certifies membership") {
  SearchOptions opts;
  opts.budget = std::chrono::milliseconds(1);
  opts.shards = 1;
  auto cert = collision_search(8388607, opts);
  CHECK(cert.verdict == Verdict::member);
  REQUIRE(cert.poly.has_value());
  CHECK(verify_decoding_polynomial(*cert.poly));
}
