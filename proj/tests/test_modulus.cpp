#include "doctest.h"

#include <algorithm>
#include <set>
#include <vector>

#include "ldcforge/errors.hpp"
#include "ldcforge/intfactor.hpp"
#include "ldcforge/modulus.hpp"

using namespace ldcforge;
using namespace ldcforge::modulus;
using intfactor::Primality;

namespace {

const std::vector<uint64_t>* coset_led_by(const ModulusProfile& p, uint64_t lead) {
  for (const auto& c : p.cosets)
    if (!c.empty() && c.front() == lead) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("profile of 15") {
  auto p = profile(15);
  CHECK(p.m == 15);
  CHECK(p.primes == std::vector<uint64_t>{3, 5});
  CHECK(p.t == 4);
  CHECK(p.canonical == std::vector<uint64_t>{1, 6, 10});
  CHECK(p.coset_count == 5);
  REQUIRE(p.cosets_materialized);
  REQUIRE(coset_led_by(p, 1) != nullptr);
  CHECK(*coset_led_by(p, 1) == std::vector<uint64_t>{1, 2, 4, 8});
  CHECK(*coset_led_by(p, 3) == std::vector<uint64_t>{3, 6, 9, 12});
  CHECK(*coset_led_by(p, 5) == std::vector<uint64_t>{5, 10});
  CHECK(*coset_led_by(p, 7) == std::vector<uint64_t>{7, 11, 13, 14});
  CHECK(*coset_led_by(p, 0) == std::vector<uint64_t>{0});
}

TEST_CASE("profiles of the certified moduli") {
  auto p511 = profile(511);
  CHECK(p511.primes == std::vector<uint64_t>{7, 73});
  CHECK(p511.t == 9);
  CHECK(p511.canonical == std::vector<uint64_t>{1, 147, 365});
  CHECK(p511.coset_count == 59);

  auto p2047 = profile(2047);
  CHECK(p2047.primes == std::vector<uint64_t>{23, 89});
  CHECK(p2047.t == 11);
  CHECK(p2047.canonical == std::vector<uint64_t>{1, 713, 1335});
  CHECK(p2047.coset_count == 187);

  auto big = profile(8388607);
  CHECK(big.primes == std::vector<uint64_t>{47, 178481});
  CHECK(big.t == 23);
  CHECK(big.canonical == std::vector<uint64_t>{1, 2677215, 5711393});
  CHECK(big.cosets_materialized);
}

TEST_CASE("canonical residues reduce to 0 or 1 modulo every prime") {
  for (uint64_t m : {15ull, 511ull, 2047ull}) {
    auto p = profile(m);
    CHECK(p.canonical.size() == (size_t{1} << p.primes.size()) - 1);
    for (uint64_t s : p.canonical) {
      for (uint64_t q : p.primes) CHECK(s % q <= 1);
      CHECK(s != 0);
    }
  }
}

TEST_CASE("invalid moduli are rejected") {
  CHECK_THROWS_AS(profile(9), InvalidModulus);    // prime power
  CHECK_THROWS_AS(profile(45), InvalidModulus);   // repeated factor
  CHECK_THROWS_AS(profile(14), InvalidModulus);   // even
  CHECK_THROWS_AS(profile(17), InvalidModulus);   // prime
  CHECK_THROWS_AS(profile(1), InvalidModulus);
  CHECK_THROWS_AS(profile(0), InvalidModulus);
}

TEST_CASE("cyclotomic cosets for any odd modulus") {
  auto [count15, cosets15] = cyclotomic_cosets(15);
  CHECK(count15 == 5);
  CHECK(cosets15.size() == 5);
  auto [count9, cosets9] = cyclotomic_cosets(9);
  CHECK(count9 == 3);  // {0}, {1,2,4,8,7,5}, {3,6}
  uint64_t covered = 0;
  for (const auto& c : cosets9) covered += c.size();
  CHECK(covered == 9);
  CHECK_THROWS_AS(cyclotomic_cosets(4), InvalidModulus);
  CHECK_THROWS_AS(cyclotomic_cosets(1), InvalidModulus);
}

TEST_CASE("crt combination") {
  CHECK(crt_u64({1, 0}, {3, 5}) == 10);
  CHECK(crt_u64({0, 1}, {3, 5}) == 6);
  CHECK(crt_u64({1, 1}, {3, 5}) == 1);
  CHECK(crt({mpz_class(2), mpz_class(3)}, {mpz_class(5), mpz_class(7)}) == 17);
  CHECK_THROWS_AS(crt_u64({0, 0}, {4, 6}), CrtConflict);
}

TEST_CASE("pairwise coprimality witness") {
  CHECK(pairwise_coprime({mpz_class(511), mpz_class(2047), mpz_class(8388607)}));
  CoprimeWitness w;
  CHECK_FALSE(pairwise_coprime({mpz_class(15), mpz_class(35)}, &w));
  CHECK(w.i == 0);
  CHECK(w.j == 1);
  CHECK(w.gcd == 5);
  CHECK_FALSE(pairwise_coprime({mpz_class(3), mpz_class(5), mpz_class(9)}, &w));
  CHECK(w.i == 0);
  CHECK(w.j == 2);
  CHECK(w.gcd == 3);
}

TEST_CASE("semiprime structure") {
  auto s511 = factor_semiprime(511);
  CHECK(s511.is_semiprime);
  REQUIRE(s511.factors.size() == 2);
  CHECK(s511.factors[0].p == 7);
  CHECK(s511.factors[1].p == 73);
  CHECK(s511.factors[0].primality == Primality::proven_prime);

  CHECK(factor_semiprime(2047).is_semiprime);
  CHECK_FALSE(factor_semiprime(536870911).is_semiprime);  // 2^29 - 1, three primes
  CHECK_FALSE(factor_semiprime(49).is_semiprime);         // repeated factor
  CHECK_FALSE(factor_semiprime(13).is_semiprime);
}

TEST_CASE("scan classifies small Mersenne numbers") {
  auto scan = scan_mersenne(2, 31);
  REQUIRE(scan.rows.size() == 2);
  CHECK(scan.rows[0].t == 11);
  CHECK(scan.rows[0].m == 2047);
  CHECK(scan.rows[0].p == 23);
  CHECK(scan.rows[0].q == 89);
  CHECK(scan.rows[0].p_primality == Primality::proven_prime);
  CHECK(scan.rows[0].q_primality == Primality::proven_prime);
  CHECK(scan.rows[1].t == 23);
  CHECK(scan.rows[1].p == 47);
  CHECK(scan.rows[1].q == 178481);

  std::set<uint32_t> skipped;
  for (const auto& s : scan.skipped) {
    CHECK_FALSE(s.reason.empty());
    skipped.insert(s.t);
  }
  CHECK(skipped == std::set<uint32_t>{2, 3, 5, 7, 13, 17, 19, 29, 31});
}

TEST_CASE("embedded usable rows divide their Mersenne numbers") {
  const auto& rows = known_mersenne_rows();
  CHECK(rows.size() == 50);
  CHECK(rows.front().t == 11);
  size_t below_128 = 0;
  for (const auto& row : rows) {
    if (row.t <= 127) ++below_128;
    CHECK(intfactor::is_prime(mpz_class(row.t)));
    mpz_class m = (mpz_class(1) << row.t) - 1;
    mpz_class p(row.p);
    CHECK(m % p == 0);
    CHECK(p * p < m);  // p is the smaller prime
  }
  CHECK(below_128 == 11);
}

TEST_CASE("primality classification levels") {
  CHECK(intfactor::classify(mpz_class(178481)) == Primality::proven_prime);
  CHECK(intfactor::classify(mpz_class(178483)) == Primality::composite);
  // 2^89 - 1 is prime but far above the proven 64-bit range.
  mpz_class m89 = (mpz_class(1) << 89) - 1;
  CHECK(intfactor::classify(m89) == Primality::probable_prime);
}
