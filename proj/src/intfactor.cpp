#include "ldcforge/intfactor.hpp"

#include <algorithm>
#include <numeric>

#include "ldcforge/errors.hpp"
#include "ldcforge/util.hpp"

namespace ldcforge::intfactor {

namespace {

using u128 = unsigned __int128;

// Deterministic Miller-Rabin base set for n < 2^64.
constexpr uint64_t kBases[] = {2, 325, 9375, 28178, 450775, 9780504, 1795265022};

bool miller_rabin_u64(uint64_t n, uint64_t a) {
  a %= n;
  if (a == 0) return true;
  uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  uint64_t x = powmod_u64(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < r; ++i) {
    x = mulmod_u64(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

// Fixed-seed Miller-Rabin rounds for arbitrary-precision n.
bool miller_rabin_mpz(const mpz_class& n, int rounds) {
  mpz_class d = n - 1;
  const unsigned long r = mpz_scan1(d.get_mpz_t(), 0);
  d >>= r;
  gmp_randclass rng(gmp_randinit_default);
  rng.seed(0x1dcf0e5eu);
  for (int round = 0; round < rounds; ++round) {
    mpz_class a = rng.get_z_range(n - 3) + 2;
    mpz_class x;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (unsigned long i = 1; i < r; ++i) {
      x = (x * x) % n;
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

uint64_t pollard_brent_u64(uint64_t n, uint64_t c) {
  uint64_t y = 2, r = 1, q = 1, g = 1, x = 0, ys = 0;
  const uint64_t m = 128;
  while (g == 1) {
    x = y;
    for (uint64_t i = 0; i < r; ++i) {
      y = mulmod_u64(y, y, n) + c;
      if (y >= n) y -= n;
    }
    uint64_t k = 0;
    while (k < r && g == 1) {
      ys = y;
      const uint64_t lim = std::min(m, r - k);
      for (uint64_t i = 0; i < lim; ++i) {
        y = mulmod_u64(y, y, n) + c;
        if (y >= n) y -= n;
        q = mulmod_u64(q, x > y ? x - y : y - x, n);
      }
      g = gcd_u64(q, n);
      k += m;
    }
    r <<= 1;
  }
  if (g == n) {
    do {
      ys = mulmod_u64(ys, ys, n) + c;
      if (ys >= n) ys -= n;
      g = gcd_u64(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g;
}

uint64_t find_factor_u64(uint64_t n) {
  // n composite and odd.
  for (uint64_t c = 1;; ++c) {
    const uint64_t g = pollard_brent_u64(n, c);
    if (g != n && g != 1) return g;
  }
}

void factor_u64_into(uint64_t n, std::vector<uint64_t>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out.push_back(n);
    return;
  }
  const uint64_t g = find_factor_u64(n);
  factor_u64_into(g, out);
  factor_u64_into(n / g, out);
}

mpz_class pollard_brent_mpz(const mpz_class& n, unsigned long c, const util::Deadline& deadline) {
  mpz_class y = 2, x, ys, q = 1, g = 1, diff;
  uint64_t r = 1;
  const uint64_t m = 256;
  while (g == 1) {
    x = y;
    for (uint64_t i = 0; i < r; ++i) y = (y * y + c) % n;
    uint64_t k = 0;
    while (k < r && g == 1) {
      ys = y;
      const uint64_t lim = std::min(m, r - k);
      for (uint64_t i = 0; i < lim; ++i) {
        y = (y * y + c) % n;
        diff = x - y;
        q = (q * abs(diff)) % n;
      }
      mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      k += m;
      if (deadline.expired()) return 0;
    }
    r <<= 1;
  }
  if (g == n) {
    do {
      ys = (ys * ys + c) % n;
      diff = abs(mpz_class(x - ys));
      mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      if (deadline.expired() && g == 1) return 0;
    } while (g == 1);
  }
  return g == n ? mpz_class(0) : g;
}

// Appends the prime factorization of n (with multiplicity) to primes.
void factor_mpz_into(const mpz_class& n, const util::Deadline& deadline,
                     std::vector<mpz_class>& primes) {
  if (n == 1) return;
  if (n.fits_ulong_p()) {
    std::vector<uint64_t> f;
    factor_u64_into(n.get_ui(), f);
    for (uint64_t p : f) primes.emplace_back(static_cast<unsigned long>(p));
    return;
  }
  // GMP's own test is cheap and deterministic; certification labels are
  // assigned later by classify().
  if (mpz_probab_prime_p(n.get_mpz_t(), 25) != 0) {
    primes.push_back(n);
    return;
  }
  mpz_class g = 0;
  for (unsigned long c = 1; g == 0 || g == 1; ++c) {
    if (deadline.expired()) {
      std::string msg = "factor budget exceeded; factors found:";
      for (const auto& p : primes) msg += " " + p.get_str();
      throw FactorBudgetExceeded(msg);
    }
    g = pollard_brent_mpz(n, c, deadline);
  }
  factor_mpz_into(g, deadline, primes);
  factor_mpz_into(n / g, deadline, primes);
}

}  // namespace

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((u128)a * b % m);
}

uint64_t powmod_u64(uint64_t b, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, b, m);
    b = mulmod_u64(b, b, m);
    e >>= 1;
  }
  return r;
}

uint64_t gcd_u64(uint64_t a, uint64_t b) { return std::gcd(a, b); }

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  for (uint64_t a : kBases) {
    if (!miller_rabin_u64(n, a)) return false;
  }
  return true;
}

Primality classify(const mpz_class& n) {
  if (n < 2) return Primality::composite;
  if (n.fits_ulong_p()) {
    return is_prime_u64(n.get_ui()) ? Primality::proven_prime : Primality::composite;
  }
  if (mpz_even_p(n.get_mpz_t())) return Primality::composite;
  return miller_rabin_mpz(n, 64) ? Primality::probable_prime : Primality::composite;
}

bool is_prime(const mpz_class& n) { return classify(n) != Primality::composite; }

std::vector<PrimePower> factor(const mpz_class& n, std::chrono::milliseconds budget) {
  if (n <= 0) throw InvalidModulus("factor requires a positive integer");
  util::Deadline deadline(budget);
  mpz_class rem = n;
  std::vector<mpz_class> primes;
  for (uint64_t p = 2; p <= 1000000; p = (p == 2 ? 3 : p + 2)) {
    if (mpz_divisible_ui_p(rem.get_mpz_t(), p)) {
      do {
        rem /= p;
        primes.emplace_back(static_cast<unsigned long>(p));
      } while (mpz_divisible_ui_p(rem.get_mpz_t(), p));
    }
    if (rem == 1) break;
    if (rem < mpz_class(p) * p) break;
  }
  if (rem > 1) factor_mpz_into(rem, deadline, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<PrimePower> out;
  for (size_t i = 0; i < primes.size();) {
    size_t j = i;
    while (j < primes.size() && primes[j] == primes[i]) ++j;
    PrimePower pp;
    pp.p = primes[i];
    pp.e = static_cast<uint32_t>(j - i);
    pp.primality = classify(pp.p);
    out.push_back(std::move(pp));
    i = j;
  }
  return out;
}

std::vector<PrimePower> factor_u64(uint64_t n) {
  if (n == 0) throw InvalidModulus("factor requires a positive integer");
  std::vector<uint64_t> primes;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
    while (n % p == 0) {
      n /= p;
      primes.push_back(p);
    }
  }
  if (n > 1) factor_u64_into(n, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<PrimePower> out;
  for (size_t i = 0; i < primes.size();) {
    size_t j = i;
    while (j < primes.size() && primes[j] == primes[i]) ++j;
    PrimePower pp;
    pp.p = mpz_class(static_cast<unsigned long>(primes[i]));
    pp.e = static_cast<uint32_t>(j - i);
    pp.primality = Primality::proven_prime;
    out.push_back(std::move(pp));
    i = j;
  }
  return out;
}

std::vector<uint64_t> prime_factors_u64(uint64_t n) {
  std::vector<uint64_t> out;
  for (const auto& pp : factor_u64(n)) out.push_back(pp.p.get_ui());
  return out;
}

uint64_t order_u64(uint64_t a, uint64_t m) {
  if (m < 2 || gcd_u64(a % m, m) != 1)
    throw InvalidModulus("order requires gcd(a, m) = 1 and m >= 2");
  uint64_t result = 1;
  for (const auto& pp : factor_u64(m)) {
    const uint64_t p = pp.p.get_ui();
    uint64_t q = 1;
    for (uint32_t i = 0; i < pp.e; ++i) q *= p;
    // Start from a multiple of every element order mod q and strip primes.
    const uint64_t lambda = q / p * (p - 1);
    uint64_t ord = lambda;
    for (uint64_t ell : prime_factors_u64(lambda)) {
      while (ord % ell == 0 && powmod_u64(a, ord / ell, q) == 1) ord /= ell;
    }
    result = result / gcd_u64(result, ord) * ord;
  }
  return result;
}

}  // namespace ldcforge::intfactor
