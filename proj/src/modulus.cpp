#include "ldcforge/modulus.hpp"

#include <algorithm>

#include "ldcforge/util.hpp"

namespace ldcforge::modulus {

namespace {

constexpr uint64_t kCosetCap = uint64_t(1) << 24;

// Canonical target set: residues congruent to 0 or 1 mod every prime
// factor, excluding the residue that is 0 mod all of them. Size 2^r - 1.
std::vector<uint64_t> canonical_set(const std::vector<uint64_t>& primes) {
  const size_t r = primes.size();
  std::vector<uint64_t> out;
  out.reserve((size_t(1) << r) - 1);
  for (uint64_t mask = 1; mask < (uint64_t(1) << r); ++mask) {
    std::vector<uint64_t> residues(r), mods(primes.begin(), primes.end());
    for (size_t i = 0; i < r; ++i) residues[i] = (mask >> i) & 1;
    out.push_back(crt_u64(residues, mods));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::pair<uint64_t, std::vector<std::vector<uint64_t>>> cyclotomic_cosets(uint64_t m) {
  if (m < 3 || m % 2 == 0) throw InvalidModulus("cyclotomic cosets require odd m >= 3");
  std::vector<bool> seen(m, false);
  std::vector<std::vector<uint64_t>> cosets;
  for (uint64_t a = 0; a < m; ++a) {
    if (seen[a]) continue;
    std::vector<uint64_t> orbit;
    uint64_t x = a;
    do {
      seen[x] = true;
      orbit.push_back(x);
      x = intfactor::mulmod_u64(x, 2, m);
    } while (x != a);
    // The orbit starts at its minimum; store it fully sorted.
    std::sort(orbit.begin(), orbit.end());
    cosets.push_back(std::move(orbit));
  }
  return {cosets.size(), std::move(cosets)};
}

ModulusProfile profile(uint64_t m) {
  if (m < 3) throw InvalidModulus("modulus must be at least 3");
  if (m % 2 == 0) throw InvalidModulus("modulus must be odd");
  ModulusProfile p;
  p.m = m;
  for (const auto& pp : intfactor::factor_u64(m)) {
    if (pp.e > 1)
      throw InvalidModulus("modulus must be squarefree; " + pp.p.get_str() + " repeats");
    p.primes.push_back(pp.p.get_ui());
  }
  if (p.primes.size() < 2)
    throw InvalidModulus("modulus must have at least two prime factors");
  const uint64_t t = intfactor::order_u64(2, m);
  if (t > 0xffffffffull) throw InvalidModulus("ord_m(2) too large");
  p.t = static_cast<uint32_t>(t);
  p.canonical = canonical_set(p.primes);
  if (m <= kCosetCap) {
    auto [count, cosets] = cyclotomic_cosets(m);
    p.coset_count = count;
    p.cosets = std::move(cosets);
    p.cosets_materialized = true;
  }
  return p;
}

mpz_class crt(const std::vector<mpz_class>& residues, const std::vector<mpz_class>& moduli) {
  if (residues.size() != moduli.size() || moduli.empty())
    throw CrtConflict("residue and modulus lists must match and be nonempty");
  mpz_class x = residues[0] % moduli[0];
  if (x < 0) x += moduli[0];
  mpz_class mod = moduli[0];
  for (size_t i = 1; i < moduli.size(); ++i) {
    mpz_class g, s, u;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), u.get_mpz_t(), mod.get_mpz_t(), moduli[i].get_mpz_t());
    if (g != 1)
      throw CrtConflict("moduli " + mod.get_str() + " and " + moduli[i].get_str() +
                        " share factor " + g.get_str());
    // x' = x + mod * s * (r_i - x) mod (mod * m_i)
    mpz_class target = residues[i] % moduli[i];
    if (target < 0) target += moduli[i];
    mpz_class diff = (target - x) % moduli[i];
    mpz_class lift = (s * diff) % moduli[i];
    x += mod * lift;
    mod *= moduli[i];
    x %= mod;
    if (x < 0) x += mod;
  }
  return x;
}

uint64_t crt_u64(const std::vector<uint64_t>& residues, const std::vector<uint64_t>& moduli) {
  std::vector<mpz_class> r, m;
  for (uint64_t v : residues) r.emplace_back(static_cast<unsigned long>(v));
  for (uint64_t v : moduli) m.emplace_back(static_cast<unsigned long>(v));
  const mpz_class x = crt(r, m);
  if (!x.fits_ulong_p()) throw CrtConflict("crt result exceeds 64 bits");
  return x.get_ui();
}

bool pairwise_coprime(const std::vector<mpz_class>& moduli, CoprimeWitness* witness) {
  for (size_t i = 0; i < moduli.size(); ++i) {
    for (size_t j = i + 1; j < moduli.size(); ++j) {
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), moduli[i].get_mpz_t(), moduli[j].get_mpz_t());
      if (g != 1) {
        if (witness) {
          witness->i = i;
          witness->j = j;
          witness->gcd = g;
        }
        return false;
      }
    }
  }
  return true;
}

CompositeStructure factor_semiprime(const mpz_class& n, std::chrono::milliseconds budget) {
  if (n < 2) throw InvalidModulus("factor_semiprime requires n >= 2");
  CompositeStructure cs;
  cs.n = n;
  cs.factors = intfactor::factor(n, budget);
  cs.is_semiprime =
      cs.factors.size() == 2 && cs.factors[0].e == 1 && cs.factors[1].e == 1;
  return cs;
}

MersenneScan scan_mersenne(uint32_t t_min, uint32_t t_max, std::chrono::milliseconds budget_per_t) {
  MersenneScan scan;
  for (uint32_t t = std::max(2u, t_min); t <= t_max; ++t) {
    if (!intfactor::is_prime_u64(t)) continue;
    mpz_class m = 1;
    m <<= t;
    m -= 1;
    if (intfactor::is_prime(m)) {
      scan.skipped.push_back({t, "prime"});
      continue;
    }
    CompositeStructure cs;
    try {
      cs = factor_semiprime(m, budget_per_t);
    } catch (const FactorBudgetExceeded&) {
      scan.skipped.push_back({t, "factor budget exceeded"});
      continue;
    }
    if (!cs.is_semiprime) {
      bool repeated = false;
      for (const auto& pp : cs.factors) repeated = repeated || pp.e > 1;
      scan.skipped.push_back({t, repeated ? "repeated factor" : "more than two prime factors"});
      continue;
    }
    MersenneRow row;
    row.t = t;
    row.m = m;
    row.p = cs.factors[0].p;
    row.q = cs.factors[1].p;
    row.p_primality = cs.factors[0].primality;
    row.q_primality = cs.factors[1].primality;
    scan.rows.push_back(std::move(row));
  }
  return scan;
}

}  // namespace ldcforge::modulus
