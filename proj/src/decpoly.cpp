#include "ldcforge/decpoly.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <tuple>

#include "ldcforge/intfactor.hpp"
#include "ldcforge/util.hpp"

namespace ldcforge::decpoly {

namespace a = algebra;

namespace {

constexpr uint64_t kScaleCap = (uint64_t(1) << 37) - 1;
constexpr uint64_t kBruteCap = 100000;
constexpr uint64_t kMemoryCapBytes = uint64_t(8) << 30;

uint64_t mulmod(uint64_t x, uint64_t y, uint64_t m) { return intfactor::mulmod_u64(x, y, m); }

uint64_t pow2_mod(uint32_t c, uint64_t m) {
  uint64_t r = 1 % m;
  for (uint32_t i = 0; i < c; ++i) {
    r <<= 1;
    if (r >= m) r -= m;
  }
  return r;
}

void require_two_primes(const modulus::ModulusProfile& prof, const char* op) {
  if (prof.primes.size() != 2)
    throw InvalidModulus(std::string(op) + " requires a modulus with exactly two prime factors");
}

// True when alpha is the minimum of its multiply-by-2 coset. For a unit
// alpha the coset has exactly t elements.
bool is_coset_min(uint64_t alpha, uint64_t m) {
  uint64_t x = alpha << 1;
  if (x >= m) x -= m;
  while (x != alpha) {
    if (x < alpha) return false;
    x <<= 1;
    if (x >= m) x -= m;
  }
  return true;
}

// Minimum of u's coset and the shift c with min * 2^c = u mod m.
std::pair<uint64_t, uint32_t> coset_min_of(uint64_t u, uint64_t m, uint32_t t) {
  uint64_t best = u, x = u;
  uint32_t j_best = 0;
  for (uint32_t j = 1; j < t; ++j) {
    x <<= 1;
    if (x >= m) x -= m;
    if (x == u) break;
    if (x < best) {
      best = x;
      j_best = j;
    }
  }
  return {best, j_best == 0 ? 0 : t - j_best};
}

struct RepEntry {
  uint64_t rep = 0;
  uint32_t c_min = 0;
  uint32_t period = 0;
};

struct ShardResult {
  std::vector<uint64_t> keys;  // kw words per entry
  std::vector<RepEntry> meta;
  uint64_t reps = 0;
  bool timed_out = false;
};

// Computes R = A/B for a block of reps with one field inversion
// (Montgomery batch trick), then canonicalizes each Frobenius orbit.
void flush_block(const a::FieldSpec& f, const std::vector<uint64_t>& reps,
                 std::vector<uint64_t>& As, std::vector<uint64_t>& Bs, ShardResult& out) {
  const size_t nw = f.words();
  const size_t n = reps.size();
  if (n == 0) return;
  std::vector<uint64_t> prefix(n * nw), tmp(nw), acc(nw), invp(nw), r(nw);
  std::vector<uint64_t> wide(2 * nw + 1);
  // prefix[i] = B_0 * ... * B_i
  std::copy(Bs.begin(), Bs.begin() + nw, prefix.begin());
  for (size_t i = 1; i < n; ++i)
    a::gf::mul(f, &prefix[i * nw], &prefix[(i - 1) * nw], &Bs[i * nw]);
  a::gf::inv(f, invp.data(), &prefix[(n - 1) * nw]);
  for (size_t i = n; i-- > 0;) {
    uint64_t* binv = tmp.data();
    if (i == 0) {
      std::copy(invp.begin(), invp.end(), binv);
    } else {
      a::gf::mul(f, binv, invp.data(), &prefix[(i - 1) * nw]);
      // peel B_i off the running inverse
      a::gf::mul(f, acc.data(), invp.data(), &Bs[i * nw]);
      std::copy(acc.begin(), acc.end(), invp.begin());
    }
    a::gf::mul(f, r.data(), &As[i * nw], binv);
    // Canonical orbit key: minimum bit string among R^(2^j), with its
    // shift and the orbit period.
    std::vector<uint64_t> cur(r), best(r);
    uint32_t c_best = 0, period = f.t;
    for (uint32_t j = 1; j < f.t; ++j) {
      a::gf::sqr(f, cur.data(), wide.data());
      if (a::gf::equal(f, cur.data(), r.data())) {
        period = j;
        break;
      }
      if (a::gf::cmp(f, cur.data(), best.data()) < 0) {
        best = cur;
        c_best = j;
      }
    }
    out.keys.insert(out.keys.end(), best.begin(), best.end());
    out.meta.push_back({reps[i], c_best, period});
  }
  out.reps += n;
}

struct Candidate {
  uint64_t alpha = 0, beta = 0;
  uint32_t c = 0, d = 0;
  bool valid = false;

  bool operator<(const Candidate& o) const {
    return std::tie(alpha, beta, c, d) < std::tie(o.alpha, o.beta, o.c, o.d);
  }
};

M2Certificate finish_member(const modulus::ModulusProfile& prof, const a::FieldPtr& field,
                            const a::FieldElement& gamma, const Candidate& cand,
                            uint64_t admissible_reps, const std::string& note) {
  // Direct field re-verification of the collision.
  const a::FieldElement ra = coset_ratio(prof, gamma, cand.alpha);
  const a::FieldElement rb = coset_ratio(prof, gamma, cand.beta);
  if (!(frobenius(ra, cand.c) == frobenius(rb, cand.d)))
    throw InternalError("reported collision failed direct field comparison");
  M2Certificate cert;
  cert.m = prof.m;
  cert.verdict = Verdict::member;
  cert.field = field;
  cert.gamma = gamma;
  cert.alpha = cand.alpha;
  cert.beta = cand.beta;
  cert.c = cand.c;
  cert.d = cand.d;
  cert.u = mulmod(cand.alpha, pow2_mod(cand.c, prof.m), prof.m);
  cert.v = mulmod(cand.beta, pow2_mod(cand.d, prof.m), prof.m);
  cert.poly = build_three_monomial(prof, field, gamma, cand.alpha, cand.c, cand.beta, cand.d);
  // Recover a and b from the normalized terms: X^u carries 1/(1+a+b).
  a::FieldElement cu, cv, c0;
  for (const auto& term : cert.poly->terms) {
    if (term.exp == 0)
      c0 = term.coef;
    else if (term.exp == cert.u)
      cu = term.coef;
    else
      cv = term.coef;
  }
  const a::FieldElement cu_inv = fe_inv(cu);
  cert.a = fe_mul(cv, cu_inv);
  cert.b = fe_mul(c0, cu_inv);
  cert.admissible_reps = admissible_reps;
  cert.note = note;
  if (!verify_decoding_polynomial(*cert.poly))
    throw InternalError("three-monomial polynomial failed verification after construction");
  return cert;
}

}  // namespace

std::pair<uint64_t, uint64_t> mixed_residues(const modulus::ModulusProfile& prof) {
  require_two_primes(prof, "mixed_residues");
  const uint64_t p = prof.primes[0], q = prof.primes[1];
  const uint64_t s01 = modulus::crt_u64({0, 1}, {p, q});
  const uint64_t s10 = modulus::crt_u64({1, 0}, {p, q});
  return {s01, s10};
}

algebra::FieldElement coset_ratio(const modulus::ModulusProfile& prof,
                                  const algebra::FieldElement& gamma, uint64_t alpha) {
  require_two_primes(prof, "coset_ratio");
  alpha %= prof.m;
  for (uint64_t p : prof.primes) {
    if (alpha % p == 0)
      throw ForbiddenCoset("coset of " + std::to_string(alpha) + " contains multiples of " +
                           std::to_string(p));
  }
  const auto [s01, s10] = mixed_residues(prof);
  const a::FieldElement g1 = fe_pow(gamma, int64_t(alpha));
  const a::FieldElement gs01 = fe_pow(gamma, int64_t(mulmod(alpha, s01, prof.m)));
  const a::FieldElement gs10 = fe_pow(gamma, int64_t(mulmod(alpha, s10, prof.m)));
  const a::FieldElement num = g1 + gs01;
  const a::FieldElement den = g1 + gs10;
  if (den.is_zero()) throw InternalError("coset ratio denominator vanished on admissible input");
  return fe_mul(num, fe_inv(den));
}

DecodingPolynomial build_three_monomial(const modulus::ModulusProfile& prof,
                                        const algebra::FieldPtr& field,
                                        const algebra::FieldElement& gamma,
                                        uint64_t alpha, uint32_t c, uint64_t beta, uint32_t d) {
  require_two_primes(prof, "build_three_monomial");
  const uint64_t m = prof.m;
  const auto [s01, s10] = mixed_residues(prof);
  const uint64_t u = mulmod(alpha % m, pow2_mod(c, m), m);
  const uint64_t v = mulmod(beta % m, pow2_mod(d, m), m);
  if (u == v) throw CertificateInconsistent("witness exponents coincide");
  for (uint64_t p : prof.primes) {
    if (u % p == 0 || v % p == 0)
      throw CertificateInconsistent("witness exponent lies in a forbidden coset");
  }
  const a::FieldElement gu = fe_pow(gamma, int64_t(u));
  const a::FieldElement gv = fe_pow(gamma, int64_t(v));
  const a::FieldElement gu01 = fe_pow(gamma, int64_t(mulmod(u, s01, m)));
  const a::FieldElement gu10 = fe_pow(gamma, int64_t(mulmod(u, s10, m)));
  const a::FieldElement gv01 = fe_pow(gamma, int64_t(mulmod(v, s01, m)));
  const a::FieldElement gv10 = fe_pow(gamma, int64_t(mulmod(v, s10, m)));
  const a::FieldElement nu = gu01 + gu10;
  const a::FieldElement nv = gv01 + gv10;
  if (nu.is_zero() || nv.is_zero())
    throw CertificateInconsistent("row difference vanished for a unit exponent");
  const a::FieldElement coef_a = fe_mul(nu, fe_inv(nv));
  const a::FieldElement coef_b = gu01 + fe_mul(coef_a, gv01);
  // Third row: the s11 = 1 equation must be implied by the first two.
  if (!(gu + fe_mul(coef_a, gv) + coef_b).is_zero())
    throw CertificateInconsistent("third row check failed; witness is not a collision");
  if (coef_a.is_zero()) throw CertificateInconsistent("coefficient a vanished");
  if (coef_b.is_zero()) throw CertificateInconsistent("coefficient b vanished");
  const a::FieldElement denom = fe_one(field) + coef_a + coef_b;
  if (denom.is_zero()) throw CertificateInconsistent("normalization denominator 1 + a + b vanished");
  const a::FieldElement dinv = fe_inv(denom);

  DecodingPolynomial poly;
  poly.m = m;
  poly.field = field;
  poly.gamma = gamma;
  poly.source = "three-monomial";
  const a::FieldElement cu = dinv;                  // coefficient of X^u
  const a::FieldElement cv = fe_mul(coef_a, dinv);  // coefficient of X^v
  poly.terms.push_back({0, fe_mul(coef_b, dinv)});
  if (u < v) {
    poly.terms.push_back({u, cu});
    poly.terms.push_back({v, cv});
  } else {
    poly.terms.push_back({v, cv});
    poly.terms.push_back({u, cu});
  }
  return poly;
}

DecodingPolynomial build_three_monomial(const M2Certificate& cert) {
  if (cert.verdict != Verdict::member)
    throw CertificateInconsistent("three-monomial construction requires a member certificate");
  const auto prof = modulus::profile(cert.m);
  return build_three_monomial(prof, cert.field, cert.gamma, cert.alpha, cert.c, cert.beta, cert.d);
}

DecodingPolynomial lagrange_polynomial(const modulus::ModulusProfile& prof,
                                       const algebra::FieldPtr& field,
                                       const algebra::FieldElement& gamma) {
  const size_t n = prof.canonical.size();
  // Expand N(X) = prod (X + gamma^s) over the canonical set.
  std::vector<a::FieldElement> coef;
  coef.push_back(fe_one(field));
  for (uint64_t s : prof.canonical) {
    const a::FieldElement node = fe_pow(gamma, int64_t(s));
    std::vector<a::FieldElement> next(coef.size() + 1, fe_zero(field));
    for (size_t i = 0; i < coef.size(); ++i) {
      next[i + 1] = next[i + 1] + coef[i];
      next[i] = next[i] + fe_mul(coef[i], node);
    }
    coef = std::move(next);
  }
  // Normalize by N(1): in characteristic 2 that is the XOR of all
  // coefficients.
  a::FieldElement denom = fe_zero(field);
  for (const auto& c : coef) denom = denom + c;
  if (denom.is_zero()) throw InternalError("interpolation denominator vanished");
  const a::FieldElement dinv = fe_inv(denom);
  DecodingPolynomial poly;
  poly.m = prof.m;
  poly.field = field;
  poly.gamma = gamma;
  poly.source = "lagrange";
  for (size_t i = 0; i <= n; ++i) {
    const a::FieldElement c = fe_mul(coef[i], dinv);
    if (!c.is_zero()) poly.terms.push_back({i, c});
  }
  return poly;
}

DecodingPolynomial lagrange_polynomial(uint64_t m) {
  const auto prof = modulus::profile(m);
  const auto field = a::field_create(prof.t);
  const auto gamma = a::primitive_root(field, mpz_class(static_cast<unsigned long>(m)));
  return lagrange_polynomial(prof, field, gamma);
}

bool verify_decoding_polynomial(const DecodingPolynomial& p) {
  if (!p.field || p.terms.empty() || p.m < 3) return false;
  const auto prof = modulus::profile(p.m);
  std::vector<mpz_class> primes;
  for (uint64_t q : prof.primes) primes.emplace_back(static_cast<unsigned long>(q));
  if (!a::has_order(p.gamma, mpz_class(static_cast<unsigned long>(p.m)), primes)) return false;
  uint64_t prev_exp = 0;
  a::FieldElement at_one = fe_zero(p.field);
  for (size_t i = 0; i < p.terms.size(); ++i) {
    const auto& term = p.terms[i];
    if (term.exp >= p.m) return false;
    if (i > 0 && term.exp <= prev_exp) return false;
    prev_exp = term.exp;
    if (term.coef.is_zero()) return false;
    at_one = at_one + term.coef;
  }
  if (!at_one.is_one()) return false;
  for (uint64_t s : prof.canonical) {
    a::FieldElement acc = fe_zero(p.field);
    for (const auto& term : p.terms) {
      const uint64_t e = mulmod(term.exp, s, p.m);
      acc = acc + fe_mul(term.coef, fe_pow(p.gamma, int64_t(e)));
    }
    if (!acc.is_zero()) return false;
  }
  return true;
}

M2Certificate collision_search(const modulus::ModulusProfile& prof, const algebra::FieldPtr& field,
                               const algebra::FieldElement& gamma, const SearchOptions& opts) {
  require_two_primes(prof, "collision_search");
  const uint64_t m = prof.m;
  if (m > kScaleCap)
    throw BudgetExceeded("modulus exceeds the 2^37 - 1 collision search cap");
  const size_t kw = field->words();
  {
    // Entry storage estimate against the memory cap.
    const uint64_t est_entries = m / prof.t + 1;
    const uint64_t est_bytes = est_entries * (8 * kw + sizeof(RepEntry) + 8);
    if (est_bytes > kMemoryCapBytes)
      throw BudgetExceeded("estimated collision table exceeds the memory cap");
  }
  const auto [s01, s10] = mixed_residues(prof);
  const uint64_t p = prof.primes[0], q = prof.primes[1];
  const uint32_t t = prof.t;
  std::optional<util::Deadline> deadline;
  if (opts.budget.count() > 0) deadline.emplace(opts.budget);

  unsigned shards = opts.shards ? opts.shards : util::worker_count();
  if (shards < 1) shards = 1;
  std::vector<ShardResult> results(shards);
  const uint64_t chunk = (m - 1) / shards + 1;
  std::atomic<bool> stop{false};

  auto run_shard = [&](unsigned si) {
    ShardResult& out = results[si];
    const uint64_t lo = 1 + si * chunk;
    const uint64_t hi = std::min<uint64_t>(m, lo + chunk);
    constexpr size_t kBlock = 1024;
    std::vector<uint64_t> reps;
    std::vector<uint64_t> As, Bs;
    std::vector<uint64_t> pw(kw);
    reps.reserve(kBlock);
    As.reserve(kBlock * kw);
    Bs.reserve(kBlock * kw);
    const uint64_t* gw = gamma.words().data();
    uint64_t since_check = 0;
    for (uint64_t alpha = lo; alpha < hi; ++alpha) {
      if (++since_check >= 8192) {
        since_check = 0;
        if (stop.load(std::memory_order_relaxed)) break;
        if (deadline && deadline->expired()) {
          out.timed_out = true;
          stop.store(true, std::memory_order_relaxed);
          break;
        }
      }
      if (alpha % p == 0 || alpha % q == 0) continue;
      if (!is_coset_min(alpha, m)) continue;
      // A = gamma^alpha + gamma^(alpha*s01), B = gamma^alpha + gamma^(alpha*s10)
      std::vector<uint64_t> g1(kw), g01(kw), g10(kw);
      a::gf::pow_u64(*field, g1.data(), gw, alpha);
      a::gf::pow_u64(*field, g01.data(), gw, mulmod(alpha, s01, m));
      a::gf::pow_u64(*field, g10.data(), gw, mulmod(alpha, s10, m));
      reps.push_back(alpha);
      for (size_t w = 0; w < kw; ++w) {
        As.push_back(g1[w] ^ g01[w]);
        Bs.push_back(g1[w] ^ g10[w]);
      }
      if (reps.size() >= kBlock) {
        flush_block(*field, reps, As, Bs, out);
        reps.clear();
        As.clear();
        Bs.clear();
      }
    }
    flush_block(*field, reps, As, Bs, out);
  };

  if (shards == 1) {
    run_shard(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned si = 0; si < shards; ++si) threads.emplace_back(run_shard, si);
    for (auto& th : threads) th.join();
  }

  // Merge shard outputs.
  uint64_t total = 0;
  bool timed_out = false;
  for (const auto& r : results) {
    total += r.meta.size();
    timed_out = timed_out || r.timed_out;
  }
  std::vector<uint64_t> keys;
  std::vector<RepEntry> meta;
  keys.reserve(total * kw);
  meta.reserve(total);
  for (auto& r : results) {
    keys.insert(keys.end(), r.keys.begin(), r.keys.end());
    meta.insert(meta.end(), r.meta.begin(), r.meta.end());
    r.keys.clear();
    r.keys.shrink_to_fit();
    r.meta.clear();
    r.meta.shrink_to_fit();
  }

  std::vector<uint32_t> perm(meta.size());
  for (uint32_t i = 0; i < perm.size(); ++i) perm[i] = i;
  auto key_cmp = [&](uint32_t x, uint32_t y) {
    const uint64_t* kx = &keys[size_t(x) * kw];
    const uint64_t* ky = &keys[size_t(y) * kw];
    for (size_t w = kw; w-- > 0;) {
      if (kx[w] != ky[w]) return kx[w] < ky[w];
    }
    return meta[x].rep < meta[y].rep;
  };
  std::sort(perm.begin(), perm.end(), key_cmp);
  auto keys_equal = [&](uint32_t x, uint32_t y) {
    const uint64_t* kx = &keys[size_t(x) * kw];
    const uint64_t* ky = &keys[size_t(y) * kw];
    for (size_t w = 0; w < kw; ++w)
      if (kx[w] != ky[w]) return false;
    return true;
  };

  Candidate best;
  auto consider = [&](const Candidate& c) {
    if (!best.valid || c < best) {
      best = c;
      best.valid = true;
    }
  };
  // Degenerate orbits: the ratio's Frobenius period is shorter than the
  // coset, so a coset collides with itself.
  for (const auto& e : meta) {
    if (e.period < t) consider({e.rep, e.rep, 0, e.period, true});
  }
  // Cross-coset collisions within each equal-key run.
  for (size_t i = 0; i < perm.size();) {
    size_t j = i + 1;
    while (j < perm.size() && keys_equal(perm[i], perm[j])) ++j;
    if (j - i >= 2) {
      const RepEntry& e1 = meta[perm[i]];
      const RepEntry& e2 = meta[perm[i + 1]];
      if (e1.period != e2.period)
        throw InternalError("matched orbits disagree on period");
      const uint32_t d = (e2.c_min + e1.period - e1.c_min) % e1.period;
      consider({e1.rep, e2.rep, 0, d, true});
    }
    i = j;
  }

  if (best.valid) {
    std::string note = timed_out ? "budget hit; witness may not be minimal" : "";
    return finish_member(prof, field, gamma, best, total, note);
  }
  M2Certificate cert;
  cert.m = m;
  cert.field = field;
  cert.gamma = gamma;
  cert.admissible_reps = total;
  if (timed_out) {
    cert.verdict = Verdict::unknown;
    cert.note = "search budget exhausted before full coverage";
  } else {
    cert.verdict = Verdict::non_member;
    cert.note = "exhaustive over all admissible coset representatives";
  }
  return cert;
}

M2Certificate collision_search(uint64_t m, const SearchOptions& opts) {
  // Reject on scale before profiling; ord_m(2) can be astronomically large.
  if (m > kScaleCap)
    throw BudgetExceeded("modulus exceeds the 2^37 - 1 collision search cap");
  const auto prof = modulus::profile(m);
  const auto field = a::field_create(prof.t);
  const auto gamma =
      a::primitive_root(field, mpz_class(static_cast<unsigned long>(m)), opts.root_budget);
  return collision_search(prof, field, gamma, opts);
}

M2Certificate brute_force_m2(uint64_t m, const SearchOptions& opts) {
  if (m > kBruteCap) throw BudgetExceeded("brute force capped at m <= 100000");
  const auto prof = modulus::profile(m);
  require_two_primes(prof, "brute_force_m2");
  const auto field = a::field_create(prof.t);
  const auto gamma =
      a::primitive_root(field, mpz_class(static_cast<unsigned long>(m)), opts.root_budget);
  const auto [s01, s10] = mixed_residues(prof);
  const uint64_t p = prof.primes[0], q = prof.primes[1];
  const size_t kw = field->words();

  std::optional<util::Deadline> deadline;
  if (opts.budget.count() > 0) deadline.emplace(opts.budget);
  auto out_of_time = [&](uint64_t step) {
    return deadline && (step & 4095) == 0 && deadline->expired();
  };
  auto unknown_cert = [&]() {
    M2Certificate cert;
    cert.m = m;
    cert.field = field;
    cert.gamma = gamma;
    cert.verdict = Verdict::unknown;
    cert.note = "search budget exhausted before full coverage";
    return cert;
  };

  // Ratios R_u for all admissible u, with one batch inversion. A full
  // power table costs m multiplications; when it would not fit, gamma^u,
  // gamma^(u*s01), gamma^(u*s10) advance by one multiplication each per
  // step instead.
  std::vector<uint64_t> us;
  std::vector<uint64_t> As, Bs;
  const bool use_table = m * kw * 8 <= (uint64_t(512) << 20);
  if (use_table) {
    std::vector<uint64_t> table(m * kw, 0);
    a::gf::set_one(*field, &table[0]);
    for (uint64_t e = 1; e < m; ++e)
      a::gf::mul(*field, &table[e * kw], &table[(e - 1) * kw], gamma.words().data());
    for (uint64_t u = 1; u < m; ++u) {
      if (out_of_time(u)) return unknown_cert();
      if (u % p == 0 || u % q == 0) continue;
      const uint64_t* g1 = &table[u * kw];
      const uint64_t* g01 = &table[mulmod(u, s01, m) * kw];
      const uint64_t* g10 = &table[mulmod(u, s10, m) * kw];
      us.push_back(u);
      for (size_t w = 0; w < kw; ++w) {
        As.push_back(g1[w] ^ g01[w]);
        Bs.push_back(g1[w] ^ g10[w]);
      }
    }
  } else {
    std::vector<uint64_t> g1(kw), g01(kw), g10(kw), st01(kw), st10(kw), tmp(kw);
    const uint64_t* gw = gamma.words().data();
    std::copy(gw, gw + kw, g1.begin());
    a::gf::pow_u64(*field, st01.data(), gw, s01);
    a::gf::pow_u64(*field, st10.data(), gw, s10);
    std::copy(st01.begin(), st01.end(), g01.begin());
    std::copy(st10.begin(), st10.end(), g10.begin());
    for (uint64_t u = 1; u < m; ++u) {
      if (out_of_time(u)) return unknown_cert();
      if (u % p != 0 && u % q != 0) {
        us.push_back(u);
        for (size_t w = 0; w < kw; ++w) {
          As.push_back(g1[w] ^ g01[w]);
          Bs.push_back(g1[w] ^ g10[w]);
        }
      }
      a::gf::mul(*field, tmp.data(), g1.data(), gw);
      std::swap(tmp, g1);
      a::gf::mul(*field, tmp.data(), g01.data(), st01.data());
      std::swap(tmp, g01);
      a::gf::mul(*field, tmp.data(), g10.data(), st10.data());
      std::swap(tmp, g10);
    }
  }
  const size_t n = us.size();
  std::vector<uint64_t> ratios(n * kw);
  {
    std::vector<uint64_t> prefix(n * kw), invp(kw), tmp(kw), acc(kw);
    std::copy(Bs.begin(), Bs.begin() + kw, prefix.begin());
    for (size_t i = 1; i < n; ++i)
      a::gf::mul(*field, &prefix[i * kw], &prefix[(i - 1) * kw], &Bs[i * kw]);
    a::gf::inv(*field, invp.data(), &prefix[(n - 1) * kw]);
    for (size_t i = n; i-- > 0;) {
      if (i == 0) {
        std::copy(invp.begin(), invp.end(), tmp.begin());
      } else {
        a::gf::mul(*field, tmp.data(), invp.data(), &prefix[(i - 1) * kw]);
        a::gf::mul(*field, acc.data(), invp.data(), &Bs[i * kw]);
        std::copy(acc.begin(), acc.end(), invp.begin());
      }
      a::gf::mul(*field, &ratios[i * kw], &As[i * kw], tmp.data());
    }
  }

  // Group by ratio; members are exactly the equal-ratio admissible pairs.
  std::vector<uint32_t> perm(n);
  for (uint32_t i = 0; i < n; ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(), [&](uint32_t x, uint32_t y) {
    const uint64_t* rx = &ratios[size_t(x) * kw];
    const uint64_t* ry = &ratios[size_t(y) * kw];
    for (size_t w = kw; w-- > 0;)
      if (rx[w] != ry[w]) return rx[w] < ry[w];
    return us[x] < us[y];
  });
  auto ratio_equal = [&](uint32_t x, uint32_t y) {
    const uint64_t* rx = &ratios[size_t(x) * kw];
    const uint64_t* ry = &ratios[size_t(y) * kw];
    for (size_t w = 0; w < kw; ++w)
      if (rx[w] != ry[w]) return false;
    return true;
  };
  uint64_t best_u = 0, best_v = 0;
  bool found = false;
  for (size_t i = 0; i < n;) {
    size_t j = i + 1;
    while (j < n && ratio_equal(perm[i], perm[j])) ++j;
    if (j - i >= 2) {
      const uint64_t u = us[perm[i]], v = us[perm[i + 1]];
      if (!found || std::make_pair(u, v) < std::make_pair(best_u, best_v)) {
        best_u = u;
        best_v = v;
        found = true;
      }
    }
    i = j;
  }

  M2Certificate cert;
  cert.m = m;
  cert.field = field;
  cert.gamma = gamma;
  cert.admissible_reps = n;
  if (!found) {
    cert.verdict = Verdict::non_member;
    cert.note = "exhaustive over all admissible exponent pairs";
    return cert;
  }
  auto [au, cu] = coset_min_of(best_u, m, prof.t);
  auto [av, cv] = coset_min_of(best_v, m, prof.t);
  uint64_t u = best_u, v = best_v;
  if (std::make_pair(av, cv) < std::make_pair(au, cu)) {
    std::swap(u, v);
    std::swap(au, av);
    std::swap(cu, cv);
  }
  Candidate cand{au, av, cu, cv, true};
  return finish_member(prof, field, gamma, cand, n, "definition-level pair scan");
}

}  // namespace ldcforge::decpoly
