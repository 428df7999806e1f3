#include "ldcforge/compose.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "ldcforge/modulus.hpp"

namespace ldcforge::compose {

namespace {

constexpr uint32_t kMaxPlanR = 1u << 20;

/// Rebuilds p against a replacement root of the same order inside the
/// composite field. Three-monomial inputs get a fresh collision witness:
/// witness validity depends on which order-m root the ratios are taken
/// against, so the stored (alpha, c, beta, d) cannot be reused verbatim.
decpoly::DecodingPolynomial rebuild(const decpoly::DecodingPolynomial& p,
                                    const modulus::ModulusProfile& prof,
                                    const algebra::FieldPtr& field,
                                    const algebra::FieldElement& gamma,
                                    const decpoly::SearchOptions& opts) {
  if (p.source == "lagrange") return decpoly::lagrange_polynomial(prof, field, gamma);
  if (p.source == "three-monomial") {
    decpoly::M2Certificate cert = decpoly::collision_search(prof, field, gamma, opts);
    if (cert.verdict != decpoly::Verdict::member || !cert.poly) {
      throw CompositionInvalid("three-monomial input over m=" + std::to_string(p.m) +
                               " has no collision witness against the composite root");
    }
    return *cert.poly;
  }
  throw RepresentationUnsupported("cannot rebuild a polynomial of source '" + p.source +
                                  "' against a new root; expected 'lagrange' or 'three-monomial'");
}

}  // namespace

CompositionPlan plan_composition(uint64_t m1, uint64_t m2, const decpoly::SearchOptions& opts) {
  uint64_t g = std::gcd(m1, m2);
  if (g != 1) {
    throw CrtConflict("moduli " + std::to_string(m1) + " and " + std::to_string(m2) +
                      " share the factor gcd=" + std::to_string(g));
  }
  if (m2 != 0 && m1 > UINT64_MAX / m2) {
    throw BudgetExceeded("composite modulus " + std::to_string(m1) + "*" + std::to_string(m2) +
                         " exceeds 64 bits");
  }

  CompositionPlan plan;
  plan.m1 = m1;
  plan.m2 = m2;
  plan.m = m1 * m2;
  plan.t1 = modulus::profile(m1).t;
  plan.t2 = modulus::profile(m2).t;
  plan.t = modulus::profile(plan.m).t;
  plan.field = algebra::field_create(plan.t);
  plan.gamma = algebra::primitive_root(plan.field, mpz_class(plan.m), opts.root_budget);
  plan.gamma1 = algebra::fe_pow(plan.gamma, mpz_class(m2));
  plan.gamma2 = algebra::fe_pow(plan.gamma, mpz_class(m1));
  return plan;
}

decpoly::DecodingPolynomial compose(const decpoly::DecodingPolynomial& p1,
                                    const decpoly::DecodingPolynomial& p2,
                                    const decpoly::SearchOptions& opts) {
  auto known = [](const std::string& s) { return s == "lagrange" || s == "three-monomial"; };
  if (!known(p1.source) || !known(p2.source)) {
    const decpoly::DecodingPolynomial& bad = known(p1.source) ? p2 : p1;
    throw RepresentationUnsupported("polynomial over m=" + std::to_string(bad.m) + " has source '" +
                                    bad.source + "'; composition rebuilds only 'lagrange' and "
                                    "'three-monomial' inputs");
  }
  if (!decpoly::verify_decoding_polynomial(p1)) {
    throw CompositionInvalid("left input over m=" + std::to_string(p1.m) +
                             " fails decoding-polynomial verification");
  }
  if (!decpoly::verify_decoding_polynomial(p2)) {
    throw CompositionInvalid("right input over m=" + std::to_string(p2.m) +
                             " fails decoding-polynomial verification");
  }

  CompositionPlan plan = plan_composition(p1.m, p2.m, opts);
  modulus::ModulusProfile prof1 = modulus::profile(plan.m1);
  modulus::ModulusProfile prof2 = modulus::profile(plan.m2);
  decpoly::DecodingPolynomial q1 = rebuild(p1, prof1, plan.field, plan.gamma1, opts);
  decpoly::DecodingPolynomial q2 = rebuild(p2, prof2, plan.field, plan.gamma2, opts);

  // q1(X^m2) * q2(X^m1), exponents mod m; X evaluates only at order-m
  // elements, so reduction mod m is exact. GF(2) addition cancels pairs.
  std::map<uint64_t, algebra::FieldElement> acc;
  for (const decpoly::Term& a : q1.terms) {
    for (const decpoly::Term& b : q2.terms) {
      unsigned __int128 wide = static_cast<unsigned __int128>(a.exp) * plan.m2 +
                               static_cast<unsigned __int128>(b.exp) * plan.m1;
      uint64_t e = static_cast<uint64_t>(wide % plan.m);
      algebra::FieldElement prod = algebra::fe_mul(a.coef, b.coef);
      auto it = acc.find(e);
      if (it == acc.end()) {
        acc.emplace(e, prod);
      } else {
        it->second = algebra::fe_add(it->second, prod);
      }
    }
  }

  decpoly::DecodingPolynomial out;
  out.m = plan.m;
  out.field = plan.field;
  out.gamma = plan.gamma;
  out.source = "composed";
  for (const auto& [e, coef] : acc) {
    if (!coef.is_zero()) out.terms.push_back({e, coef});
  }

  if (out.terms.size() > q1.terms.size() * q2.terms.size()) {
    throw InternalError("composed term count exceeds the product bound");
  }
  if (!decpoly::verify_decoding_polynomial(out)) {
    throw CompositionInvalid("composed polynomial over m=" + std::to_string(plan.m) +
                             " fails verification against the canonical set");
  }
  return out;
}

QueryPlan plan_queries(uint32_t r, const std::vector<uint64_t>& members,
                       bool with_three_prime_pool) {
  if (r < 2) {
    throw InventoryExhausted("query planning needs r >= 2 prime factors; got r=" +
                             std::to_string(r));
  }
  if (r > kMaxPlanR) {
    throw BudgetExceeded("r=" + std::to_string(r) + " exceeds the planner cap " +
                         std::to_string(kMaxPlanR));
  }
  for (uint64_t m : members) {
    if (m < 3 || m % 2 == 0) {
      throw AuxInvalid("inventory modulus " + std::to_string(m) + " is not an odd modulus >= 3");
    }
  }

  // Ascending greedy selection keeps the list pairwise coprime; each kept
  // member covers exactly 2 fresh primes.
  std::vector<uint64_t> sorted = members;
  std::sort(sorted.begin(), sorted.end());
  std::vector<uint64_t> usable;
  for (uint64_t m : sorted) {
    bool ok = true;
    for (uint64_t prev : usable) {
      if (std::gcd(prev, m) != 1) {
        ok = false;
        break;
      }
    }
    if (ok) usable.push_back(m);
  }

  QueryPlan plan;
  plan.r = r;
  plan.k_bound = 1;
  auto add_members = [&](uint32_t count) {
    for (uint32_t i = 0; i < count; ++i) {
      plan.recipe.push_back({"member", usable[i], 2, mpz_class(3)});
      plan.k_bound *= 3;
    }
  };

  if (r % 2 == 0 && usable.size() >= r / 2) {
    add_members(r / 2);
  } else if (r % 2 == 1 && with_three_prime_pool && usable.size() >= (r - 3) / 2) {
    add_members((r - 3) / 2);
    plan.recipe.push_back({"three-prime", 0, 3, mpz_class(8)});
    plan.k_bound *= 8;
  } else {
    uint32_t c = std::min<uint64_t>(usable.size(), r / 2);
    add_members(c);
    uint32_t rest = r - 2 * c;
    mpz_class q;
    mpz_mul_2exp(q.get_mpz_t(), mpz_class(1).get_mpz_t(), rest);
    plan.recipe.push_back({"generic", 0, rest, q});
    plan.k_bound *= q;
  }
  return plan;
}

}  // namespace ldcforge::compose
