#include "ldcforge/algebra.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <mutex>

#include "ldcforge/intfactor.hpp"
#include "ldcforge/util.hpp"

namespace ldcforge::algebra {

namespace {

constexpr size_t kW = 64;

size_t modulus_words(uint32_t t) { return (static_cast<size_t>(t) + kW) / kW; }

// Degree of a nonzero bit vector, or -1 for zero.
int64_t poly_degree(const uint64_t* w, size_t n) {
  for (size_t i = n; i-- > 0;) {
    if (w[i]) return static_cast<int64_t>(i * kW + (kW - 1 - std::countl_zero(w[i])));
  }
  return -1;
}

// Byte b -> 16-bit word with b's bits spread to even positions.
const std::array<uint16_t, 256>& spread_table() {
  static const std::array<uint16_t, 256> table = [] {
    std::array<uint16_t, 256> t{};
    for (unsigned b = 0; b < 256; ++b) {
      uint16_t v = 0;
      for (unsigned i = 0; i < 8; ++i)
        if (b & (1u << i)) v |= static_cast<uint16_t>(1u << (2 * i));
      t[b] = v;
    }
    return t;
  }();
  return table;
}

// XORs poly (mw words) shifted left by sh bits into acc. acc must have
// room for the shifted image plus one spill word.
void xor_shifted(uint64_t* acc, const uint64_t* poly, size_t mw, size_t sh) {
  const size_t wo = sh / kW;
  const unsigned bo = sh % kW;
  if (bo == 0) {
    for (size_t k = 0; k < mw; ++k) acc[wo + k] ^= poly[k];
  } else {
    for (size_t k = 0; k < mw; ++k) {
      acc[wo + k] ^= poly[k] << bo;
      acc[wo + k + 1] ^= poly[k] >> (kW - bo);
    }
  }
}

// Reduces a (2*words+1)-word buffer mod f.modulus in place; on return the
// low f.words() words hold the reduced value and all higher bits are zero.
void reduce_wide(const FieldSpec& f, uint64_t* wide) {
  const uint32_t t = f.t;
  const size_t mw = f.modulus.size();
  const size_t total = 2 * f.words() + 1;
  for (size_t wi = total; wi-- > 0;) {
    if ((wi + 1) * kW <= t) break;
    for (;;) {
      uint64_t w = wide[wi];
      if (wi * kW < t) {
        // Word straddles degree t: only bits >= t participate.
        w &= ~((uint64_t(1) << (t % kW)) - 1);
      }
      if (!w) break;
      const unsigned b = kW - 1 - std::countl_zero(w);
      const size_t pos = wi * kW + b;
      xor_shifted(wide, f.modulus.data(), mw, pos - t);
    }
  }
}

// Scratch buffers sized for one field; grown on demand. pow/inv use these,
// and neither re-enters itself or the other on the same thread.
struct Scratch {
  std::vector<uint64_t> acc, tmp, base, wide;
  void fit(const FieldSpec& f) {
    const size_t nw = f.words();
    if (acc.size() < nw) {
      acc.resize(nw);
      tmp.resize(nw);
      base.resize(nw);
    }
    if (wide.size() < 2 * nw + 1) wide.resize(2 * nw + 1);
  }
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

mpz_class group_order(uint32_t t) {
  mpz_class full = 1;
  full <<= t;
  return full - 1;
}

// Fills words with the bit pattern of v.
std::vector<uint64_t> words_from_u64(const FieldSpec& f, uint64_t v) {
  std::vector<uint64_t> w(f.words(), 0);
  w[0] = v;
  return w;
}

}  // namespace

namespace gf {

bool is_zero(const FieldSpec& f, const uint64_t* a) {
  for (size_t i = 0; i < f.words(); ++i)
    if (a[i]) return false;
  return true;
}

bool equal(const FieldSpec& f, const uint64_t* a, const uint64_t* b) {
  for (size_t i = 0; i < f.words(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

void set_zero(const FieldSpec& f, uint64_t* a) { std::fill(a, a + f.words(), 0); }

void set_one(const FieldSpec& f, uint64_t* a) {
  set_zero(f, a);
  a[0] = 1;
}

void add_into(const FieldSpec& f, uint64_t* acc, const uint64_t* x) {
  for (size_t i = 0; i < f.words(); ++i) acc[i] ^= x[i];
}

void mul(const FieldSpec& f, uint64_t* out, const uint64_t* a, const uint64_t* b) {
  const size_t nw = f.words();
  const uint32_t t = f.t;
  const uint64_t* mod = f.modulus.data();
  const size_t ti = (t - 1) / kW;
  const unsigned tb = (t - 1) % kW;
  std::fill(out, out + nw, 0);
  for (size_t i = t; i-- > 0;) {
    // If bit t-1 is about to shift into bit t, fold the modulus: its low
    // words clear that bit (it carries bit t itself when t % 64 != 0) and
    // add the reduction tail. When t % 64 == 0 the bit leaves the word on
    // its own.
    const uint64_t carry = (out[ti] >> tb) & 1;
    uint64_t c = 0;
    for (size_t w = 0; w < nw; ++w) {
      const uint64_t nx = (out[w] << 1) | c;
      c = out[w] >> (kW - 1);
      out[w] = nx;
    }
    if (carry) {
      for (size_t w = 0; w < nw; ++w) out[w] ^= mod[w];
    }
    if ((b[i / kW] >> (i % kW)) & 1) {
      for (size_t w = 0; w < nw; ++w) out[w] ^= a[w];
    }
  }
}

void sqr(const FieldSpec& f, uint64_t* a, uint64_t* wide) {
  const size_t nw = f.words();
  const auto& tab = spread_table();
  std::fill(wide, wide + 2 * nw + 1, 0);
  for (size_t w = 0; w < nw; ++w) {
    const uint64_t v = a[w];
    uint64_t lo = 0, hi = 0;
    for (unsigned byte = 0; byte < 4; ++byte)
      lo |= static_cast<uint64_t>(tab[(v >> (8 * byte)) & 0xff]) << (16 * byte);
    for (unsigned byte = 0; byte < 4; ++byte)
      hi |= static_cast<uint64_t>(tab[(v >> (32 + 8 * byte)) & 0xff]) << (16 * byte);
    wide[2 * w] = lo;
    wide[2 * w + 1] = hi;
  }
  reduce_wide(f, wide);
  std::copy(wide, wide + nw, a);
}

void pow_mpz(const FieldSpec& f, uint64_t* out, const uint64_t* base, const mpz_class& e) {
  const size_t nw = f.words();
  if (e == 0) {
    set_one(f, out);
    return;
  }
  if (is_zero(f, base)) {
    set_zero(f, out);
    return;
  }
  mpz_class er = e % group_order(f.t);
  if (er < 0) er += group_order(f.t);
  if (er == 0) {
    set_one(f, out);
    return;
  }
  auto& s = scratch();
  s.fit(f);
  std::copy(base, base + nw, s.base.data());
  std::copy(base, base + nw, s.acc.data());
  const size_t nbits = mpz_sizeinbase(er.get_mpz_t(), 2);
  for (size_t i = nbits - 1; i-- > 0;) {
    sqr(f, s.acc.data(), s.wide.data());
    if (mpz_tstbit(er.get_mpz_t(), i)) {
      mul(f, s.tmp.data(), s.acc.data(), s.base.data());
      std::swap(s.acc, s.tmp);
    }
  }
  std::copy(s.acc.data(), s.acc.data() + nw, out);
}

void pow_u64(const FieldSpec& f, uint64_t* out, const uint64_t* base, uint64_t e) {
  pow_mpz(f, out, base, mpz_class(static_cast<unsigned long>(e)));
}

void inv(const FieldSpec& f, uint64_t* out, const uint64_t* a) {
  // a^(2^t - 2); caller guarantees a != 0.
  pow_mpz(f, out, a, group_order(f.t) - 1);
}

int cmp(const FieldSpec& f, const uint64_t* a, const uint64_t* b) {
  for (size_t i = f.words(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

}  // namespace gf

namespace {

// GCD of two polynomials over GF(2), by repeated aligned XOR.
std::vector<uint64_t> poly_gcd(std::vector<uint64_t> a, std::vector<uint64_t> b) {
  int64_t da = poly_degree(a.data(), a.size());
  int64_t db = poly_degree(b.data(), b.size());
  while (db >= 0) {
    if (da < db) {
      std::swap(a, b);
      std::swap(da, db);
      continue;
    }
    const size_t sh = static_cast<size_t>(da - db);
    const size_t wo = sh / kW;
    const unsigned bo = sh % kW;
    for (size_t k = 0; k + wo < a.size() && k < b.size(); ++k) {
      a[k + wo] ^= bo ? (b[k] << bo) : b[k];
      if (bo && k + wo + 1 < a.size()) a[k + wo + 1] ^= b[k] >> (kW - bo);
    }
    da = poly_degree(a.data(), a.size());
  }
  a.resize(std::max<size_t>(1, (static_cast<size_t>(std::max<int64_t>(da, 0)) + kW) / kW));
  return a;
}

bool gcd_is_one(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
  const auto g = poly_gcd(a, b);
  if (g[0] != 1) return false;
  for (size_t i = 1; i < g.size(); ++i)
    if (g[i]) return false;
  return true;
}

}  // namespace

bool is_irreducible(const std::vector<uint64_t>& poly, uint32_t t) {
  if (t == 0) return false;
  if (poly.size() != modulus_words(t)) return false;
  if (poly_degree(poly.data(), poly.size()) != static_cast<int64_t>(t)) return false;
  if (t == 1) return true;
  if (!(poly[0] & 1)) return false;  // divisible by X
  uint64_t pc = 0;
  for (uint64_t w : poly) pc += std::popcount(w);
  if (pc % 2 == 0) return false;  // divisible by X + 1
  // Arithmetic mod poly does not require irreducibility.
  FieldSpec f{t, poly};
  const size_t nw = f.words();
  std::vector<uint64_t> h(nw, 0), x(nw, 0), screen(nw, 0), tmp(nw, 0);
  std::vector<uint64_t> wide(2 * nw + 1, 0);
  x[0] = 2;
  h = x;
  gf::set_one(f, screen.data());
  std::vector<uint32_t> checkpoints;
  for (uint64_t p : intfactor::prime_factors_u64(t)) checkpoints.push_back(t / p);
  std::sort(checkpoints.begin(), checkpoints.end());
  const uint32_t screen_top = std::min<uint32_t>(8, t - 1);
  for (uint32_t k = 1; k <= t; ++k) {
    gf::sqr(f, h.data(), wide.data());
    if (k <= screen_top) {
      // Accumulate (x^(2^k) + x); a common factor with poly of degree
      // dividing k surfaces in one gcd after the screen.
      std::copy(h.begin(), h.end(), tmp.begin());
      gf::add_into(f, tmp.data(), x.data());
      std::vector<uint64_t> prod(nw, 0);
      gf::mul(f, prod.data(), screen.data(), tmp.data());
      screen = prod;
      if (k == screen_top && !gcd_is_one(screen, poly)) return false;
    }
    if (std::binary_search(checkpoints.begin(), checkpoints.end(), k)) {
      std::copy(h.begin(), h.end(), tmp.begin());
      gf::add_into(f, tmp.data(), x.data());
      if (!gcd_is_one(tmp, poly)) return false;
    }
  }
  gf::add_into(f, h.data(), x.data());
  return gf::is_zero(f, h.data());
}

namespace {

std::vector<uint64_t> builtin_or_search(uint32_t t) {
  static const std::map<uint32_t, uint64_t> kBuiltin = {
      {4, 0x13}, {9, 0x211}, {11, 0x805}, {23, 0x800021}};
  const size_t mw = modulus_words(t);
  std::vector<uint64_t> m(mw, 0);
  if (auto it = kBuiltin.find(t); it != kBuiltin.end()) {
    m[0] = it->second;
    return m;
  }
  // Smallest coefficient bit string: ascending low part, constant term set,
  // odd total weight.
  m[t / kW] |= uint64_t(1) << (t % kW);
  const uint64_t w0_top = m[0];
  for (uint64_t low = 3; low < (uint64_t(1) << 32); low += 2) {
    if (std::popcount(low) % 2 != 0) continue;
    if (t < 32 && (low >> t)) break;
    m[0] = w0_top | low;
    if (is_irreducible(m, t)) return m;
  }
  throw InternalError("no irreducible polynomial found in search range for degree " + std::to_string(t));
}

}  // namespace

FieldPtr field_create(uint32_t t) {
  if (t < 2) throw IrreducibleViolation("field degree must be at least 2");
  static std::mutex mu;
  static std::map<uint32_t, FieldPtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(t); it != cache.end()) return it->second;
  auto spec = std::make_shared<FieldSpec>();
  spec->t = t;
  spec->modulus = builtin_or_search(t);
  cache.emplace(t, spec);
  return spec;
}

FieldPtr field_create(uint32_t t, std::vector<uint64_t> modulus) {
  if (t < 2) throw IrreducibleViolation("field degree must be at least 2");
  if (modulus.size() != modulus_words(t))
    throw IrreducibleViolation("modulus word count does not match degree " + std::to_string(t));
  if (!is_irreducible(modulus, t))
    throw IrreducibleViolation("modulus polynomial is reducible or has wrong degree");
  auto spec = std::make_shared<FieldSpec>();
  spec->t = t;
  spec->modulus = std::move(modulus);
  return spec;
}

FieldElement::FieldElement(FieldPtr f) : field_(std::move(f)), w_(field_->words(), 0) {}

FieldElement::FieldElement(FieldPtr f, std::vector<uint64_t> w)
    : field_(std::move(f)), w_(std::move(w)) {
  if (w_.size() != field_->words()) throw InternalError("element word count mismatch");
  const unsigned tm = field_->t % kW;
  if (tm && (w_.back() >> tm)) throw Error("element value exceeds field degree");
}

bool FieldElement::is_zero() const { return gf::is_zero(*field_, w_.data()); }

bool FieldElement::is_one() const {
  if (w_[0] != 1) return false;
  for (size_t i = 1; i < w_.size(); ++i)
    if (w_[i]) return false;
  return true;
}

namespace {

void require_same_field(const FieldElement& x, const FieldElement& y) {
  if (!x.field() || !y.field()) throw FieldMismatch("operand missing field");
  if (x.field() == y.field()) return;
  if (*x.field() == *y.field()) return;
  throw FieldMismatch("operands belong to different fields");
}

}  // namespace

bool FieldElement::operator==(const FieldElement& o) const {
  require_same_field(*this, o);
  return w_ == o.w_;
}

FieldElement fe_zero(const FieldPtr& f) { return FieldElement(f); }

FieldElement fe_one(const FieldPtr& f) { return FieldElement(f, words_from_u64(*f, 1)); }

FieldElement fe_x(const FieldPtr& f) { return FieldElement(f, words_from_u64(*f, 2)); }

FieldElement fe_add(const FieldElement& x, const FieldElement& y) {
  require_same_field(x, y);
  FieldElement r = x;
  gf::add_into(*r.field_, r.w_.data(), y.w_.data());
  return r;
}

FieldElement fe_mul(const FieldElement& x, const FieldElement& y) {
  require_same_field(x, y);
  FieldElement r(x.field_);
  gf::mul(*r.field_, r.w_.data(), x.w_.data(), y.w_.data());
  return r;
}

FieldElement fe_inv(const FieldElement& x) {
  if (x.is_zero()) throw DivisionByZero("inverse of zero");
  FieldElement r(x.field_);
  gf::inv(*r.field_, r.w_.data(), x.w_.data());
  return r;
}

FieldElement fe_pow(const FieldElement& x, const mpz_class& e) {
  if (e < 0) {
    if (x.is_zero()) throw DivisionByZero("zero raised to a negative power");
    return fe_pow(fe_inv(x), mpz_class(-e));
  }
  FieldElement r(x.field_);
  gf::pow_mpz(*r.field_, r.w_.data(), x.w_.data(), e);
  return r;
}

FieldElement fe_pow(const FieldElement& x, int64_t e) { return fe_pow(x, mpz_class(static_cast<long>(e))); }

FieldElement frobenius(const FieldElement& x, uint64_t j) {
  const uint32_t t = x.field()->t;
  j %= t;
  FieldElement r = x;
  auto& s = scratch();
  s.fit(*x.field());
  for (uint64_t i = 0; i < j; ++i) gf::sqr(*r.field_, r.w_.data(), s.wide.data());
  return r;
}

std::string fe_to_hex(const FieldElement& x) { return util::words_to_hex(x.words(), x.field()->t); }

FieldElement fe_from_hex(const FieldPtr& f, const std::string& s) {
  return FieldElement(f, util::hex_to_words(s, f->t));
}

mpz_class element_order(const FieldElement& x, std::chrono::milliseconds factor_budget) {
  if (x.is_zero()) throw DivisionByZero("order of zero");
  const mpz_class full = group_order(x.field()->t);
  std::vector<intfactor::PrimePower> fac;
  try {
    fac = intfactor::factor(full, factor_budget);
  } catch (const FactorBudgetExceeded& e) {
    throw OrderBudgetExceeded(std::string("factoring 2^t - 1 timed out: ") + e.what());
  }
  mpz_class e = full;
  for (const auto& pp : fac) {
    for (uint32_t i = 0; i < pp.e; ++i) {
      mpz_class cand = e / pp.p;
      if (e % pp.p == 0 && fe_pow(x, cand).is_one())
        e = cand;
      else
        break;
    }
  }
  return e;
}

bool has_order(const FieldElement& x, const mpz_class& m, const std::vector<mpz_class>& m_primes) {
  if (x.is_zero()) return false;
  if (!fe_pow(x, m).is_one()) return false;
  for (const auto& p : m_primes) {
    if (fe_pow(x, mpz_class(m / p)).is_one()) return false;
  }
  return true;
}

FieldElement primitive_root(const FieldPtr& f, const mpz_class& m,
                            std::chrono::milliseconds factor_budget) {
  const mpz_class full = group_order(f->t);
  if (m <= 0 || full % m != 0)
    throw OrderUnsupported("m does not divide 2^t - 1 for t = " + std::to_string(f->t));
  if (m == 1) return fe_one(f);
  std::vector<intfactor::PrimePower> full_fac;
  bool have_full = true;
  try {
    full_fac = intfactor::factor(full, factor_budget);
  } catch (const FactorBudgetExceeded&) {
    have_full = false;
  }
  if (have_full) {
    // Smallest-bit-string generator of the full group, then power down.
    for (uint64_t v = 2;; ++v) {
      if (f->t < kW && (v >> f->t)) throw InternalError("no generator found");
      FieldElement x(f, words_from_u64(*f, v));
      bool gen = true;
      for (const auto& pp : full_fac) {
        if (fe_pow(x, mpz_class(full / pp.p)).is_one()) {
          gen = false;
          break;
        }
      }
      if (gen) return fe_pow(x, mpz_class(full / m));
    }
  }
  // Fallback: smallest base whose power has verified order exactly m.
  std::vector<intfactor::PrimePower> m_fac = intfactor::factor(m, factor_budget);
  std::vector<mpz_class> m_primes;
  for (const auto& pp : m_fac) m_primes.push_back(pp.p);
  const mpz_class quot = full / m;
  for (uint64_t v = 2;; ++v) {
    if (f->t < kW && (v >> f->t)) throw InternalError("no element of requested order found");
    FieldElement x(f, words_from_u64(*f, v));
    FieldElement y = fe_pow(x, quot);
    if (has_order(y, m, m_primes)) return y;
  }
}

}  // namespace ldcforge::algebra
