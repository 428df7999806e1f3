#include "ldcforge/codec.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <unordered_set>

#include "ldcforge/intfactor.hpp"
#include "ldcforge/util.hpp"

namespace ldcforge::codec {

namespace a = algebra;

namespace {

constexpr uint64_t kTableModulusCap = uint64_t(1) << 21;
constexpr uint64_t kCodewordBytesCap = uint64_t(2) << 30;
constexpr uint64_t kAuditCap = 1000000;

uint64_t mulmod(uint64_t x, uint64_t y, uint64_t m) { return intfactor::mulmod_u64(x, y, m); }

size_t element_bytes(const CodeSpec& spec) { return (spec.field->t + 7) / 8; }

// x_j-scaled power tables, flat n * m * kw words: row j entry e holds
// x_j * gamma^e.
std::vector<uint64_t> scaled_tables(const CodeSpec& spec,
                                    const std::vector<a::FieldElement>& x) {
  const uint64_t m = spec.profile.m;
  const size_t kw = spec.field->words();
  std::vector<uint64_t> powers(m * kw, 0);
  a::gf::set_one(*spec.field, &powers[0]);
  for (uint64_t e = 1; e < m; ++e)
    a::gf::mul(*spec.field, &powers[e * kw], &powers[(e - 1) * kw], spec.gamma.words().data());
  std::vector<uint64_t> tables(spec.n * m * kw, 0);
  for (uint64_t j = 0; j < spec.n; ++j) {
    const uint64_t* xw = x[j].words().data();
    for (uint64_t e = 0; e < m; ++e)
      a::gf::mul(*spec.field, &tables[(j * m + e) * kw], xw, &powers[e * kw]);
  }
  return tables;
}

uint64_t inner_mod(const std::vector<uint64_t>& u, const std::vector<uint64_t>& v, uint64_t m) {
  uint64_t acc = 0;
  for (size_t l = 0; l < u.size(); ++l) {
    acc += mulmod(u[l], v[l], m);
    if (acc >= m) acc -= m;
  }
  return acc;
}

}  // namespace

CodeSpecPtr make_spec(const matchfam::MatchingFamily& family,
                      const decpoly::DecodingPolynomial& poly) {
  if (family.m != poly.m)
    throw AuxInvalid("family modulus differs from polynomial modulus");
  if (family.vectors.empty()) throw AuxInvalid("family is empty");
  if (family.h < 1) throw AuxInvalid("family dimension must be at least 1");
  auto spec = std::make_shared<CodeSpec>();
  spec->profile = modulus::profile(poly.m);
  if (family.target_set != spec->profile.canonical)
    throw AuxInvalid("family target set differs from the canonical set");
  if (!decpoly::verify_decoding_polynomial(poly))
    throw AuxInvalid("decoding polynomial fails verification");
  if (poly.terms.front().exp != 0)
    throw AuxInvalid("decoder requires a polynomial with a constant term");
  spec->field = poly.field;
  spec->gamma = poly.gamma;
  spec->poly = poly;
  spec->family = family;
  for (auto& vec : spec->family.vectors)
    for (auto& c : vec) c %= family.m;
  spec->n = family.vectors.size();

  const uint64_t m = poly.m;
  if (m > kTableModulusCap)
    throw BudgetExceeded("modulus exceeds the materialized-code cap of 2^21");
  mpz_class big = 1;
  for (size_t l = 0; l < family.h; ++l) big *= static_cast<unsigned long>(m);
  const mpz_class bytes = big * static_cast<unsigned long>(element_bytes(*spec));
  if (bytes > kCodewordBytesCap)
    throw BudgetExceeded("codeword of " + bytes.get_str() + " bytes exceeds the 2 GB cap");
  spec->big_n = big.get_ui();
  return spec;
}

uint64_t vector_index(const CodeSpec& spec, const std::vector<uint64_t>& v) {
  if (v.size() != spec.family.h) throw AuxInvalid("vector dimension differs from h");
  uint64_t idx = 0, radix = 1;
  for (size_t l = 0; l < v.size(); ++l) {
    idx += (v[l] % spec.profile.m) * radix;
    radix *= spec.profile.m;
  }
  return idx;
}

std::vector<uint64_t> index_vector(const CodeSpec& spec, uint64_t index) {
  if (index >= spec.big_n) throw IndexOutOfRange("coordinate index exceeds codeword length");
  std::vector<uint64_t> v(spec.family.h);
  for (size_t l = 0; l < v.size(); ++l) {
    v[l] = index % spec.profile.m;
    index /= spec.profile.m;
  }
  return v;
}

algebra::FieldElement Codeword::at(uint64_t index) const {
  if (!spec || index >= spec->big_n)
    throw IndexOutOfRange("coordinate index exceeds codeword length");
  const size_t kw = spec->field->words();
  std::vector<uint64_t> w(words.begin() + index * kw, words.begin() + (index + 1) * kw);
  return a::FieldElement(spec->field, std::move(w));
}

Codeword encode(const CodeSpecPtr& spec, const std::vector<a::FieldElement>& x) {
  if (x.size() != spec->n)
    throw MessageLengthMismatch("message has " + std::to_string(x.size()) +
                                " elements, expected " + std::to_string(spec->n));
  for (const auto& e : x) {
    if (!e.field() || !(*e.field() == *spec->field))
      throw FieldMismatch("message element lies in a different field");
  }
  const uint64_t m = spec->profile.m;
  const size_t h = spec->family.h;
  const size_t n = spec->n;
  const size_t kw = spec->field->words();
  const auto tables = scaled_tables(*spec, x);

  Codeword cw;
  cw.spec = spec;
  cw.words.assign(spec->big_n * kw, 0);

  util::parallel_for(0, spec->big_n, 4096, [&](uint64_t lo, uint64_t hi) {
    std::vector<uint64_t> v(h);
    uint64_t rem = lo;
    for (size_t l = 0; l < h; ++l) {
      v[l] = rem % m;
      rem /= m;
    }
    std::vector<uint64_t> inner(n);
    for (size_t j = 0; j < n; ++j) inner[j] = inner_mod(spec->family.vectors[j], v, m);
    for (uint64_t idx = lo; idx < hi; ++idx) {
      uint64_t* out = &cw.words[idx * kw];
      for (size_t j = 0; j < n; ++j) {
        const uint64_t* src = &tables[(j * m + inner[j]) * kw];
        for (size_t w = 0; w < kw; ++w) out[w] ^= src[w];
      }
      // Odometer step: every coordinate in the carry chain advances by 1
      // mod m, adding u_j[l] to each inner product.
      for (size_t l = 0; l < h; ++l) {
        for (size_t j = 0; j < n; ++j) {
          inner[j] += spec->family.vectors[j][l];
          if (inner[j] >= m) inner[j] -= m;
        }
        if (++v[l] < m) break;
        v[l] = 0;
      }
    }
  });
  return cw;
}

algebra::FieldElement local_decode(const CodeSpec& spec, const QueryOracle& oracle, uint64_t i,
                                   std::mt19937_64& rng) {
  if (i < 1 || i > spec.n) throw IndexOutOfRange("message position out of range");
  const uint64_t m = spec.profile.m;
  const size_t h = spec.family.h;
  const auto& u = spec.family.vectors[i - 1];

  std::vector<uint64_t> v(h);
  for (auto& c : v) c = util::uniform_below(rng, m);

  // All queries are fixed before any answer is combined.
  std::vector<uint64_t> queries;
  queries.reserve(spec.k());
  queries.push_back(vector_index(spec, v));
  std::vector<uint64_t> w(h);
  for (size_t l = 1; l < spec.poly.terms.size(); ++l) {
    const uint64_t b = spec.poly.terms[l].exp;
    for (size_t c = 0; c < h; ++c) {
      w[c] = v[c] + mulmod(b, u[c], m);
      if (w[c] >= m) w[c] -= m;
    }
    queries.push_back(vector_index(spec, w));
  }
  std::vector<a::FieldElement> answers;
  answers.reserve(queries.size());
  for (uint64_t qi : queries) answers.push_back(oracle(qi));

  a::FieldElement acc = fe_zero(spec.field);
  for (size_t l = 0; l < answers.size(); ++l)
    acc = acc + fe_mul(spec.poly.terms[l].coef, answers[l]);
  const uint64_t iv = inner_mod(u, v, m);
  return fe_mul(fe_pow(spec.gamma, int64_t((m - iv) % m)), acc);
}

algebra::FieldElement local_decode(const Codeword& cw, uint64_t i, std::mt19937_64& rng) {
  return local_decode(*cw.spec, [&](uint64_t qi) { return cw.at(qi); }, i, rng);
}

std::vector<algebra::FieldElement> decode_message(const Codeword& cw, std::mt19937_64& rng) {
  std::vector<a::FieldElement> out;
  out.reserve(cw.spec->n);
  for (uint64_t i = 1; i <= cw.spec->n; ++i) out.push_back(local_decode(cw, i, rng));
  return out;
}

Codeword corrupt(const Codeword& cw, const CorruptionPlan& plan) {
  const CodeSpec& spec = *cw.spec;
  const size_t kw = spec.field->words();
  if (plan.delta < 0.0 || plan.delta >= 1.0)
    throw AuxInvalid("corruption fraction must lie in [0, 1)");

  std::vector<uint64_t> positions = plan.positions;
  std::mt19937_64 rng(plan.seed);
  if (positions.empty() && plan.delta > 0.0) {
    // Floyd's sampling: count distinct positions, deterministic from seed.
    const uint64_t count = uint64_t(plan.delta * double(spec.big_n));
    std::unordered_set<uint64_t> chosen;
    chosen.reserve(count);
    for (uint64_t j = spec.big_n - count; j < spec.big_n; ++j) {
      const uint64_t r = util::uniform_below(rng, j + 1);
      chosen.insert(chosen.count(r) ? j : r);
    }
    positions.assign(chosen.begin(), chosen.end());
  }
  std::sort(positions.begin(), positions.end());
  if (std::adjacent_find(positions.begin(), positions.end()) != positions.end())
    throw AuxInvalid("corruption positions must be distinct");
  if (!positions.empty() && positions.back() >= spec.big_n)
    throw IndexOutOfRange("corruption position exceeds codeword length");

  Codeword out;
  out.spec = cw.spec;
  out.words = cw.words;
  uint64_t expected = 0;
  for (uint64_t pos : positions) {
    uint64_t* val = &out.words[pos * kw];
    if (plan.policy == CorruptionPolicy::set_zero) {
      if (!a::gf::is_zero(*spec.field, val)) ++expected;
      a::gf::set_zero(*spec.field, val);
    } else {
      std::vector<uint64_t> fresh(kw);
      const uint32_t top_bits = spec.field->t % 64;
      const uint64_t top_mask = top_bits ? ((uint64_t(1) << top_bits) - 1) : ~uint64_t(0);
      do {
        for (auto& wv : fresh) wv = rng();
        fresh[kw - 1] &= top_mask;
      } while (a::gf::equal(*spec.field, fresh.data(), val));
      std::copy(fresh.begin(), fresh.end(), val);
      ++expected;
    }
  }
  uint64_t distance = 0;
  for (uint64_t idx = 0; idx < spec.big_n; ++idx) {
    if (!a::gf::equal(*spec.field, &out.words[idx * kw], &cw.words[idx * kw])) ++distance;
  }
  if (distance != expected)
    throw InternalError("corruption produced an unexpected Hamming distance");
  return out;
}

SuccessReport success_rate(const CodeSpecPtr& spec, const std::vector<a::FieldElement>& x,
                           const CorruptionPlan& plan, uint64_t trials, uint64_t seed) {
  if (trials < 1) throw AuxInvalid("success_rate requires at least one trial");
  const Codeword clean = encode(spec, x);
  const Codeword noisy = corrupt(clean, plan);
  const size_t kw = spec->field->words();
  uint64_t distance = 0;
  for (uint64_t idx = 0; idx < spec->big_n; ++idx) {
    if (!a::gf::equal(*spec->field, &noisy.words[idx * kw], &clean.words[idx * kw])) ++distance;
  }

  SuccessReport report;
  report.floor = 1.0 - double(spec->k()) * plan.delta;
  report.trials = trials;
  report.corrupted = distance;
  std::mt19937_64 rng(seed);
  for (uint64_t i = 1; i <= spec->n; ++i) {
    uint64_t good = 0;
    for (uint64_t trial = 0; trial < trials; ++trial) {
      if (local_decode(noisy, i, rng) == x[i - 1]) ++good;
    }
    report.per_index.push_back(double(good) / double(trials));
  }
  return report;
}

std::vector<std::vector<uint64_t>> smoothness_audit(const CodeSpec& spec, uint64_t i) {
  if (spec.big_n > kAuditCap)
    throw BudgetExceeded("smoothness audit requires big_n <= 10^6");
  if (i < 1 || i > spec.n) throw IndexOutOfRange("message position out of range");
  const uint64_t m = spec.profile.m;
  const size_t h = spec.family.h;
  const auto& u = spec.family.vectors[i - 1];
  const size_t k = spec.k();

  std::vector<std::vector<uint64_t>> hist(k, std::vector<uint64_t>(spec.big_n, 0));
  std::vector<uint64_t> v(h, 0), w(h);
  for (uint64_t idx = 0; idx < spec.big_n; ++idx) {
    hist[0][idx]++;
    for (size_t l = 1; l < spec.poly.terms.size(); ++l) {
      const uint64_t b = spec.poly.terms[l].exp;
      uint64_t qi = 0, radix = 1;
      for (size_t c = 0; c < h; ++c) {
        uint64_t wc = v[c] + mulmod(b, u[c], m);
        if (wc >= m) wc -= m;
        qi += wc * radix;
        radix *= m;
      }
      hist[l][qi]++;
    }
    for (size_t l = 0; l < h; ++l) {
      if (++v[l] < m) break;
      v[l] = 0;
    }
  }
  return hist;
}

void save_codeword(const Codeword& cw, const std::string& path) {
  const CodeSpec& spec = *cw.spec;
  const size_t eb = element_bytes(spec);
  const size_t kw = spec.field->words();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw AuxInvalid("cannot open " + path + " for writing");
  const char magic[4] = {'L', 'D', 'C', '1'};
  out.write(magic, 4);
  const uint32_t header[3] = {spec.field->t, uint32_t(spec.profile.m), uint32_t(spec.family.h)};
  for (uint32_t fld : header) {
    char buf[4];
    for (int b = 0; b < 4; ++b) buf[b] = char((fld >> (8 * b)) & 0xff);
    out.write(buf, 4);
  }
  std::vector<char> buf(eb);
  for (uint64_t idx = 0; idx < spec.big_n; ++idx) {
    const uint64_t* w = &cw.words[idx * kw];
    for (size_t b = 0; b < eb; ++b) buf[b] = char((w[b / 8] >> (8 * (b % 8))) & 0xff);
    out.write(buf.data(), std::streamsize(eb));
  }
  if (!out) throw AuxInvalid("failed writing " + path);
}

Codeword load_codeword(const CodeSpecPtr& spec, const std::string& path) {
  const size_t eb = element_bytes(*spec);
  const size_t kw = spec->field->words();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw AuxInvalid("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "LDC1", 4) != 0)
    throw AuxInvalid("bad magic in " + path);
  uint32_t header[3];
  for (uint32_t& fld : header) {
    char buf[4];
    in.read(buf, 4);
    if (!in) throw AuxInvalid("truncated header in " + path);
    fld = 0;
    for (int b = 0; b < 4; ++b) fld |= uint32_t(uint8_t(buf[b])) << (8 * b);
  }
  if (header[0] != spec->field->t || header[1] != spec->profile.m ||
      header[2] != spec->family.h)
    throw AuxInvalid("codeword header does not match the code spec");

  Codeword cw;
  cw.spec = spec;
  cw.words.assign(spec->big_n * kw, 0);
  std::vector<char> buf(eb);
  const uint64_t top_word_bits = spec->field->t % 64;
  const uint64_t top_mask =
      top_word_bits ? ((uint64_t(1) << top_word_bits) - 1) : ~uint64_t(0);
  for (uint64_t idx = 0; idx < spec->big_n; ++idx) {
    in.read(buf.data(), std::streamsize(eb));
    if (!in) throw AuxInvalid("truncated codeword in " + path);
    uint64_t* w = &cw.words[idx * kw];
    for (size_t b = 0; b < eb; ++b) w[b / 8] |= uint64_t(uint8_t(buf[b])) << (8 * (b % 8));
    if ((w[kw - 1] & ~top_mask) != 0)
      throw AuxInvalid("codeword element exceeds the field width");
  }
  in.peek();
  if (!in.eof()) throw AuxInvalid("trailing bytes in " + path);
  return cw;
}

}  // namespace ldcforge::codec
