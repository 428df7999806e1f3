#include "ldcforge/pir.hpp"

#include <algorithm>

#include "ldcforge/intfactor.hpp"
#include "ldcforge/util.hpp"

namespace ldcforge::pir {

namespace a = algebra;

namespace {

constexpr uint64_t kAuditCap = 1000000;

uint64_t ceil_log2(uint64_t n) {
  uint64_t bits = 0;
  while ((uint64_t(1) << bits) < n) ++bits;
  return bits;
}

void require_aux(const codec::CodeSpec& spec, const std::vector<uint64_t>& aux) {
  if (aux.size() != spec.family.h)
    throw AuxInvalid("aux must hold exactly h coordinates");
  for (uint64_t c : aux) {
    if (c >= spec.profile.m) throw AuxInvalid("aux coordinate exceeds the modulus");
  }
}

}  // namespace

PirScheme make_scheme(const codec::CodeSpecPtr& code, uint64_t n_bits) {
  if (!code) throw AuxInvalid("scheme requires a code spec");
  if (n_bits < 1 || n_bits > code->n)
    throw AuxInvalid("database length must lie in [1, message length]");
  PirScheme scheme;
  scheme.code = code;
  scheme.servers = code->k();
  scheme.n_bits = n_bits;
  return scheme;
}

std::vector<uint64_t> query_gen(const PirScheme& scheme, uint64_t i,
                                const std::vector<uint64_t>& aux) {
  const codec::CodeSpec& spec = *scheme.code;
  if (i < 1 || i > scheme.n_bits) throw IndexOutOfRange("retrieval index out of range");
  require_aux(spec, aux);
  const uint64_t m = spec.profile.m;
  const auto& u = spec.family.vectors[i - 1];

  std::vector<uint64_t> queries;
  queries.reserve(scheme.servers);
  queries.push_back(codec::vector_index(spec, aux));
  std::vector<uint64_t> w(aux.size());
  for (size_t l = 1; l < spec.poly.terms.size(); ++l) {
    const uint64_t b = spec.poly.terms[l].exp;
    for (size_t c = 0; c < w.size(); ++c) {
      w[c] = aux[c] + intfactor::mulmod_u64(b, u[c], m);
      if (w[c] >= m) w[c] -= m;
    }
    queries.push_back(codec::vector_index(spec, w));
  }
  return queries;
}

algebra::FieldElement answer(const codec::Codeword& server_state, uint64_t que) {
  return server_state.at(que);
}

int reconstruct(const PirScheme& scheme, uint64_t i, const std::vector<uint64_t>& aux,
                const std::vector<algebra::FieldElement>& answers) {
  const codec::CodeSpec& spec = *scheme.code;
  if (i < 1 || i > scheme.n_bits) throw IndexOutOfRange("retrieval index out of range");
  require_aux(spec, aux);
  if (answers.size() != scheme.servers)
    throw AuxInvalid("expected exactly one answer per server");

  a::FieldElement acc = fe_zero(spec.field);
  for (size_t l = 0; l < answers.size(); ++l)
    acc = acc + fe_mul(spec.poly.terms[l].coef, answers[l]);
  uint64_t iv = 0;
  const auto& u = spec.family.vectors[i - 1];
  for (size_t c = 0; c < aux.size(); ++c) {
    iv += intfactor::mulmod_u64(u[c], aux[c], spec.profile.m);
    if (iv >= spec.profile.m) iv -= spec.profile.m;
  }
  const a::FieldElement value =
      fe_mul(fe_pow(spec.gamma, int64_t((spec.profile.m - iv) % spec.profile.m)), acc);
  if (value.is_zero()) return 0;
  if (value.is_one()) return 1;
  throw ReconstructionError("recovered value is not a bit");
}

PrivacyAudit privacy_audit(const PirScheme& scheme, uint64_t i1, uint64_t i2) {
  const codec::CodeSpec& spec = *scheme.code;
  if (spec.big_n > kAuditCap) throw BudgetExceeded("privacy audit requires big_n <= 10^6");

  auto histograms = [&](uint64_t i) {
    std::vector<std::vector<uint64_t>> hist(scheme.servers,
                                            std::vector<uint64_t>(spec.big_n, 0));
    std::vector<uint64_t> v(spec.family.h, 0);
    for (uint64_t idx = 0; idx < spec.big_n; ++idx) {
      const auto queries = query_gen(scheme, i, v);
      for (size_t j = 0; j < queries.size(); ++j) hist[j][queries[j]]++;
      for (size_t l = 0; l < v.size(); ++l) {
        if (++v[l] < spec.profile.m) break;
        v[l] = 0;
      }
    }
    return hist;
  };
  const auto h1 = histograms(i1);
  const auto h2 = histograms(i2);

  PrivacyAudit audit;
  audit.identical = (h1 == h2);
  audit.uniform = true;
  for (const auto& hist : {std::cref(h1), std::cref(h2)}) {
    for (const auto& slot : hist.get()) {
      for (uint64_t c : slot) {
        if (c != 1) {
          audit.uniform = false;
          break;
        }
      }
    }
  }
  return audit;
}

PirTranscript simulate(const PirScheme& scheme, const std::vector<uint8_t>& database_bits,
                       uint64_t i, uint64_t seed) {
  const codec::CodeSpec& spec = *scheme.code;
  if (database_bits.size() > scheme.n_bits)
    throw AuxInvalid("database longer than the scheme's bit capacity");
  if (i < 1 || i > database_bits.size())
    throw IndexOutOfRange("retrieval index out of range");
  for (uint8_t b : database_bits) {
    if (b > 1) throw AuxInvalid("database entries must be bits");
  }

  std::vector<a::FieldElement> message;
  message.reserve(spec.n);
  for (uint64_t j = 0; j < spec.n; ++j) {
    const bool bit = j < database_bits.size() && database_bits[j] == 1;
    message.push_back(bit ? fe_one(spec.field) : fe_zero(spec.field));
  }
  const codec::Codeword codeword = codec::encode(scheme.code, message);

  PirTranscript tr;
  tr.i = i;
  std::mt19937_64 rng(seed);
  tr.aux.resize(spec.family.h);
  for (auto& c : tr.aux) c = util::uniform_below(rng, spec.profile.m);
  tr.queries = query_gen(scheme, i, tr.aux);
  tr.answers.reserve(tr.queries.size());
  for (uint64_t que : tr.queries) tr.answers.push_back(answer(codeword, que));
  tr.output = reconstruct(scheme, i, tr.aux, tr.answers);

  const uint64_t eb = (spec.field->t + 7) / 8;
  tr.comm_bits = scheme.servers * (ceil_log2(spec.big_n) + spec.field->t);
  tr.wire_bits = scheme.servers * (64 + 8 * eb);
  return tr;
}

}  // namespace ldcforge::pir
