#include "doctest.h"

#include <cstdint>
#include <vector>

#include "ldcforge/codec.hpp"
#include "ldcforge/decpoly.hpp"
#include "ldcforge/errors.hpp"
#include "ldcforge/matchfam.hpp"
#include "ldcforge/pir.hpp"

using namespace ldcforge;
using namespace ldcforge::pir;
namespace a = ldcforge::algebra;

namespace {

codec::CodeSpecPtr spec15() {
  static codec::CodeSpecPtr spec = [] {
    matchfam::MatchingFamily f;
    f.m = 15;
    f.h = 2;
    f.target_set = {1, 6, 10};
    f.vectors = {{6, 12}, {3, 9}};
    return codec::make_spec(f, decpoly::lagrange_polynomial(15));
  }();
  return spec;
}

PirScheme scheme15() { return make_scheme(spec15(), 2); }

}  // namespace

TEST_CASE("scheme wraps the code with one query per server") {
  auto s = scheme15();
  CHECK(s.servers == 4);
  CHECK(s.n_bits == 2);
  CHECK_THROWS_AS(make_scheme(spec15(), 0), AuxInvalid);
  CHECK_THROWS_AS(make_scheme(spec15(), 3), AuxInvalid);  // code holds 2 symbols
}

TEST_CASE("query generation is deterministic in the auxiliary draw") {
  auto s = scheme15();
  std::vector<uint64_t> aux{2, 1};
  auto q = query_gen(s, 1, aux);
  REQUIRE(q.size() == 4);
  // Slot l queries v + b_l * u_1 with b_l the polynomial exponents 0..3.
  const auto& u1 = s.code->family.vectors[0];
  for (size_t l = 0; l < 4; ++l) {
    uint64_t b = s.code->poly.terms[l].exp;
    std::vector<uint64_t> v{(aux[0] + b * u1[0]) % 15, (aux[1] + b * u1[1]) % 15};
    CHECK(q[l] == codec::vector_index(*s.code, v));
  }

  CHECK_THROWS_AS(query_gen(s, 1, {1}), AuxInvalid);
  CHECK_THROWS_AS(query_gen(s, 1, {15, 0}), AuxInvalid);
  CHECK_THROWS_AS(query_gen(s, 3, aux), IndexOutOfRange);
}

TEST_CASE("retrieval reconstructs every database bit") {
  auto s = scheme15();
  std::vector<uint8_t> db{1, 0};
  for (uint64_t i = 1; i <= 2; ++i) {
    for (uint64_t seed : {0ull, 7ull, 123ull}) {
      auto tr = simulate(s, db, i, seed);
      CHECK(tr.i == i);
      CHECK(tr.output == db[i - 1]);
      CHECK(tr.queries.size() == s.servers);   // one round, one query each
      CHECK(tr.answers.size() == s.servers);
      CHECK(tr.aux.size() == s.code->family.h);
      CHECK(tr.comm_bits == 48);               // 4 * (ceil(log2 225) + 4)
      CHECK(tr.wire_bits == 4 * (64 + 8));
    }
  }
}

TEST_CASE("transcripts are reproducible from the seed") {
  auto s = scheme15();
  std::vector<uint8_t> db{0, 1};
  auto t1 = simulate(s, db, 2, 99);
  auto t2 = simulate(s, db, 2, 99);
  CHECK(t1.aux == t2.aux);
  CHECK(t1.queries == t2.queries);
  CHECK(t1.output == t2.output);
}

TEST_CASE("answers are plain codeword reads") {
  auto s = scheme15();
  std::vector<a::FieldElement> x{a::fe_one(s.code->field), a::fe_zero(s.code->field)};
  auto cw = codec::encode(s.code, x);
  CHECK(answer(cw, 17) == cw.at(17));
  CHECK_THROWS_AS(answer(cw, 225), IndexOutOfRange);
}

TEST_CASE("manual query round trip matches the decoder") {
  auto s = scheme15();
  std::vector<uint8_t> db{1, 1};
  std::vector<a::FieldElement> x;
  for (uint8_t bit : db) {
    x.push_back(bit ? a::fe_one(s.code->field) : a::fe_zero(s.code->field));
  }
  auto cw = codec::encode(s.code, x);
  std::vector<uint64_t> aux{4, 11};
  auto queries = query_gen(s, 1, aux);
  std::vector<a::FieldElement> answers;
  for (uint64_t q : queries) answers.push_back(answer(cw, q));
  CHECK(reconstruct(s, 1, aux, answers) == 1);
}

TEST_CASE("non-bit reconstructions are reported") {
  auto s = scheme15();
  std::vector<uint64_t> aux{0, 0};
  // With v = 0 the decoder returns sum coef_l * answer_l; forcing that sum
  // to gamma makes the result neither database bit.
  auto f = s.code->field;
  auto c0 = s.code->poly.terms[0].coef;
  std::vector<a::FieldElement> answers{a::fe_mul(a::fe_inv(c0), a::fe_x(f)), a::fe_zero(f),
                                       a::fe_zero(f), a::fe_zero(f)};
  CHECK_THROWS_AS(reconstruct(s, 1, aux, answers), ReconstructionError);
  answers.pop_back();
  CHECK_THROWS_AS(reconstruct(s, 1, aux, answers), AuxInvalid);
}

TEST_CASE("query distributions hide the target index") {
  auto audit = privacy_audit(scheme15(), 1, 2);
  CHECK(audit.identical);
  CHECK(audit.uniform);
  CHECK(bool(audit));
}

TEST_CASE("database bits must be binary") {
  auto s = scheme15();
  std::vector<uint8_t> db{1, 2};
  CHECK_THROWS_AS(simulate(s, db, 1, 0), AuxInvalid);
}
