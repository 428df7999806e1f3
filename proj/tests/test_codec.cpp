#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "ldcforge/codec.hpp"
#include "ldcforge/decpoly.hpp"
#include "ldcforge/errors.hpp"
#include "ldcforge/matchfam.hpp"

using namespace ldcforge;
using namespace ldcforge::codec;
namespace a = ldcforge::algebra;

namespace {

matchfam::MatchingFamily family15() {
  matchfam::MatchingFamily f;
  f.m = 15;
  f.h = 2;
  f.target_set = {1, 6, 10};
  f.vectors = {{6, 12}, {3, 9}};
  return f;
}

CodeSpecPtr spec15() {
  static CodeSpecPtr spec = make_spec(family15(), decpoly::lagrange_polynomial(15));
  return spec;
}

CodeSpecPtr spec511() {
  static CodeSpecPtr spec = [] {
    auto fam = matchfam::greedy_search(511, 2, 2, 1, 1000000);
    auto cert = decpoly::collision_search(511);
    return make_spec(fam, *cert.poly);
  }();
  return spec;
}

std::vector<a::FieldElement> random_message(const CodeSpecPtr& spec, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<a::FieldElement> x;
  for (uint64_t j = 0; j < spec->n; ++j) {
    x.push_back(a::fe_pow(spec->gamma, static_cast<int64_t>(rng() % 64 + 1)));
  }
  return x;
}

std::string temp_path(const char* name) {
  return std::string("codec_test_") + name + ".bin";
}

}  // namespace

TEST_CASE("spec assembly validates the join") {
  auto spec = spec15();
  CHECK(spec->n == 2);
  CHECK(spec->big_n == 225);
  CHECK(spec->k() == 4);
  CHECK(spec->profile.m == 15);
  CHECK(spec->field->t == 4);

  auto fam = family15();
  fam.target_set = {1, 6};  // not the canonical set
  CHECK_THROWS_AS(make_spec(fam, decpoly::lagrange_polynomial(15)), AuxInvalid);

  CHECK_THROWS_AS(make_spec(family15(), decpoly::lagrange_polynomial(35)), AuxInvalid);
}

TEST_CASE("codeword size cap") {
  // 2047^3 coordinates at two bytes each would pass 17 GB.
  matchfam::MatchingFamily one;
  one.m = 2047;
  one.h = 3;
  one.target_set = modulus::profile(2047).canonical;
  one.vectors = {{0, 0, 0}};
  auto poly = decpoly::lagrange_polynomial(2047);
  CHECK_THROWS_AS(make_spec(one, poly), BudgetExceeded);
}

TEST_CASE("coordinate indexing is least-significant-first") {
  auto spec = spec15();
  CHECK(vector_index(*spec, {2, 1}) == 17);
  CHECK(index_vector(*spec, 17) == std::vector<uint64_t>{2, 1});
  for (uint64_t idx : {0ull, 1ull, 14ull, 15ull, 224ull}) {
    CHECK(vector_index(*spec, index_vector(*spec, idx)) == idx);
  }
  CHECK_THROWS_AS(index_vector(*spec, 225), IndexOutOfRange);
  CHECK_THROWS_AS(vector_index(*spec, {1}), AuxInvalid);
}

TEST_CASE("encoding evaluates the exponential sums") {
  auto spec = spec15();
  auto x = random_message(spec, 7);
  auto cw = encode(spec, x);
  // At v = 0 every inner product vanishes, so the coordinate is x_1 + x_2.
  CHECK(cw.at(0) == x[0] + x[1]);
  // Spot-check one nontrivial coordinate against the defining sum.
  uint64_t idx = vector_index(*spec, {2, 1});
  auto expect = x[0] * a::fe_pow(spec->gamma, int64_t((6 * 2 + 12 * 1) % 15)) +
                x[1] * a::fe_pow(spec->gamma, int64_t((3 * 2 + 9 * 1) % 15));
  CHECK(cw.at(idx) == expect);
  CHECK(cw.words.size() == spec->big_n * spec->field->words());
}

TEST_CASE("message length is enforced") {
  auto spec = spec15();
  std::vector<a::FieldElement> wrong(1, a::fe_one(spec->field));
  CHECK_THROWS_AS(encode(spec, wrong), MessageLengthMismatch);
}

TEST_CASE("local decode is exact on clean codewords") {
  for (const auto& spec : {spec15(), spec511()}) {
    auto x = random_message(spec, 11);
    auto cw = encode(spec, x);
    for (uint64_t i = 1; i <= spec->n; ++i) {
      for (uint64_t seed : {0ull, 1ull, 99ull}) {
        std::mt19937_64 rng(seed);
        CHECK(local_decode(cw, i, rng) == x[i - 1]);
      }
    }
    std::mt19937_64 rng(5);
    auto decoded = decode_message(cw, rng);
    REQUIRE(decoded.size() == x.size());
    for (size_t j = 0; j < x.size(); ++j) CHECK(decoded[j] == x[j]);
  }
}

TEST_CASE("decode positions are 1-based") {
  auto spec = spec15();
  auto cw = encode(spec, random_message(spec, 3));
  std::mt19937_64 rng(0);
  CHECK_THROWS_AS(local_decode(cw, 0, rng), IndexOutOfRange);
  CHECK_THROWS_AS(local_decode(cw, 3, rng), IndexOutOfRange);
}

TEST_CASE("oracle-backed decode matches materialized decode") {
  auto spec = spec15();
  auto x = random_message(spec, 13);
  auto cw = encode(spec, x);
  QueryOracle oracle = [&](uint64_t idx) { return cw.at(idx); };
  std::mt19937_64 r1(42), r2(42);
  CHECK(local_decode(*spec, oracle, 1, r1) == local_decode(cw, 1, r2));
}

TEST_CASE("corruption hits the exact Hamming distance") {
  auto spec = spec15();
  auto cw = encode(spec, random_message(spec, 17));

  CorruptionPlan plan;
  plan.positions = {0, 17, 224};
  plan.seed = 9;
  auto flipped = corrupt(cw, plan);
  uint64_t changed = 0;
  for (uint64_t idx = 0; idx < spec->big_n; ++idx) {
    if (flipped.at(idx) != cw.at(idx)) ++changed;
  }
  CHECK(changed == 3);

  plan.policy = CorruptionPolicy::set_zero;
  auto zeroed = corrupt(cw, plan);
  for (uint64_t idx : plan.positions) CHECK(zeroed.at(idx).is_zero());

  CorruptionPlan fraction;
  fraction.delta = 0.04;  // floor(0.04 * 225) = 9 coordinates
  fraction.seed = 1;
  auto f = corrupt(cw, fraction);
  changed = 0;
  for (uint64_t idx = 0; idx < spec->big_n; ++idx) {
    if (f.at(idx) != cw.at(idx)) ++changed;
  }
  CHECK(changed == 9);
}

TEST_CASE("corruption plans are validated") {
  auto spec = spec15();
  auto cw = encode(spec, random_message(spec, 19));
  CorruptionPlan dup;
  dup.positions = {4, 4};
  CHECK_THROWS_AS(corrupt(cw, dup), AuxInvalid);
  CorruptionPlan out;
  out.positions = {225};
  CHECK_THROWS_AS(corrupt(cw, out), IndexOutOfRange);
  CorruptionPlan whole;
  whole.delta = 1.0;
  CHECK_THROWS_AS(corrupt(cw, whole), AuxInvalid);
}

TEST_CASE("decode success under light corruption stays above the union bound") {
  auto spec = spec15();
  auto x = random_message(spec, 23);
  CorruptionPlan plan;
  plan.delta = 0.01;
  plan.seed = 31;
  const uint64_t trials = 2000;
  auto rep = success_rate(spec, x, plan, trials, 37);
  CHECK(rep.trials == trials);
  CHECK(rep.corrupted == 2);  // floor(0.01 * 225)
  CHECK(rep.floor == doctest::Approx(0.96));
  REQUIRE(rep.per_index.size() == spec->n);
  // Mean success is at least 1 - k*delta; allow three sampling deviations.
  double tol = 3.0 * std::sqrt(0.04 / double(trials));
  for (double r : rep.per_index) CHECK(r >= 0.96 - tol);
}

TEST_CASE("clean-channel success is total") {
  auto spec = spec15();
  auto x = random_message(spec, 29);
  CorruptionPlan plan;  // delta 0, no positions
  auto rep = success_rate(spec, x, plan, 50, 41);
  CHECK(rep.corrupted == 0);
  for (double r : rep.per_index) CHECK(r == 1.0);
}

TEST_CASE("both polynomial sources decode the same messages") {
  auto fam = matchfam::greedy_search(511, 2, 2, 1, 1000000);
  auto sparse = make_spec(fam, *decpoly::collision_search(511).poly);
  auto dense = make_spec(fam, decpoly::lagrange_polynomial(511));
  CHECK(sparse->k() == 3);
  CHECK(dense->k() == 4);
  auto x = random_message(sparse, 43);
  auto cw_sparse = encode(sparse, x);
  auto cw_dense = encode(dense, x);
  std::mt19937_64 rng(47);
  for (uint64_t i = 1; i <= 2; ++i) {
    CHECK(local_decode(cw_sparse, i, rng) == x[i - 1]);
    CHECK(local_decode(cw_dense, i, rng) == x[i - 1]);
  }
}

TEST_CASE("every decoder query is uniform over the codeword") {
  auto spec = spec15();
  for (uint64_t i = 1; i <= spec->n; ++i) {
    auto hist = smoothness_audit(*spec, i);
    REQUIRE(hist.size() == spec->k());
    for (const auto& slot : hist) {
      REQUIRE(slot.size() == spec->big_n);
      for (uint64_t count : slot) CHECK(count == 1);
    }
  }
}

TEST_CASE("codeword files round trip") {
  auto spec = spec15();
  auto x = random_message(spec, 53);
  auto cw = encode(spec, x);
  auto path = temp_path("roundtrip");
  save_codeword(cw, path);
  auto loaded = load_codeword(spec, path);
  CHECK(loaded.words == cw.words);

  // A header from a different code is refused.
  CHECK_THROWS_AS(load_codeword(spec511(), path), AuxInvalid);

  // So is a clobbered magic.
  {
    std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
    f.put('X');
  }
  CHECK_THROWS_AS(load_codeword(spec, path), AuxInvalid);
  std::remove(path.c_str());
}
