#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "ldcforge/decpoly.hpp"
#include "ldcforge/matchfam.hpp"

namespace ldcforge::codec {

/// Everything needed to encode and locally decode one code: the modulus
/// profile, the field with its order-m root, a matching family of n
/// vectors in Z_m^h, and a k-term decoding polynomial with a constant
/// term. Codeword length is big_n = m^h.
struct CodeSpec {
  modulus::ModulusProfile profile;
  algebra::FieldPtr field;
  algebra::FieldElement gamma;
  matchfam::MatchingFamily family;
  decpoly::DecodingPolynomial poly;
  uint64_t n = 0;
  uint64_t big_n = 0;

  size_t k() const { return poly.k(); }
};

using CodeSpecPtr = std::shared_ptr<const CodeSpec>;

/// Validates the cross-module invariants (equal moduli, family target set
/// equal to the canonical set, verified polynomial with constant term,
/// coordinates reduced mod m) and the materialization budget: m <= 2^21
/// and big_n * ceil(t/8) <= 2 GB, else BudgetExceeded. Structural
/// mismatches throw AuxInvalid.
CodeSpecPtr make_spec(const matchfam::MatchingFamily& family,
                      const decpoly::DecodingPolynomial& poly);

/// index(v) = sum v_j * m^(j-1): first coordinate least significant.
uint64_t vector_index(const CodeSpec& spec, const std::vector<uint64_t>& v);
std::vector<uint64_t> index_vector(const CodeSpec& spec, uint64_t index);

/// Dense codeword over Z_m^h-indexed coordinates, stored as flat field
/// words. Immutable after construction; corrupt returns a modified copy.
struct Codeword {
  CodeSpecPtr spec;
  std::vector<uint64_t> words;

  algebra::FieldElement at(uint64_t index) const;
};

/// C(x)_v = sum_j x_j * gamma^(<u_j, v> mod m), computed by enumerating v
/// in index order with incremental inner products and per-message-index
/// tables of x_j-scaled root powers.
Codeword encode(const CodeSpecPtr& spec, const std::vector<algebra::FieldElement>& x);

using QueryOracle = std::function<algebra::FieldElement(uint64_t)>;

/// One decoding pass for message position i (1-based): draws v uniform in
/// Z_m^h, issues the k queries at v and v + b_l * u_i (all before any
/// combination), and returns gamma^(-<u_i, v>) * sum of coefficient-scaled
/// answers. Exact on uncorrupted codewords.
algebra::FieldElement local_decode(const CodeSpec& spec, const QueryOracle& oracle, uint64_t i,
                                   std::mt19937_64& rng);
algebra::FieldElement local_decode(const Codeword& cw, uint64_t i, std::mt19937_64& rng);

/// Decodes every message position once.
std::vector<algebra::FieldElement> decode_message(const Codeword& cw, std::mt19937_64& rng);

enum class CorruptionPolicy { flip_random_nonequal, set_zero };

/// Corruption of floor(delta * big_n) coordinates (or the explicit
/// positions when given). flip_random_nonequal replaces each chosen value
/// with a uniform different element; set_zero clears it.
struct CorruptionPlan {
  double delta = 0.0;
  std::vector<uint64_t> positions;
  CorruptionPolicy policy = CorruptionPolicy::flip_random_nonequal;
  uint64_t seed = 0;
};

/// Copy of cw differing in exactly the planned coordinates (for set_zero,
/// the originally nonzero ones). The achieved Hamming distance is checked
/// internally.
Codeword corrupt(const Codeword& cw, const CorruptionPlan& plan);

struct SuccessReport {
  std::vector<double> per_index;  // success frequency per message position
  double floor = 0.0;             // 1 - k * delta
  uint64_t trials = 0;
  uint64_t corrupted = 0;         // achieved Hamming distance
};

/// Encodes x, corrupts per plan, then measures per-position decode success
/// over the given number of trials with fresh randomness each trial.
SuccessReport success_rate(const CodeSpecPtr& spec, const std::vector<algebra::FieldElement>& x,
                           const CorruptionPlan& plan, uint64_t trials, uint64_t seed);

/// Exact per-query-slot histograms over all big_n choices of v for message
/// position i: entry [slot][index] counts how often that coordinate is
/// queried. A perfectly smooth decoder yields all-ones histograms.
/// big_n > 10^6 throws BudgetExceeded.
std::vector<std::vector<uint64_t>> smoothness_audit(const CodeSpec& spec, uint64_t i);

/// Binary persistence: 16-byte header (magic "LDC1", then t, m, h as
/// little-endian 32-bit fields) followed by big_n elements of ceil(t/8)
/// little-endian bytes each.
void save_codeword(const Codeword& cw, const std::string& path);
Codeword load_codeword(const CodeSpecPtr& spec, const std::string& path);

}  // namespace ldcforge::codec
