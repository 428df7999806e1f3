#pragma once

#include <cstdint>
#include <vector>

#include "ldcforge/codec.hpp"

namespace ldcforge::pir {

/// k-server scheme wrapping a perfectly smooth code: one query per server,
/// database bits embedded as {0, 1} field elements.
struct PirScheme {
  codec::CodeSpecPtr code;
  uint64_t servers = 0;  // k, one query each
  uint64_t n_bits = 0;   // database length, at most the code's message length
};

/// Validates n_bits against the code's message length.
PirScheme make_scheme(const codec::CodeSpecPtr& code, uint64_t n_bits);

/// Full record of one retrieval. comm_bits counts the information-
/// theoretic k * (ceil(log2 N) + t); wire_bits counts the padded wire
/// encoding k * (64 + 8 * ceil(t/8)).
struct PirTranscript {
  uint64_t i = 0;
  std::vector<uint64_t> aux;                    // the uniform v in Z_m^h
  std::vector<uint64_t> queries;                // one codeword index per server
  std::vector<algebra::FieldElement> answers;   // one element per server
  int output = 0;
  uint64_t comm_bits = 0;
  uint64_t wire_bits = 0;
};

/// Queries for position i under randomness aux = v: the indices of v and
/// v + b_l * u_i. Malformed aux (wrong length or coordinate >= m) throws
/// AuxInvalid.
std::vector<uint64_t> query_gen(const PirScheme& scheme, uint64_t i,
                                const std::vector<uint64_t>& aux);

/// Server answer: the codeword value at the queried index. Stateless
/// beyond the codeword and identical across servers.
algebra::FieldElement answer(const codec::Codeword& server_state, uint64_t que);

/// Applies the decoder combination to the k answers and maps the result
/// back to a bit. A non-bit value under honest servers throws
/// ReconstructionError.
int reconstruct(const PirScheme& scheme, uint64_t i, const std::vector<uint64_t>& aux,
                const std::vector<algebra::FieldElement>& answers);

/// Exact audit over all N values of aux: per server slot, the multiset of
/// queries under i1 must equal the multiset under i2 (identical), and each
/// slot's histogram must be exactly flat (uniform). N > 10^6 throws
/// BudgetExceeded.
struct PrivacyAudit {
  bool identical = false;
  bool uniform = false;

  explicit operator bool() const { return identical; }
};
PrivacyAudit privacy_audit(const PirScheme& scheme, uint64_t i1, uint64_t i2);

/// End-to-end run against database_bits (values 0/1): encodes the embedded
/// message, draws aux from the seed, queries each server once, and
/// reconstructs. The transcript carries both communication accountings.
PirTranscript simulate(const PirScheme& scheme, const std::vector<uint8_t>& database_bits,
                       uint64_t i, uint64_t seed);

}  // namespace ldcforge::pir
