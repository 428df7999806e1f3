#pragma once

#include <string>

#include "ldcforge/codec.hpp"
#include "ldcforge/compose.hpp"
#include "ldcforge/decpoly.hpp"
#include "ldcforge/matchfam.hpp"
#include "ldcforge/modulus.hpp"
#include "ldcforge/pir.hpp"

namespace ldcforge::json_io {

// Artifact serialization. Emitters produce key-ordered two-space-indented
// JSON with a trailing newline, so identical inputs give byte-identical
// files. Parsers validate shape, ranges, and hex widths and throw
// AuxInvalid on any malformed document. Big integers (moduli, query
// counts) travel as decimal strings; field elements as fixed-width hex.

std::string verdict_name(decpoly::Verdict v);
decpoly::Verdict verdict_from_name(const std::string& s);

std::string poly_to_json(const decpoly::DecodingPolynomial& p);
decpoly::DecodingPolynomial poly_from_json(const std::string& text);

std::string certificate_to_json(const decpoly::M2Certificate& cert);
decpoly::M2Certificate certificate_from_json(const std::string& text);

/// Accepts either a bare polynomial document or a certificate document
/// carrying a "poly" member; returns the polynomial.
decpoly::DecodingPolynomial poly_from_artifact(const std::string& text);

std::string family_to_json(const matchfam::MatchingFamily& fam);
matchfam::MatchingFamily family_from_json(const std::string& text);

std::string scan_to_json(const modulus::MersenneScan& scan);

/// Code spec = matching family + decoding polynomial; loading rebuilds the
/// spec through make_spec, so every stored spec is revalidated.
std::string spec_to_json(const codec::CodeSpec& spec);
codec::CodeSpecPtr spec_from_json(const std::string& text);

std::string plan_to_json(const compose::QueryPlan& plan);

std::string transcript_to_json(const pir::PirTranscript& tr);

}  // namespace ldcforge::json_io
