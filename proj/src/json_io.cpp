#include "ldcforge/json_io.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <string>
#include <vector>

#include "json.hpp"

#include "ldcforge/util.hpp"

namespace ldcforge::json_io {

namespace {

using njson = nlohmann::ordered_json;

std::string dump(const njson& j) { return j.dump(2) + "\n"; }

njson parse(const std::string& text) {
  try {
    return njson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw AuxInvalid(std::string("JSON parse error: ") + e.what());
  }
}

const njson& member(const njson& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw AuxInvalid(std::string("missing JSON key '") + key + "'");
  }
  return obj.at(key);
}

uint64_t as_u64(const njson& obj, const char* key) {
  const njson& v = member(obj, key);
  if (!v.is_number_unsigned()) {
    throw AuxInvalid(std::string("JSON key '") + key + "' must be a non-negative integer");
  }
  return v.get<uint64_t>();
}

std::string as_str(const njson& obj, const char* key) {
  const njson& v = member(obj, key);
  if (!v.is_string()) throw AuxInvalid(std::string("JSON key '") + key + "' must be a string");
  return v.get<std::string>();
}

uint64_t decimal_u64(const njson& obj, const char* key) {
  std::string s = as_str(obj, key);
  if (s.empty() || s.size() > 20 || s.find_first_not_of("0123456789") != std::string::npos) {
    throw AuxInvalid(std::string("JSON key '") + key + "' must be a decimal string");
  }
  errno = 0;
  char* end = nullptr;
  uint64_t v = std::strtoull(s.c_str(), &end, 10);
  if (errno != 0 || end != s.c_str() + s.size()) {
    throw AuxInvalid(std::string("JSON key '") + key + "' overflows 64 bits");
  }
  return v;
}

njson field_obj(const algebra::FieldSpec& f) {
  njson j;
  j["t"] = f.t;
  j["modulus_hex"] = util::words_to_hex(f.modulus, static_cast<size_t>(f.t) + 1);
  return j;
}

algebra::FieldPtr field_from_obj(const njson& j) {
  uint64_t t = as_u64(j, "t");
  if (t == 0 || t > (1u << 20)) throw AuxInvalid("field degree t out of range");
  std::string hex = as_str(j, "modulus_hex");
  std::vector<uint64_t> words;
  try {
    words = util::hex_to_words(hex, static_cast<size_t>(t) + 1);
  } catch (const Error& e) {
    throw AuxInvalid(std::string("bad modulus_hex: ") + e.what());
  }
  return algebra::field_create(static_cast<uint32_t>(t), std::move(words));
}

algebra::FieldElement element_from_hex(const algebra::FieldPtr& f, const njson& obj,
                                       const char* key) {
  try {
    return algebra::fe_from_hex(f, as_str(obj, key));
  } catch (const AuxInvalid&) {
    throw;
  } catch (const Error& e) {
    throw AuxInvalid(std::string("bad element hex in '") + key + "': " + e.what());
  }
}

njson poly_obj(const decpoly::DecodingPolynomial& p) {
  njson j;
  j["m"] = std::to_string(p.m);
  j["k"] = p.terms.size();
  j["source"] = p.source;
  j["field"] = field_obj(*p.field);
  j["gamma_hex"] = algebra::fe_to_hex(p.gamma);
  njson terms = njson::array();
  for (const decpoly::Term& t : p.terms) {
    njson term;
    term["exp"] = t.exp;
    term["coef_hex"] = algebra::fe_to_hex(t.coef);
    terms.push_back(std::move(term));
  }
  j["terms"] = std::move(terms);
  return j;
}

decpoly::DecodingPolynomial poly_from_obj(const njson& j) {
  decpoly::DecodingPolynomial p;
  p.m = decimal_u64(j, "m");
  p.source = as_str(j, "source");
  p.field = field_from_obj(member(j, "field"));
  p.gamma = element_from_hex(p.field, j, "gamma_hex");
  const njson& terms = member(j, "terms");
  if (!terms.is_array() || terms.empty()) throw AuxInvalid("'terms' must be a non-empty array");
  for (const njson& t : terms) {
    decpoly::Term term;
    term.exp = as_u64(t, "exp");
    if (term.exp >= p.m) throw AuxInvalid("term exponent not reduced mod m");
    term.coef = element_from_hex(p.field, t, "coef_hex");
    p.terms.push_back(std::move(term));
  }
  for (size_t i = 1; i < p.terms.size(); ++i) {
    if (p.terms[i - 1].exp >= p.terms[i].exp) {
      throw AuxInvalid("term exponents must be strictly increasing");
    }
  }
  if (j.contains("k") && as_u64(j, "k") != p.terms.size()) {
    throw AuxInvalid("'k' does not match the term count");
  }
  return p;
}

}  // namespace

std::string verdict_name(decpoly::Verdict v) {
  switch (v) {
    case decpoly::Verdict::member: return "member";
    case decpoly::Verdict::non_member: return "non-member";
    case decpoly::Verdict::unknown: return "unknown";
  }
  throw InternalError("unhandled verdict");
}

decpoly::Verdict verdict_from_name(const std::string& s) {
  if (s == "member") return decpoly::Verdict::member;
  if (s == "non-member") return decpoly::Verdict::non_member;
  if (s == "unknown") return decpoly::Verdict::unknown;
  throw AuxInvalid("unknown verdict '" + s + "'");
}

std::string poly_to_json(const decpoly::DecodingPolynomial& p) { return dump(poly_obj(p)); }

decpoly::DecodingPolynomial poly_from_json(const std::string& text) {
  return poly_from_obj(parse(text));
}

std::string certificate_to_json(const decpoly::M2Certificate& cert) {
  njson j;
  j["m"] = std::to_string(cert.m);
  j["verdict"] = verdict_name(cert.verdict);
  if (cert.verdict == decpoly::Verdict::member) {
    j["alpha"] = cert.alpha;
    j["c"] = cert.c;
    j["beta"] = cert.beta;
    j["d"] = cert.d;
    j["u"] = cert.u;
    j["v"] = cert.v;
    if (cert.a) j["a_hex"] = algebra::fe_to_hex(*cert.a);
    if (cert.b) j["b_hex"] = algebra::fe_to_hex(*cert.b);
    if (cert.field) j["field"] = field_obj(*cert.field);
    if (cert.field) j["gamma_hex"] = algebra::fe_to_hex(cert.gamma);
    if (cert.poly) j["poly"] = poly_obj(*cert.poly);
  }
  j["admissible_reps"] = cert.admissible_reps;
  if (!cert.note.empty()) j["note"] = cert.note;
  return dump(j);
}

decpoly::M2Certificate certificate_from_json(const std::string& text) {
  njson j = parse(text);
  decpoly::M2Certificate cert;
  cert.m = decimal_u64(j, "m");
  cert.verdict = verdict_from_name(as_str(j, "verdict"));
  if (j.contains("admissible_reps")) cert.admissible_reps = as_u64(j, "admissible_reps");
  if (j.contains("note")) cert.note = as_str(j, "note");
  if (cert.verdict == decpoly::Verdict::member) {
    cert.alpha = as_u64(j, "alpha");
    cert.beta = as_u64(j, "beta");
    uint64_t c = as_u64(j, "c"), d = as_u64(j, "d");
    if (c > UINT32_MAX || d > UINT32_MAX) throw AuxInvalid("coset shift out of range");
    cert.c = static_cast<uint32_t>(c);
    cert.d = static_cast<uint32_t>(d);
    cert.u = as_u64(j, "u");
    cert.v = as_u64(j, "v");
    cert.field = field_from_obj(member(j, "field"));
    cert.gamma = element_from_hex(cert.field, j, "gamma_hex");
    if (j.contains("a_hex")) cert.a = element_from_hex(cert.field, j, "a_hex");
    if (j.contains("b_hex")) cert.b = element_from_hex(cert.field, j, "b_hex");
    if (j.contains("poly")) {
      cert.poly = poly_from_obj(member(j, "poly"));
      if (cert.poly->m != cert.m) throw AuxInvalid("certificate and polynomial moduli differ");
    }
  }
  return cert;
}

decpoly::DecodingPolynomial poly_from_artifact(const std::string& text) {
  njson j = parse(text);
  if (j.is_object() && j.contains("verdict")) {
    if (!j.contains("poly")) {
      throw AuxInvalid("certificate with verdict '" + as_str(j, "verdict") +
                       "' carries no polynomial");
    }
    return poly_from_obj(member(j, "poly"));
  }
  return poly_from_obj(j);
}

std::string family_to_json(const matchfam::MatchingFamily& fam) {
  njson j;
  j["m"] = fam.m;
  j["h"] = fam.h;
  j["n"] = fam.n();
  j["set"] = fam.target_set;
  j["vectors"] = fam.vectors;
  return dump(j);
}

matchfam::MatchingFamily family_from_json(const std::string& text) {
  njson j = parse(text);
  matchfam::MatchingFamily fam;
  fam.m = as_u64(j, "m");
  fam.h = as_u64(j, "h");
  if (fam.m < 3 || fam.h == 0 || fam.h > (1u << 20)) throw AuxInvalid("family m or h out of range");
  const njson& set = member(j, "set");
  const njson& vectors = member(j, "vectors");
  if (!set.is_array() || set.empty() || !vectors.is_array() || vectors.empty()) {
    throw AuxInvalid("'set' and 'vectors' must be non-empty arrays");
  }
  for (const njson& s : set) {
    if (!s.is_number_unsigned() || s.get<uint64_t>() >= fam.m) {
      throw AuxInvalid("'set' entries must be residues in [0, m)");
    }
    fam.target_set.push_back(s.get<uint64_t>());
  }
  if (!std::is_sorted(fam.target_set.begin(), fam.target_set.end()) ||
      std::adjacent_find(fam.target_set.begin(), fam.target_set.end()) != fam.target_set.end()) {
    throw AuxInvalid("'set' must be strictly increasing");
  }
  for (const njson& row : vectors) {
    if (!row.is_array() || row.size() != fam.h) {
      throw AuxInvalid("every vector must have exactly h coordinates");
    }
    std::vector<uint64_t> v;
    for (const njson& x : row) {
      if (!x.is_number_unsigned() || x.get<uint64_t>() >= fam.m) {
        throw AuxInvalid("vector coordinates must lie in [0, m)");
      }
      v.push_back(x.get<uint64_t>());
    }
    fam.vectors.push_back(std::move(v));
  }
  if (j.contains("n") && as_u64(j, "n") != fam.vectors.size()) {
    throw AuxInvalid("'n' does not match the vector count");
  }
  return fam;
}

namespace {

const char* primality_name(intfactor::Primality p) {
  switch (p) {
    case intfactor::Primality::proven_prime: return "proven";
    case intfactor::Primality::probable_prime: return "probable";
    case intfactor::Primality::composite: return "composite";
  }
  throw InternalError("unhandled primality");
}

}  // namespace

std::string scan_to_json(const modulus::MersenneScan& scan) {
  njson rows = njson::array();
  for (const modulus::MersenneRow& r : scan.rows) {
    njson row;
    row["t"] = r.t;
    row["m"] = r.m.get_str();
    row["p"] = r.p.get_str();
    row["q"] = r.q.get_str();
    row["p_primality"] = primality_name(r.p_primality);
    row["q_primality"] = primality_name(r.q_primality);
    rows.push_back(std::move(row));
  }
  njson skipped = njson::array();
  for (const modulus::MersenneSkip& s : scan.skipped) {
    njson row;
    row["t"] = s.t;
    row["reason"] = s.reason;
    skipped.push_back(std::move(row));
  }
  njson j;
  j["rows"] = std::move(rows);
  j["skipped"] = std::move(skipped);
  return dump(j);
}

std::string spec_to_json(const codec::CodeSpec& spec) {
  njson j;
  j["family"] = parse(family_to_json(spec.family));
  j["poly"] = poly_obj(spec.poly);
  j["n"] = spec.n;
  j["big_n"] = spec.big_n;
  j["k"] = spec.k();
  return dump(j);
}

codec::CodeSpecPtr spec_from_json(const std::string& text) {
  njson j = parse(text);
  matchfam::MatchingFamily fam = family_from_json(member(j, "family").dump());
  decpoly::DecodingPolynomial poly = poly_from_obj(member(j, "poly"));
  codec::CodeSpecPtr spec = codec::make_spec(fam, poly);
  if (j.contains("n") && as_u64(j, "n") != spec->n) {
    throw AuxInvalid("'n' does not match the family size");
  }
  if (j.contains("big_n") && as_u64(j, "big_n") != spec->big_n) {
    throw AuxInvalid("'big_n' does not match m^h");
  }
  return spec;
}

std::string plan_to_json(const compose::QueryPlan& plan) {
  njson recipe = njson::array();
  for (const compose::PlanBlock& b : plan.recipe) {
    njson row;
    row["kind"] = b.kind;
    row["modulus"] = std::to_string(b.modulus);
    row["primes"] = b.primes;
    row["queries"] = b.queries.get_str();
    recipe.push_back(std::move(row));
  }
  njson j;
  j["r"] = plan.r;
  j["recipe"] = std::move(recipe);
  j["k_bound"] = plan.k_bound.get_str();
  return dump(j);
}

std::string transcript_to_json(const pir::PirTranscript& tr) {
  njson answers = njson::array();
  for (const algebra::FieldElement& a : tr.answers) answers.push_back(algebra::fe_to_hex(a));
  njson j;
  j["i"] = tr.i;
  j["aux"] = tr.aux;
  j["queries"] = tr.queries;
  j["answers"] = std::move(answers);
  j["output"] = tr.output;
  j["comm_bits"] = tr.comm_bits;
  j["wire_bits"] = tr.wire_bits;
  return dump(j);
}

}  // namespace ldcforge::json_io
