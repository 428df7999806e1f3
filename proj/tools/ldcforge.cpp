#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ldcforge/codec.hpp"
#include "ldcforge/compose.hpp"
#include "ldcforge/decpoly.hpp"
#include "ldcforge/errors.hpp"
#include "ldcforge/json_io.hpp"
#include "ldcforge/matchfam.hpp"
#include "ldcforge/modulus.hpp"
#include "ldcforge/pir.hpp"
#include "ldcforge/util.hpp"

namespace {

using namespace ldcforge;
using njson = nlohmann::ordered_json;

/// "750ms", "30s", "5m", or a bare number of seconds.
std::chrono::milliseconds parse_budget(const std::string& s) {
  if (s.empty()) return std::chrono::milliseconds(0);
  size_t pos = s.find_first_not_of("0123456789");
  if (pos == 0) throw AuxInvalid("bad budget '" + s + "'");
  uint64_t value = std::stoull(s.substr(0, pos));
  std::string unit = pos == std::string::npos ? "s" : s.substr(pos);
  if (unit == "ms") return std::chrono::milliseconds(value);
  if (unit == "s") return std::chrono::milliseconds(value * 1000);
  if (unit == "m") return std::chrono::milliseconds(value * 60000);
  throw AuxInvalid("bad budget unit '" + unit + "'; use ms, s, or m");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw AuxInvalid("cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (!in.good() && !in.eof()) throw AuxInvalid("read failure on '" + path + "'");
  return text;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw AuxInvalid("cannot create '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out.good()) throw AuxInvalid("write failure on '" + path + "'");
}

/// JSON goes to stdout and, when requested, to a file; prose goes to stderr.
void emit(const std::string& json_text, const std::string& out_path) {
  std::fputs(json_text.c_str(), stdout);
  if (!out_path.empty()) write_file(out_path, json_text);
}

algebra::FieldElement random_element(const algebra::FieldPtr& f, std::mt19937_64& rng) {
  std::vector<uint64_t> w(f->words());
  for (uint64_t& x : w) x = rng();
  uint32_t top = f->t % 64;
  if (top != 0) w.back() &= (uint64_t{1} << top) - 1;
  return algebra::FieldElement(f, std::move(w));
}

std::string message_json(const std::vector<algebra::FieldElement>& x) {
  njson j;
  j["n"] = x.size();
  njson arr = njson::array();
  for (const auto& e : x) arr.push_back(algebra::fe_to_hex(e));
  j["elements_hex"] = std::move(arr);
  return j.dump(2) + "\n";
}

std::vector<algebra::FieldElement> message_from_json(const codec::CodeSpecPtr& spec,
                                                     const std::string& text) {
  njson j;
  try {
    j = njson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw AuxInvalid(std::string("JSON parse error: ") + e.what());
  }
  if (!j.contains("elements_hex") || !j["elements_hex"].is_array()) {
    throw AuxInvalid("message file needs an 'elements_hex' array");
  }
  std::vector<algebra::FieldElement> x;
  for (const auto& s : j["elements_hex"]) {
    if (!s.is_string()) throw AuxInvalid("'elements_hex' entries must be strings");
    x.push_back(algebra::fe_from_hex(spec->field, s.get<std::string>()));
  }
  return x;
}

// ---- scan-mersenne ----

struct ScanOpts {
  uint32_t t_min = 2, t_max = 127;
  std::string budget = "30s";
  std::string out;
};

int run_scan(const ScanOpts& o) {
  modulus::MersenneScan scan = modulus::scan_mersenne(o.t_min, o.t_max, parse_budget(o.budget));
  emit(json_io::scan_to_json(scan), o.out);
  std::fprintf(stderr, "scanned prime t in [%u, %u]: %zu usable rows, %zu skipped\n", o.t_min,
               o.t_max, scan.rows.size(), scan.skipped.size());
  for (const auto& s : scan.skipped) {
    std::fprintf(stderr, "  skipped t=%u: %s\n", s.t, s.reason.c_str());
  }
  return 0;
}

// ---- m2 check / poly find ----

struct M2Opts {
  uint64_t m = 0;
  std::string budget;
  unsigned shards = 0;
  bool brute = false;
  bool lagrange = false;  // poly find only
  std::string out;
};

int emit_certificate(const decpoly::M2Certificate& cert, const std::string& out) {
  emit(json_io::certificate_to_json(cert), out);
  switch (cert.verdict) {
    case decpoly::Verdict::member:
      std::fprintf(stderr, "m=%llu: member (u=%llu, v=%llu, %zu-term polynomial)\n",
                   (unsigned long long)cert.m, (unsigned long long)cert.u,
                   (unsigned long long)cert.v, cert.poly ? cert.poly->k() : 0);
      return 0;
    case decpoly::Verdict::non_member:
      std::fprintf(stderr, "m=%llu: non-member (%llu admissible representatives examined)\n",
                   (unsigned long long)cert.m, (unsigned long long)cert.admissible_reps);
      return 1;
    case decpoly::Verdict::unknown:
      std::fprintf(stderr, "m=%llu: unknown: %s\n", (unsigned long long)cert.m,
                   cert.note.c_str());
      return 2;
  }
  throw InternalError("unhandled verdict");
}

int run_m2(const M2Opts& o) {
  decpoly::SearchOptions opts;
  opts.budget = parse_budget(o.budget);
  opts.shards = o.shards;
  decpoly::M2Certificate cert =
      o.brute ? decpoly::brute_force_m2(o.m, opts) : decpoly::collision_search(o.m, opts);
  return emit_certificate(cert, o.out);
}

int run_poly_find(const M2Opts& o) {
  if (o.lagrange) {
    decpoly::DecodingPolynomial p = decpoly::lagrange_polynomial(o.m);
    emit(json_io::poly_to_json(p), o.out);
    std::fprintf(stderr, "m=%llu: %zu-term interpolation polynomial\n", (unsigned long long)o.m,
                 p.k());
    return 0;
  }
  return run_m2(o);
}

// ---- poly verify ----

struct VerifyOpts {
  std::string file;
};

int run_poly_verify(const VerifyOpts& o) {
  decpoly::DecodingPolynomial p = json_io::poly_from_artifact(read_file(o.file));
  bool valid = decpoly::verify_decoding_polynomial(p);
  njson j;
  j["m"] = std::to_string(p.m);
  j["k"] = p.k();
  j["source"] = p.source;
  j["valid"] = valid;
  emit(j.dump(2) + "\n", "");
  std::fprintf(stderr, "m=%llu: %zu-term '%s' polynomial is %s\n", (unsigned long long)p.m, p.k(),
               p.source.c_str(), valid ? "valid" : "INVALID");
  return valid ? 0 : 1;
}

// ---- family ----

struct FamilyOpts {
  uint64_t m = 0;
  uint64_t h = 0;
  uint64_t n = 0;
  uint64_t seed = 0;
  uint64_t draws = 10000000;
  std::string file;
  std::string out;
};

int emit_family(const matchfam::MatchingFamily& fam, const std::string& out) {
  emit(json_io::family_to_json(fam), out);
  std::fprintf(stderr, "m=%llu: %zu matching vectors in %zu coordinates\n",
               (unsigned long long)fam.m, fam.n(), fam.h);
  return 0;
}

int run_family_gram(const FamilyOpts& o) {
  return emit_family(matchfam::gram_family(o.m, o.n), o.out);
}

int run_family_greedy(const FamilyOpts& o) {
  matchfam::MatchingFamily fam = matchfam::greedy_search(o.m, o.h, o.n, o.seed, o.draws);
  int rc = emit_family(fam, o.out);
  if (fam.n() < o.n) {
    std::fprintf(stderr, "draw budget %llu reached before %llu vectors\n",
                 (unsigned long long)o.draws, (unsigned long long)o.n);
  }
  return rc;
}

int run_family_verify(const FamilyOpts& o) {
  matchfam::MatchingFamily fam = json_io::family_from_json(read_file(o.file));
  matchfam::MatchingCheck chk = matchfam::verify_matching(fam);
  njson j;
  j["m"] = fam.m;
  j["h"] = fam.h;
  j["n"] = fam.n();
  j["ok"] = chk.ok;
  if (!chk.ok) {
    j["i"] = chk.i;
    j["j"] = chk.j;
    j["value"] = chk.value;
    j["reason"] = chk.reason;
  }
  emit(j.dump(2) + "\n", o.out);
  if (chk.ok) {
    std::fprintf(stderr, "family verifies: n=%zu vectors\n", fam.n());
  } else {
    std::fprintf(stderr, "family INVALID at pair (%zu, %zu): %s (value %llu)\n", chk.i, chk.j,
                 chk.reason.c_str(), (unsigned long long)chk.value);
  }
  return chk.ok ? 0 : 1;
}

// ---- ldc encode / decode / corrupt-test ----

struct LdcOpts {
  std::string spec;
  std::string message;      // input message JSON
  std::string message_out;  // where to record a generated message
  bool random = false;
  uint64_t seed = 0;
  uint64_t i = 0;
  std::string in;
  std::string out;
  double delta = 0.01;
  uint64_t trials = 1000;
  std::string policy = "flip";
};

std::vector<algebra::FieldElement> obtain_message(const codec::CodeSpecPtr& spec,
                                                  const LdcOpts& o) {
  if (o.message.empty() == !o.random) {
    throw AuxInvalid("provide exactly one of --message or --random");
  }
  std::vector<algebra::FieldElement> x;
  if (o.random) {
    std::mt19937_64 rng(o.seed);
    for (uint64_t j = 0; j < spec->n; ++j) x.push_back(random_element(spec->field, rng));
  } else {
    x = message_from_json(spec, read_file(o.message));
  }
  if (!o.message_out.empty()) write_file(o.message_out, message_json(x));
  return x;
}

int run_ldc_encode(const LdcOpts& o) {
  codec::CodeSpecPtr spec = json_io::spec_from_json(read_file(o.spec));
  std::vector<algebra::FieldElement> x = obtain_message(spec, o);
  codec::Codeword cw = codec::encode(spec, x);
  if (o.out.empty()) throw AuxInvalid("--out is required for encode");
  codec::save_codeword(cw, o.out);
  njson j;
  j["big_n"] = spec->big_n;
  j["element_bytes"] = (spec->field->t + 7) / 8;
  j["out"] = o.out;
  emit(j.dump(2) + "\n", "");
  std::fprintf(stderr, "encoded %llu positions into %s\n", (unsigned long long)spec->big_n,
               o.out.c_str());
  return 0;
}

int run_ldc_decode(const LdcOpts& o) {
  codec::CodeSpecPtr spec = json_io::spec_from_json(read_file(o.spec));
  codec::Codeword cw = codec::load_codeword(spec, o.in);
  std::mt19937_64 rng(o.seed);
  if (o.i != 0) {
    algebra::FieldElement e = codec::local_decode(cw, o.i, rng);
    njson j;
    j["i"] = o.i;
    j["element_hex"] = algebra::fe_to_hex(e);
    emit(j.dump(2) + "\n", o.out);
    std::fprintf(stderr, "decoded position %llu\n", (unsigned long long)o.i);
  } else {
    std::vector<algebra::FieldElement> x = codec::decode_message(cw, rng);
    emit(message_json(x), o.out);
    std::fprintf(stderr, "decoded all %zu positions\n", x.size());
  }
  return 0;
}

int run_ldc_corrupt_test(const LdcOpts& o) {
  codec::CodeSpecPtr spec = json_io::spec_from_json(read_file(o.spec));
  std::vector<algebra::FieldElement> x = obtain_message(spec, o);
  codec::CorruptionPlan plan;
  plan.delta = o.delta;
  plan.seed = o.seed;
  if (o.policy == "flip") {
    plan.policy = codec::CorruptionPolicy::flip_random_nonequal;
  } else if (o.policy == "zero") {
    plan.policy = codec::CorruptionPolicy::set_zero;
  } else {
    throw AuxInvalid("--policy must be 'flip' or 'zero'");
  }
  codec::SuccessReport rep = codec::success_rate(spec, x, plan, o.trials, o.seed + 1);
  double min_rate = 1.0;
  for (double r : rep.per_index) min_rate = std::min(min_rate, r);
  njson j;
  j["delta"] = o.delta;
  j["policy"] = o.policy;
  j["trials"] = rep.trials;
  j["corrupted"] = rep.corrupted;
  j["floor"] = rep.floor;
  j["success_min"] = min_rate;
  j["success_per_index"] = rep.per_index;
  emit(j.dump(2) + "\n", o.out);
  std::fprintf(stderr, "corrupted %llu of %llu positions; worst success %.4f (floor 1-k*delta = %.4f)\n",
               (unsigned long long)rep.corrupted, (unsigned long long)spec->big_n, min_rate,
               rep.floor);
  return 0;
}

// ---- compose / plan ----

struct ComposeOpts {
  std::string left, right, out;
  std::string root_budget = "10s";
};

int run_compose(const ComposeOpts& o) {
  decpoly::DecodingPolynomial p1 = json_io::poly_from_artifact(read_file(o.left));
  decpoly::DecodingPolynomial p2 = json_io::poly_from_artifact(read_file(o.right));
  decpoly::SearchOptions opts;
  opts.root_budget = parse_budget(o.root_budget);
  decpoly::DecodingPolynomial c = compose::compose(p1, p2, opts);
  emit(json_io::poly_to_json(c), o.out);
  std::fprintf(stderr, "composed m=%llu*%llu=%llu over GF(2^%u): %zu terms (bound %zu)\n",
               (unsigned long long)p1.m, (unsigned long long)p2.m, (unsigned long long)c.m,
               c.field->t, c.k(), p1.k() * p2.k());
  return 0;
}

struct PlanOpts {
  uint32_t r = 0;
  std::string inventory;
  std::vector<uint64_t> members;
  bool pool = false;
  std::string out;
};

int run_plan(const PlanOpts& o) {
  std::vector<uint64_t> members = o.members;
  if (!o.inventory.empty()) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(o.inventory)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
      decpoly::M2Certificate cert;
      try {
        cert = json_io::certificate_from_json(read_file(path.string()));
      } catch (const Error& e) {
        std::fprintf(stderr, "  ignoring %s: %s\n", path.string().c_str(), e.what());
        continue;
      }
      if (cert.verdict != decpoly::Verdict::member || !cert.poly ||
          !decpoly::verify_decoding_polynomial(*cert.poly)) {
        std::fprintf(stderr, "  ignoring %s: not a verified member certificate\n",
                     path.string().c_str());
        continue;
      }
      members.push_back(cert.m);
    }
  }
  compose::QueryPlan plan = compose::plan_queries(o.r, members, o.pool);
  emit(json_io::plan_to_json(plan), o.out);
  std::fprintf(stderr, "r=%u: %zu blocks, k_bound = %s\n", plan.r, plan.recipe.size(),
               plan.k_bound.get_str().c_str());
  return 0;
}

// ---- pir simulate ----

struct PirOpts {
  std::string spec, db, out;
  uint64_t i = 0;
  uint64_t seed = 0;
};

int run_pir_simulate(const PirOpts& o) {
  codec::CodeSpecPtr spec = json_io::spec_from_json(read_file(o.spec));
  std::string raw = read_file(o.db);  // one byte per database bit
  std::vector<uint8_t> bits(raw.begin(), raw.end());
  pir::PirScheme scheme = pir::make_scheme(spec, bits.size());
  pir::PirTranscript tr = pir::simulate(scheme, bits, o.i, o.seed);
  emit(json_io::transcript_to_json(tr), o.out);
  std::fprintf(stderr, "bit %llu = %d via %llu servers; comm_bits=%llu, wire_bits=%llu\n",
               (unsigned long long)tr.i, tr.output, (unsigned long long)scheme.servers,
               (unsigned long long)tr.comm_bits, (unsigned long long)tr.wire_bits);
  return 0;
}

// ---- table-verify ----

struct TableOpts {
  uint32_t t_max = 127;
};

struct ReferenceRow {
  uint64_t m;
  uint32_t t;
  uint64_t modulus_word;
  struct {
    uint64_t exp;
    const char* coef_hex;
  } terms[3];
};

// Known-good three-monomial rows for the two smallest full-field moduli,
// coefficient values materialized in the stated modulus polynomials.
const ReferenceRow kReferenceRows[] = {
    {2047, 11, 0x805, {{0, "50e"}, {27, "7a5"}, {29, "2aa"}}},
    {8388607, 23, 0x800021, {{0, "51fc2d"}, {3363, "117d5a"}, {3526, "408176"}}},
};

int run_table_verify(const TableOpts& o) {
  bool all_ok = true;
  njson polys = njson::array();
  for (const ReferenceRow& row : kReferenceRows) {
    algebra::FieldPtr f = algebra::field_create(row.t, {row.modulus_word});
    decpoly::DecodingPolynomial p;
    p.m = row.m;
    p.field = f;
    p.gamma = algebra::fe_x(f);
    p.source = "three-monomial";
    for (const auto& term : row.terms) {
      p.terms.push_back({term.exp, algebra::fe_from_hex(f, term.coef_hex)});
    }
    bool valid = decpoly::verify_decoding_polynomial(p);
    all_ok = all_ok && valid;
    njson j;
    j["m"] = std::to_string(row.m);
    j["t"] = row.t;
    j["valid"] = valid;
    polys.push_back(std::move(j));
    std::fprintf(stderr, "reference polynomial m=%llu: %s\n", (unsigned long long)row.m,
                 valid ? "valid" : "INVALID");
  }

  njson rows = njson::array();
  size_t checked = 0;
  for (const modulus::KnownMersenneRow& known : modulus::known_mersenne_rows()) {
    if (known.t > o.t_max) continue;
    mpz_class m = (mpz_class(1) << known.t) - 1;
    mpz_class p(known.p);
    mpz_class q = m / p;
    bool ok = m % p == 0 && p < q && intfactor::classify(p) != intfactor::Primality::composite &&
              intfactor::classify(q) != intfactor::Primality::composite;
    all_ok = all_ok && ok;
    ++checked;
    njson j;
    j["t"] = known.t;
    j["p"] = p.get_str();
    j["q"] = q.get_str();
    j["ok"] = ok;
    rows.push_back(std::move(j));
    if (!ok) std::fprintf(stderr, "row t=%u FAILED divisibility or primality\n", known.t);
  }
  njson j;
  j["polynomials"] = std::move(polys);
  j["rows"] = std::move(rows);
  j["ok"] = all_ok;
  emit(j.dump(2) + "\n", "");
  std::fprintf(stderr, "%zu stored rows with t <= %u re-checked: %s\n", checked, o.t_max,
               all_ok ? "all good" : "FAILURES");
  return all_ok ? 0 : 1;
}

CLI::App* sub(CLI::App* parent, const std::string& name, const std::string& desc) {
  CLI::App* c = parent->add_subcommand(name, desc);
  c->set_help_flag("--help", "print help");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ldcforge: sparse decoding polynomials, matching vector families, and the"
               " locally decodable codes they drive"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  int exit_code = 0;

  ScanOpts scan_opts;
  auto reg_scan = [&](CLI::App* c) {
    c->add_option("--t-min", scan_opts.t_min, "smallest exponent")->capture_default_str();
    c->add_option("--t-max", scan_opts.t_max, "largest exponent")->capture_default_str();
    c->add_option("--budget", scan_opts.budget, "factoring budget per exponent (ms/s/m)")
        ->capture_default_str();
    c->add_option("--out", scan_opts.out, "also write the JSON report here");
    c->callback([&] { exit_code = run_scan(scan_opts); });
  };
  reg_scan(sub(&app, "scan-mersenne", "classify 2^t - 1 for prime exponents t"));

  M2Opts m2_opts;
  auto reg_m2_common = [&](CLI::App* c) {
    c->add_option("m", m2_opts.m, "odd squarefree two-prime modulus")->required();
    c->add_option("--budget", m2_opts.budget, "search budget (ms/s/m); empty = unlimited");
    c->add_option("--shards", m2_opts.shards, "enumeration shards (0 = worker count)");
    c->add_flag("--brute", m2_opts.brute, "definition-level pair scan instead of the"
                                          " collision search");
    c->add_option("--out", m2_opts.out, "also write the certificate here");
  };
  auto* m2 = sub(&app, "m2", "membership decisions for the three-monomial class");
  m2->require_subcommand(1);
  auto reg_m2check = [&](CLI::App* c) {
    reg_m2_common(c);
    c->callback([&] { exit_code = run_m2(m2_opts); });
  };
  reg_m2check(sub(m2, "check", "decide membership and emit a certificate"));
  reg_m2check(sub(&app, "m2-check", "decide membership and emit a certificate"));

  auto* poly = sub(&app, "poly", "decoding-polynomial search and verification");
  poly->require_subcommand(1);
  auto reg_polyfind = [&](CLI::App* c) {
    reg_m2_common(c);
    c->add_flag("--lagrange", m2_opts.lagrange, "emit the dense interpolation polynomial"
                                                " instead of searching");
    c->callback([&] { exit_code = run_poly_find(m2_opts); });
  };
  reg_polyfind(sub(poly, "find", "search for a sparse decoding polynomial"));
  reg_polyfind(sub(&app, "poly-find", "search for a sparse decoding polynomial"));

  VerifyOpts verify_opts;
  auto reg_polyverify = [&](CLI::App* c) {
    c->add_option("file", verify_opts.file, "polynomial or certificate JSON")->required();
    c->callback([&] { exit_code = run_poly_verify(verify_opts); });
  };
  reg_polyverify(sub(poly, "verify", "re-check a stored polynomial"));
  reg_polyverify(sub(&app, "poly-verify", "re-check a stored polynomial"));

  FamilyOpts fam_opts;
  auto* family = sub(&app, "family", "matching vector families");
  family->require_subcommand(1);
  auto* fam_gram = sub(family, "gram", "diagonalize the target Gram matrix");
  fam_gram->add_option("--m", fam_opts.m, "modulus")->required();
  fam_gram->add_option("--n", fam_opts.n, "family size")->required();
  fam_gram->add_option("--out", fam_opts.out, "also write the family here");
  fam_gram->callback([&] { exit_code = run_family_gram(fam_opts); });
  auto* fam_greedy = sub(family, "greedy", "randomized growth at fixed h");
  fam_greedy->add_option("--m", fam_opts.m, "modulus")->required();
  fam_greedy->add_option("--h", fam_opts.h, "coordinate count")->required();
  fam_greedy->add_option("--n", fam_opts.n, "target family size")->required();
  fam_greedy->add_option("--seed", fam_opts.seed, "draw seed")->capture_default_str();
  fam_greedy->add_option("--draws", fam_opts.draws, "draw budget")->capture_default_str();
  fam_greedy->add_option("--out", fam_opts.out, "also write the family here");
  fam_greedy->callback([&] { exit_code = run_family_greedy(fam_opts); });
  auto* fam_verify = sub(family, "verify", "re-check a stored family");
  fam_verify->add_option("file", fam_opts.file, "family JSON")->required();
  fam_verify->add_option("--out", fam_opts.out, "also write the check result here");
  fam_verify->callback([&] { exit_code = run_family_verify(fam_opts); });

  LdcOpts ldc_opts;
  auto* ldc = sub(&app, "ldc", "encode, decode, and stress the code");
  ldc->require_subcommand(1);
  auto reg_message_source = [&](CLI::App* c) {
    c->add_option("--spec", ldc_opts.spec, "code spec JSON")->required();
    c->add_option("--message", ldc_opts.message, "message JSON ('elements_hex' array)");
    c->add_flag("--random", ldc_opts.random, "draw a uniform message from --seed");
    c->add_option("--message-out", ldc_opts.message_out, "record the message used");
    c->add_option("--seed", ldc_opts.seed, "master seed")->capture_default_str();
  };
  auto reg_encode = [&](CLI::App* c) {
    reg_message_source(c);
    c->add_option("--out", ldc_opts.out, "codeword output path")->required();
    c->callback([&] { exit_code = run_ldc_encode(ldc_opts); });
  };
  reg_encode(sub(ldc, "encode", "materialize a codeword"));
  reg_encode(sub(&app, "ldc-encode", "materialize a codeword"));
  auto reg_decode = [&](CLI::App* c) {
    c->add_option("--spec", ldc_opts.spec, "code spec JSON")->required();
    c->add_option("--in", ldc_opts.in, "codeword file")->required();
    c->add_option("--i", ldc_opts.i, "single 1-based position (0 = whole message)")
        ->capture_default_str();
    c->add_option("--seed", ldc_opts.seed, "decoder randomness seed")->capture_default_str();
    c->add_option("--out", ldc_opts.out, "also write the decoded JSON here");
    c->callback([&] { exit_code = run_ldc_decode(ldc_opts); });
  };
  reg_decode(sub(ldc, "decode", "locally decode a stored codeword"));
  reg_decode(sub(&app, "ldc-decode", "locally decode a stored codeword"));
  auto reg_corrupt = [&](CLI::App* c) {
    reg_message_source(c);
    c->add_option("--delta", ldc_opts.delta, "corrupted fraction")->capture_default_str();
    c->add_option("--trials", ldc_opts.trials, "decode trials per position")
        ->capture_default_str();
    c->add_option("--policy", ldc_opts.policy, "'flip' or 'zero'")->capture_default_str();
    c->add_option("--out", ldc_opts.out, "also write the report here");
    c->callback([&] { exit_code = run_ldc_corrupt_test(ldc_opts); });
  };
  reg_corrupt(sub(ldc, "corrupt-test", "measure decode success under corruption"));
  reg_corrupt(sub(&app, "ldc-corrupt-test",
                                 "measure decode success under corruption"));

  ComposeOpts compose_opts;
  auto* comp = sub(&app, "compose", "multiply two decoding polynomials into one"
                                             " over the product modulus");
  comp->add_option("--left", compose_opts.left, "polynomial or certificate JSON")->required();
  comp->add_option("--right", compose_opts.right, "polynomial or certificate JSON")->required();
  comp->add_option("--root-budget", compose_opts.root_budget,
                   "factoring budget for the composite root")
      ->capture_default_str();
  comp->add_option("--out", compose_opts.out, "also write the composed polynomial here");
  comp->callback([&] { exit_code = run_compose(compose_opts); });

  PlanOpts plan_opts;
  auto* plan = sub(&app, "plan", "query-budget plan for r prime factors");
  plan->add_option("--r", plan_opts.r, "number of distinct odd primes to cover")->required();
  plan->add_option("--inventory", plan_opts.inventory, "directory of certificate JSON files");
  plan->add_option("--member", plan_opts.members, "certified modulus (repeatable)");
  plan->add_flag("--three-prime-pool", plan_opts.pool,
                 "allow the 8-query block covering 3 fresh primes");
  plan->add_option("--out", plan_opts.out, "also write the plan here");
  plan->callback([&] { exit_code = run_plan(plan_opts); });

  PirOpts pir_opts;
  auto* pir_cmd = sub(&app, "pir", "multi-server private retrieval on top of the code");
  pir_cmd->require_subcommand(1);
  auto reg_pir = [&](CLI::App* c) {
    c->add_option("--spec", pir_opts.spec, "code spec JSON")->required();
    c->add_option("--db", pir_opts.db, "database file, one byte (0 or 1) per bit")->required();
    c->add_option("--i", pir_opts.i, "1-based bit index to retrieve")->required();
    c->add_option("--seed", pir_opts.seed, "client randomness seed")->capture_default_str();
    c->add_option("--out", pir_opts.out, "also write the transcript here");
    c->callback([&] { exit_code = run_pir_simulate(pir_opts); });
  };
  reg_pir(sub(pir_cmd, "simulate", "run one full retrieval"));
  reg_pir(sub(&app, "pir-simulate", "run one full retrieval"));

  TableOpts table_opts;
  auto* table = sub(&app, "table-verify", "re-check the bundled reference"
                                                   " polynomials and factorization rows");
  table->add_option("--t-max", table_opts.t_max, "largest exponent to re-check")
      ->capture_default_str();
  table->callback([&] { exit_code = run_table_verify(table_opts); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return exit_code;
}
