#include "doctest.h"

#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "ldcforge/codec.hpp"
#include "ldcforge/decpoly.hpp"
#include "ldcforge/json_io.hpp"
#include "ldcforge/matchfam.hpp"

using njson = nlohmann::json;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

const std::string& binary() {
  static const std::string bin = [] {
    const char* env = std::getenv("LDCFORGE_BIN");
    if (!env || !*env) throw std::runtime_error("LDCFORGE_BIN is not set");
    return std::string(env);
  }();
  return bin;
}

const std::string& workdir() {
  static const std::string dir = [] {
    std::string tmpl = "/tmp/ldcforge_cli_XXXXXX";
    if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    return tmpl;
  }();
  return dir;
}

std::string path_of(const std::string& name) { return workdir() + "/" + name; }

RunResult run(const std::string& args) {
  std::string cmd = binary() + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  RunResult r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

njson parse(const std::string& text) { return njson::parse(text); }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const char* kFamily15 =
    R"({"m":15,"h":2,"n":2,"set":[1,6,10],"vectors":[[6,12],[3,9]]})";

// Spec file used by the encode/decode/pir cases, assembled through the
// library so the CLI sees exactly what spec_to_json emits.
const std::string& spec15_path() {
  static const std::string path = [] {
    auto fam = ldcforge::json_io::family_from_json(kFamily15);
    auto spec = ldcforge::codec::make_spec(fam, ldcforge::decpoly::lagrange_polynomial(15));
    std::string p = path_of("spec15.json");
    write_file(p, ldcforge::json_io::spec_to_json(*spec));
    return p;
  }();
  return path;
}

}  // namespace

TEST_CASE("membership checks set the exit code by verdict") {
  auto nm = run("m2-check 15");
  CHECK(nm.code == 1);
  auto doc = parse(nm.out);
  CHECK(doc["m"] == "15");
  CHECK(doc["verdict"] == "non-member");
  CHECK(doc["admissible_reps"] == 2);

  auto member = run("m2 check 511 --out " + path_of("cert511.json"));
  CHECK(member.code == 0);
  auto cert = parse(member.out);
  CHECK(cert["verdict"] == "member");
  CHECK(cert["u"] == 3);
  CHECK(cert["v"] == 144);
  CHECK(cert["poly"]["k"] == 3);
  CHECK(read_file(path_of("cert511.json")) == member.out);

  auto brute = run("m2-check 21 --brute");
  CHECK(brute.code == 1);
  CHECK(parse(brute.out)["verdict"] == "non-member");
}

TEST_CASE("identical invocations emit byte-identical artifacts") {
  auto a = run("m2-check 511");
  auto b = run("m2 check 511");
  CHECK(a.out == b.out);
}

TEST_CASE("a drained budget reports unknown with exit 2") {
  // 22369621 = 2731 * 8191 has no collision; 1ms covers a sliver of it.
  auto r = run("m2-check 22369621 --budget 1ms --shards 1");
  CHECK(r.code == 2);
  CHECK(parse(r.out)["verdict"] == "unknown");
}

TEST_CASE("polynomial search and verification round trip") {
  auto lag = run("poly find 15 --lagrange --out " + path_of("lag15.json"));
  CHECK(lag.code == 0);
  auto doc = parse(lag.out);
  CHECK(doc["k"] == 4);
  CHECK(doc["source"] == "lagrange");

  auto ok = run("poly verify " + path_of("lag15.json"));
  CHECK(ok.code == 0);
  CHECK(parse(ok.out)["valid"] == true);

  // Certificates are accepted wherever a polynomial is expected.
  auto from_cert = run("poly-verify " + path_of("cert511.json"));
  CHECK(from_cert.code == 0);

  std::string tampered = read_file(path_of("lag15.json"));
  auto pos = tampered.find("\"b\"");
  REQUIRE(pos != std::string::npos);
  tampered.replace(pos, 3, "\"a\"");
  write_file(path_of("lag15_bad.json"), tampered);
  auto bad = run("poly verify " + path_of("lag15_bad.json"));
  CHECK(bad.code == 1);
  CHECK(parse(bad.out)["valid"] == false);
}

TEST_CASE("family construction, storage, and verification") {
  auto gram = run("family gram --m 15 --n 2 --out " + path_of("fam15.json"));
  CHECK(gram.code == 0);
  auto doc = parse(gram.out);
  CHECK(doc["m"] == 15);
  CHECK(doc["h"] == 4);
  CHECK(doc["vectors"][0] == njson::array({8, 8, 14, 9}));
  CHECK(doc["vectors"][1] == njson::array({8, 8, 1, 6}));

  CHECK(run("family verify " + path_of("fam15.json")).code == 0);

  auto greedy = run("family greedy --m 15 --h 2 --n 2 --seed 3");
  CHECK(greedy.code == 0);
  auto g = parse(greedy.out);
  CHECK(g["vectors"][0] == njson::array({9, 3}));
  CHECK(g["vectors"][1] == njson::array({12, 6}));

  // Self-orthogonal vectors whose cross product 3 escapes the target set.
  write_file(path_of("fam_bad.json"),
             R"({"m":15,"h":2,"n":2,"set":[1,6,10],"vectors":[[6,12],[9,12]]})");
  auto bad = run("family verify " + path_of("fam_bad.json"));
  CHECK(bad.code == 1);
  auto rep = parse(bad.out);
  CHECK(rep["ok"] == false);
  CHECK(rep["value"] == 3);
}

TEST_CASE("encode, decode, and corruption reports") {
  std::string cw = path_of("cw.bin");
  std::string msg = path_of("msg.json");
  auto enc = run("ldc encode --spec " + spec15_path() + " --random --seed 5 --message-out " +
                 msg + " --out " + cw);
  CHECK(enc.code == 0);
  CHECK(parse(enc.out)["big_n"] == 225);

  auto message = parse(read_file(msg));
  auto one = run("ldc-decode --spec " + spec15_path() + " --in " + cw + " --i 1 --seed 9");
  CHECK(one.code == 0);
  CHECK(parse(one.out)["element_hex"] == message["elements_hex"][0]);

  auto whole = run("ldc decode --spec " + spec15_path() + " --in " + cw + " --i 0");
  CHECK(whole.code == 0);
  CHECK(parse(whole.out)["elements_hex"] == message["elements_hex"]);

  auto both = run("ldc encode --spec " + spec15_path() + " --random --message " + msg +
                  " --out " + cw);
  CHECK(both.code == 2);  // exactly one message source is allowed

  auto stress = run("ldc corrupt-test --spec " + spec15_path() +
                    " --random --seed 5 --delta 0.01 --trials 300 --policy flip");
  CHECK(stress.code == 0);
  auto rep = parse(stress.out);
  CHECK(rep["trials"] == 300);
  CHECK(rep["corrupted"] == 2);
  CHECK(rep["floor"] == doctest::Approx(0.96));
  CHECK(rep["success_min"].get<double>() >= 0.9);

  auto zero = run("ldc-corrupt-test --spec " + spec15_path() +
                  " --random --seed 5 --delta 0.01 --trials 50 --policy zero");
  CHECK(zero.code == 0);
}

TEST_CASE("retrieval simulation round trips both database bits") {
  std::string db = path_of("db.bin");
  write_file(db, std::string("\x01\x00", 2));
  auto r1 = run("pir simulate --spec " + spec15_path() + " --db " + db + " --i 1 --seed 1");
  CHECK(r1.code == 0);
  auto t1 = parse(r1.out);
  CHECK(t1["output"] == 1);
  CHECK(t1["comm_bits"] == 48);
  CHECK(t1["wire_bits"] == 288);
  CHECK(t1["queries"].size() == 4);

  auto r2 = run("pir-simulate --spec " + spec15_path() + " --db " + db + " --i 2 --seed 1");
  CHECK(r2.code == 0);
  CHECK(parse(r2.out)["output"] == 0);

  CHECK(run("pir simulate --spec " + spec15_path() + " --db " + db + " --i 3 --seed 1").code ==
        2);
}

TEST_CASE("composition multiplies stored artifacts") {
  auto r = run("compose --left " + path_of("lag15.json") + " --right " + path_of("cert511.json"));
  CHECK(r.code == 0);
  auto doc = parse(r.out);
  CHECK(doc["m"] == "7665");
  CHECK(doc["k"] == 12);
  CHECK(doc["source"] == "composed");

  auto conflict =
      run("compose --left " + path_of("lag15.json") + " --right " + path_of("lag15.json"));
  CHECK(conflict.code == 2);
}

TEST_CASE("planning from flags and from a certificate directory") {
  auto nine = run("plan --r 4 --member 511 --member 2047");
  CHECK(nine.code == 0);
  CHECK(parse(nine.out)["k_bound"] == "9");

  auto pool = run("plan --r 5 --member 511 --three-prime-pool");
  CHECK(parse(pool.out)["k_bound"] == "24");

  // The inventory directory contributes only verified member certificates;
  // the non-member certificate and the stray polynomial are ignored.
  std::string inv = path_of("inventory");
  REQUIRE(mkdir(inv.c_str(), 0755) == 0);
  run("m2-check 15 --out " + inv + "/cert15.json");
  run("m2-check 511 --out " + inv + "/cert511.json");
  write_file(inv + "/junk.json", "{\"m\": true}");
  auto from_dir = run("plan --r 4 --inventory " + inv);
  CHECK(from_dir.code == 0);
  auto doc = parse(from_dir.out);
  CHECK(doc["k_bound"] == "12");
  REQUIRE(doc["recipe"].size() == 2);
  CHECK(doc["recipe"][0]["kind"] == "member");
  CHECK(doc["recipe"][0]["modulus"] == "511");
  CHECK(doc["recipe"][1]["kind"] == "generic");
}

TEST_CASE("scan and table checks") {
  auto scan = run("scan-mersenne --t-min 2 --t-max 23");
  CHECK(scan.code == 0);
  auto doc = parse(scan.out);
  REQUIRE(doc["rows"].size() == 2);
  CHECK(doc["rows"][0]["t"] == 11);
  CHECK(doc["rows"][0]["p"] == "23");
  CHECK(doc["rows"][0]["q"] == "89");
  CHECK(doc["rows"][0]["p_primality"] == "proven");
  CHECK(doc["rows"][1]["p"] == "47");
  CHECK(doc["skipped"].size() == 7);

  auto table = run("table-verify --t-max 67");
  CHECK(table.code == 0);
  CHECK(parse(table.out)["ok"] == true);
}

TEST_CASE("malformed invocations exit with 2") {
  CHECK(run("m2-check").code == 2);          // missing modulus
  CHECK(run("m2-check 14").code == 2);       // invalid modulus
  CHECK(run("frobnicate").code == 2);        // unknown command
  CHECK(run("poly verify " + path_of("missing.json")).code == 2);
  CHECK(run("").code == 2);                  // a subcommand is required
}
