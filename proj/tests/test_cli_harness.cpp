#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "padicl/suites.hpp"

using namespace padicl;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out, err;
};

Run cli(const std::string& args) {
  fs::path err = fs::temp_directory_path() / "padicl_cli_err.txt";
  std::string cmd = std::string(PADICL_CLI_PATH) + " " + args + " 2>" + err.string();
  FILE* f = popen(cmd.c_str(), "r");
  REQUIRE(f);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
  int st = pclose(f);
  std::ifstream e(err);
  std::string es((std::istreambuf_iterator<char>(e)), {});
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out, es};
}

fs::path scratch(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("padicl_test_" + name);
  fs::remove_all(d);
  return d;
}

json read(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

std::string job55() { return std::string(PADICL_CONFIG_DIR) + "/jobs/level55_k0.json"; }

}  // namespace

TEST_CASE("sha256 test vectors") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("content hashes detect edits") {
  auto j = with_hash(json{{"a", 1}, {"b", {1, 2}}});
  CHECK(hash_ok(j));
  CHECK(with_hash(j) == j);
  j["a"] = 2;
  CHECK(!hash_ok(j));
  CHECK(!hash_ok(json{{"a", 1}}));
}

TEST_CASE("element records round trip") {
  auto c = make_qp(5, 10);
  for (auto x : {PAdicElement::from_int(c, 7), PAdicElement::from_int(c, -250), PAdicElement::zero(c),
                 PAdicElement::from_int(c, 3) / PAdicElement::from_int(c, 25)}) {
    auto y = element_from_json(element_json(x), c);
    CHECK(y.identical(x));
  }
}

TEST_CASE("job files") {
  auto cfg = load_job(job55());
  CHECK(cfg.level == 55);
  CHECK(cfg.p == 5);
  CHECK(cfg.a_ell.at(7) == -2);
  CHECK(fs::exists(cfg.field_path));
  CHECK(fs::exists(cfg.characters_path));
  Overrides o;
  o.precision = 6;
  apply_overrides(cfg, o);
  CHECK(cfg.precision == 6);
  o.precision = 0;
  CHECK_THROWS_AS(apply_overrides(cfg, o), Error);
  try {
    load_job("/nonexistent/job.json");
    FAIL("loaded");
  } catch (const Error& e) {
    CHECK(e.code() == Err::IOError);
  }
  fs::path bad = scratch("badjob.json");
  std::ofstream(bad) << "{\"schema\": 1, \"p\": 5}";
  try {
    load_job(bad.string());
    FAIL("loaded");
  } catch (const Error& e) {
    CHECK(e.code() == Err::ConfigError);
  }
}

TEST_CASE("outputs are deterministic and reuse the persisted lift") {
  auto d1 = scratch("det1"), d2 = scratch("det2");
  auto a = cli("lfun compute --config " + job55() + " --out " + d1.string());
  REQUIRE(a.status == 0);
  auto b = cli("lfun compute --config " + job55() + " --out " + d2.string());
  REQUIRE(b.status == 0);
  for (auto name : {"lift.json", "mu.json"}) {
    auto x = read(d1 / name), y = read(d2 / name);
    CHECK(hash_ok(x));
    CHECK(x.at("content_hash") == y.at("content_hash"));
  }
  CHECK(json::parse(a.out).at("lift_reused") == false);
  auto c = cli("lfun compute --config " + job55() + " --out " + d1.string());
  REQUIRE(c.status == 0);
  CHECK(json::parse(c.out).at("lift_reused") == true);
  CHECK(read(d1 / "mu.json").at("content_hash") == read(d2 / "mu.json").at("content_hash"));

  auto e1 = cli("lfun eval --config " + job55() + " --out " + d1.string());
  auto e2 = cli("lfun eval --config " + job55() + " --out " + d2.string());
  REQUIRE(e1.status == 0);
  CHECK(json::parse(e1.out).at("content_hash") == json::parse(e2.out).at("content_hash"));
  auto evals = json::parse(e1.out).at("evaluations");
  CHECK(evals.size() == 6);
  for (auto& e : evals) CHECK(e.contains("value"));

  // a changed moment count invalidates the persisted lift
  auto f = cli("symbol lift --config " + job55() + " --out " + d1.string() + " --moments 8");
  REQUIRE(f.status == 0);
  CHECK(json::parse(f.out).at("M") == 8);
}

TEST_CASE("symbol build writes a hashed eigensymbol") {
  auto d = scratch("build");
  auto r = cli("symbol build --config " + job55() + " --out " + d.string());
  REQUIRE(r.status == 0);
  auto j = read(d / "symbol.json");
  CHECK(hash_ok(j));
  CHECK(j.at("a_p") == "1");
  CHECK(j.at("kernel_dim") == 4);
}

TEST_CASE("errors carry machine-readable codes") {
  auto d = scratch("errors");
  fs::create_directories(d);
  std::ofstream(d / "broken.json") << "{\"schema\": 1, \"degree\": ";
  auto r = cli("field validate " + (d / "broken.json").string());
  CHECK(r.status == 2);
  CHECK(json::parse(r.err).at("error") == "E_FIELD_INCONSISTENT");
  auto q = cli("field validate " + std::string(PADICL_CONFIG_DIR) + "/fields/Qi.json");
  CHECK(q.status == 0);
  CHECK(json::parse(q.out).at("valid") == true);
  auto m = cli("symbol build --config " + (d / "missing.json").string());
  CHECK(m.status == 2);
  CHECK(json::parse(m.err).at("error") == "E_IO");
  auto u = cli("verify nonsense --out " + d.string());
  CHECK(u.status == 2);
  CHECK(json::parse(u.err).at("error") == "E_INVALID_INPUT");
}

TEST_CASE("verify gauss passes through the binary") {
  auto d = scratch("gauss");
  auto r = cli("verify gauss --out " + d.string());
  CHECK(r.status == 0);
  auto j = json::parse(r.out);
  CHECK(j.at("pass") == true);
  CHECK(hash_ok(read(d / "verify_gauss.json")));
}
