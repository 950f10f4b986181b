#include "padicl/cli_harness.hpp"

#include <openssl/evp.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace padicl {

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Err::IOError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Err::ConfigError, what + ": " + e.what());
  }
}

std::string resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return p;
  fs::path q(p);
  if (q.is_absolute()) return q.string();
  return (base / q).lexically_normal().string();
}

template <class T>
T require(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(Err::ConfigError, std::string("missing key ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(Err::ConfigError, std::string("bad value for ") + key);
  }
}

json residual_json(int v) { return v >= PAdicElement::kInf ? json("zero") : json(v); }

int residual_from_json(const json& j) { return j.is_string() ? PAdicElement::kInf : j.get<int>(); }

json weight_json(const JobConfig& c) { return json{{"k", {c.k}}, {"v", {c.v}}}; }

}  // namespace

JobConfig load_job(const std::string& path) {
  json j = parse_json(read_file(path), path);
  if (!j.is_object()) throw Error(Err::ConfigError, "job file must be an object");
  if (j.value("schema", 0) != 1) throw Error(Err::ConfigError, "unsupported job schema");
  fs::path base = fs::path(path).parent_path();
  JobConfig c;
  c.path = path;
  c.field_path = resolve(base, require<std::string>(j, "field"));
  c.p = require<int64_t>(j, "p");
  c.level = require<int64_t>(j, "level");
  const json& w = j.at("weight");
  c.k = w.at("k").at(0).get<int64_t>();
  c.v = w.at("v").at(0).get<int64_t>();
  if (j.contains("eigen"))
    for (auto& [key, val] : j.at("eigen").at("a_ell").items()) c.a_ell[std::stoll(key)] = val.get<int64_t>();
  c.precision = j.value("precision", c.precision);
  c.moments = j.value("moments", c.moments);
  c.modulus = j.value("modulus", c.modulus);
  if (j.contains("characters")) c.characters_path = resolve(base, j.at("characters").get<std::string>());
  c.out = j.value("out", c.out);
  c.seed = j.value("seed", c.seed);
  if (c.level % c.p != 0) throw Error(Err::ConfigError, "p must divide the level");
  if (c.precision < 1 || c.moments < 1 || c.modulus < 1) throw Error(Err::ConfigError, "precision, moments and modulus must be positive");
  return c;
}

JobConfig default_job() { return load_job(std::string(PADICL_CONFIG_DIR) + "/jobs/level55_k0.json"); }

void apply_overrides(JobConfig& cfg, const Overrides& o) {
  if (o.precision) cfg.precision = *o.precision;
  if (o.moments) cfg.moments = *o.moments;
  if (o.out) cfg.out = *o.out;
  if (o.seed) cfg.seed = *o.seed;
  if (cfg.precision < 1 || cfg.moments < 1) throw Error(Err::ConfigError, "precision and moments must be positive");
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error(Err::IOError, "digest failed");
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 15];
  }
  return s;
}

json with_hash(json j) {
  j.erase("content_hash");
  j["content_hash"] = sha256_hex(j.dump());
  return j;
}

bool hash_ok(const json& j) {
  if (!j.contains("content_hash")) return false;
  json c = j;
  c.erase("content_hash");
  return sha256_hex(c.dump()) == j.at("content_hash").get<std::string>();
}

void write_json(const std::string& dir, const std::string& name, const json& j) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream out(fs::path(dir) / name);
  if (!out) throw Error(Err::IOError, "cannot write " + (fs::path(dir) / name).string());
  out << j.dump(1) << "\n";
}

json element_json(const PAdicElement& a) {
  auto r = serialize(a);
  return json{{"v", r.valuation}, {"d", r.digits}, {"n", r.precision}};
}

PAdicElement element_from_json(const json& j, const Ctx& c) {
  ElementRecord r{c->id, j.at("v").get<int>(), j.at("d").get<std::string>(), j.at("n").get<int>()};
  return deserialize(r, c);
}

// session

Session::Session(JobConfig cfg) : cfg_(std::move(cfg)) {}

NumberFieldData& Session::field() {
  if (!F_) {
    F_ = std::make_unique<NumberFieldData>(load_field(cfg_.field_path));
    set_prime(*F_, cfg_.p, cfg_.precision + 4);
  }
  return *F_;
}

const SymbolSpace& Session::space() {
  if (!S_) {
    if (field().d != 1) throw Error(Err::LevelUnsupported, "modular symbols are implemented over Q");
    S_ = std::make_unique<SymbolSpace>(build_symbol_space(cfg_.level, cfg_.p));
  }
  return *S_;
}

const ClassicalSpace& Session::classical() {
  if (!V_) V_ = std::make_unique<ClassicalSpace>(classical_space(space(), cfg_.k));
  return *V_;
}

Ctx Session::symbol_ctx() const { return make_qp(cfg_.p, cfg_.precision + 6); }

const EigenSymbolResult& Session::eigen() {
  if (!R_) {
    if (cfg_.v != 0) throw Error(Err::InvalidInput, "symbols are built with v = 0");
    R_ = std::make_unique<EigenSymbolResult>(eigensymbol(classical(), cfg_.a_ell, symbol_ctx()));
    if (!is_small_slope_q(cfg_.k, R_->lambda)) throw Error(Err::PreconditionFailed, "eigenvalue is not of small slope");
  }
  return *R_;
}

EigenData Session::eig() { return EigenData{{eigen().lambda}, {}}; }

std::string Session::lift_key() const {
  json j{{"field", cfg_.field_path.empty() ? "" : fs::path(cfg_.field_path).filename().string()},
         {"p", cfg_.p},
         {"level", cfg_.level},
         {"k", cfg_.k},
         {"v", cfg_.v},
         {"M", cfg_.moments},
         {"N", cfg_.precision}};
  for (auto [l, a] : cfg_.a_ell) j["a_ell"][std::to_string(l)] = a;
  return sha256_hex(j.dump());
}

bool Session::try_reuse() {
  fs::path f = fs::path(cfg_.out) / "lift.json";
  if (!fs::exists(f)) return false;
  json j;
  try {
    j = json::parse(read_file(f.string()));
  } catch (...) {
    return false;
  }
  if (!hash_ok(j) || j.value("lift_key", "") != lift_key()) return false;
  Ctx c = with_precision(symbol_ctx(), lift_working_precision(cfg_.p, cfg_.moments, cfg_.precision));
  if (j.value("context", "") != c->id) return false;
  const auto& S = space();
  auto w = make_weight({cfg_.k}, {cfg_.v});
  DistSymbol psi;
  psi.S = &S;
  const auto& gens = j.at("generators");
  if (int(gens.size()) != S.num_gens()) return false;
  for (auto& g : gens) {
    auto mu = MomentDistribution::zero(w, c, cfg_.moments, cfg_.precision);
    if (g.size() != mu.mom.size()) return false;
    for (size_t i = 0; i < mu.mom.size(); ++i) mu.mom[i] = element_from_json(g[i], c);
    psi.val.push_back(mu);
  }
  const auto& r = j.at("report");
  rep_.iterations = r.at("iterations");
  rep_.filtration_depth = r.at("filtration_depth");
  rep_.converged = r.at("converged");
  rep_.specialisation_residual = residual_from_json(r.at("specialisation_residual"));
  rep_.relation_residual = residual_from_json(r.at("relation_residual"));
  rep_.eigen_residual.clear();
  for (auto& e : r.at("eigen_residual")) rep_.eigen_residual.push_back(residual_from_json(e));
  psi_ = std::make_unique<DistSymbol>(psi);
  reused_ = true;
  return true;
}

const DistSymbol& Session::lift() {
  if (psi_) return *psi_;
  eigen();
  if (try_reuse()) return *psi_;
  auto [psi, rep] = iterate_control(naive_lift(eigen().theta, cfg_.moments, cfg_.precision), eigen().theta, eig());
  psi_ = std::make_unique<DistSymbol>(psi);
  rep_ = rep;
  return *psi_;
}

const LiftReport& Session::report() {
  lift();
  return rep_;
}

std::vector<HeckeCharacter> Session::battery() {
  std::vector<HeckeCharacter> out;
  if (cfg_.characters_path.empty()) return out;
  json j = parse_json(read_file(cfg_.characters_path), cfg_.characters_path);
  if (j.value("schema", 0) != 1) throw Error(Err::ConfigError, "unsupported character schema");
  for (auto& c : j.at("characters")) out.push_back(character_from_json(field(), c.dump(), cfg_.precision + 2));
  return out;
}

// commands

json cmd_field_validate(const std::string& field_path) {
  auto F = load_field(field_path);
  auto issues = validate_field(F);
  json j{{"schema", 1},
         {"kind", "field_validation"},
         {"field", F.id},
         {"degree", F.d},
         {"signature", {F.r1, F.r2}},
         {"discriminant", F.disc},
         {"narrow_class_number", F.narrow_h},
         {"issues", issues},
         {"valid", issues.empty()}};
  if (!issues.empty()) throw Error(Err::FieldInconsistent, issues.front());
  return with_hash(j);
}

json cmd_symbol_build(Session& s) {
  const auto& cfg = s.config();
  const auto& S = s.space();
  const auto& V = s.classical();
  const auto& R = s.eigen();
  json j{{"schema", 1},
         {"kind", "classical_eigensymbol"},
         {"field", s.field().id},
         {"level", cfg.level},
         {"p", cfg.p},
         {"weight", weight_json(cfg)},
         {"dimension", V.dim()},
         {"kernel_dim", R.kernel_dim},
         {"a_p", R.a_p.get_str()},
         {"lambda", element_json(R.lambda)},
         {"lambda_bar", element_json(R.lambda_bar)},
         {"small_slope", true},
         {"context", R.theta.val[0].ctx->id}};
  for (auto& c : R.up_charpoly) j["up_charpoly"].push_back(c.get_str());
  for (auto [l, a] : cfg.a_ell) j["a_ell"][std::to_string(l)] = a;
  for (int g = 0; g < S.num_gens(); ++g) {
    auto [r, t] = S.gen_divisor(g);
    json vals = json::array();
    for (auto& x : R.theta.val[size_t(g)].val) vals.push_back(element_json(x));
    j["generators"].push_back(json{{"divisor", {{r.num, r.den}, {t.num, t.den}}}, {"values", vals}});
  }
  j = with_hash(j);
  write_json(cfg.out, "symbol.json", j);
  return j;
}

json lift_json(Session& s) {
  const auto& cfg = s.config();
  const auto& psi = s.lift();
  const auto& rep = s.report();
  const auto& R = s.eigen();
  json j{{"schema", 1},
         {"kind", "overconvergent_symbol"},
         {"field", s.field().id},
         {"level", cfg.level},
         {"p", cfg.p},
         {"weight", weight_json(cfg)},
         {"lambda", element_json(R.lambda)},
         {"a_p", R.a_p.get_str()},
         {"uniformizer", std::to_string(cfg.p)},
         {"M", cfg.moments},
         {"N", cfg.precision},
         {"lift_key", s.lift_key()},
         {"context", psi.val[0].ctx->id}};
  json r{{"iterations", rep.iterations},
         {"filtration_depth", rep.filtration_depth},
         {"converged", rep.converged},
         {"specialisation_residual", residual_json(rep.specialisation_residual)},
         {"relation_residual", residual_json(rep.relation_residual)}};
  r["eigen_residual"] = json::array();
  for (int v : rep.eigen_residual) r["eigen_residual"].push_back(residual_json(v));
  j["report"] = r;
  for (auto [l, a] : cfg.a_ell) j["a_ell"][std::to_string(l)] = a;
  j["generators"] = json::array();
  for (auto& mu : psi.val) {
    json m = json::array();
    for (auto& x : mu.mom) m.push_back(element_json(x));
    j["generators"].push_back(m);
  }
  return with_hash(j);
}

json cmd_lift(Session& s) {
  json j = lift_json(s);
  write_json(s.config().out, "lift.json", j);
  return j;
}

json mu_json(const RayClassDistribution& mu, const RayClassGroup& G) {
  (void)G;
  json reps = mu.a;
  json j{{"schema", 1},
         {"kind", "ray_class_distribution"},
         {"modulus", mu.n},
         {"f0", mu.f0},
         {"representatives", reps},
         {"representative_hash", sha256_hex(reps.dump())},
         {"lambda_f", element_json(mu.lambda_f)},
         {"context", mu.ev.empty() ? "" : mu.ev[0].ctx->id}};
  j["classes"] = json::array();
  for (size_t y = 0; y < mu.a.size(); ++y) {
    json ev = json::array(), co = json::array();
    for (auto& x : mu.ev[y].mom) ev.push_back(element_json(x));
    for (auto& x : mu.coset[y].mom) co.push_back(element_json(x));
    j["classes"].push_back(json{{"a", mu.a[y]}, {"b", mu.b[y]}, {"ev", ev}, {"coset", co}});
  }
  return j;
}

RayClassDistribution mu_from_json(const json& j, const Weight& w, int M, int N, const Ctx& c) {
  if (j.value("context", "") != c->id) throw Error(Err::ContextMismatch, "persisted distribution context differs");
  RayClassDistribution mu;
  mu.w = w;
  mu.n = j.at("modulus");
  mu.f0 = j.at("f0");
  mu.lambda_f = element_from_json(j.at("lambda_f"), c);
  mu.lambda_f_inv = mu.lambda_f.inverse();
  for (auto& cl : j.at("classes")) {
    mu.a.push_back(cl.at("a"));
    mu.b.push_back(cl.at("b"));
    auto ev = MomentDistribution::zero(w, c, M, N), co = ev;
    for (size_t i = 0; i < ev.mom.size(); ++i) {
      ev.mom[i] = element_from_json(cl.at("ev")[i], c);
      co.mom[i] = element_from_json(cl.at("coset")[i], c);
    }
    mu.ev.push_back(ev);
    mu.coset.push_back(co);
  }
  return mu;
}

namespace {

json evaluate_battery(Session& s, const RayClassDistribution& mu) {
  json out = json::array();
  for (auto& chi : s.battery()) {
    json e{{"id", chi.id}, {"conductor", chi.cond}, {"infinity_type", chi.r}};
    try {
      auto v = evaluate_mu(mu, chi);
      e["value"] = v.str();
      e["record"] = element_json(v);
    } catch (const Error& err) {
      e["error"] = err_code(err.code());
    }
    out.push_back(e);
  }
  return out;
}

}  // namespace

json cmd_lfun_compute(Session& s) {
  const auto& cfg = s.config();
  auto G = build_ray_class_group(s.field(), {cfg.modulus});
  auto mu = build_mu(s.lift(), s.eig(), G);
  json j = mu_json(mu, G);
  j["lift_key"] = s.lift_key();
  j["lift_reused"] = s.lift_reused();
  j["M"] = cfg.moments;
  j["N"] = cfg.precision;
  j["evaluations"] = evaluate_battery(s, mu);
  // reuse flag is run-dependent; keep it out of the persisted artifact
  json persisted = j;
  persisted.erase("lift_reused");
  persisted = with_hash(persisted);
  write_json(cfg.out, "lift.json", lift_json(s));
  write_json(cfg.out, "mu.json", persisted);
  j["content_hash"] = persisted["content_hash"];
  return j;
}

json cmd_lfun_eval(Session& s) {
  const auto& cfg = s.config();
  fs::path f = fs::path(cfg.out) / "mu.json";
  json stored;
  bool ok = false;
  if (fs::exists(f)) {
    try {
      stored = json::parse(read_file(f.string()));
      ok = hash_ok(stored) && stored.value("lift_key", "") == s.lift_key() && stored.value("modulus", 0) == cfg.modulus;
    } catch (...) {
      ok = false;
    }
  }
  if (!ok) {
    cmd_lfun_compute(s);
    stored = json::parse(read_file(f.string()));
  }
  Ctx c = with_precision(s.symbol_ctx(), lift_working_precision(cfg.p, cfg.moments, cfg.precision));
  auto mu = mu_from_json(stored, make_weight({cfg.k}, {cfg.v}), cfg.moments, cfg.precision, c);
  json j{{"schema", 1},
         {"kind", "evaluation_report"},
         {"mu_hash", stored.at("content_hash")},
         {"modulus", cfg.modulus},
         {"evaluations", evaluate_battery(s, mu)}};
  j = with_hash(j);
  write_json(cfg.out, "eval.json", j);
  return j;
}

}  // namespace padicl
