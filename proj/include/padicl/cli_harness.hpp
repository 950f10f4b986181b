#pragma once

#include <json.hpp>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "padicl/padic_lfunction.hpp"

namespace padicl {

using json = nlohmann::json;

struct JobConfig {
  std::string path;
  std::string field_path;
  int64_t p = 5;
  int64_t level = 0;
  int64_t k = 0;
  int64_t v = 0;
  std::map<int64_t, int64_t> a_ell;
  int precision = 10;
  int moments = 10;
  int modulus = 1;
  std::string characters_path;
  std::string out = "out";
  uint64_t seed = 1;
};

struct Overrides {
  std::optional<int> precision, moments;
  std::optional<std::string> out;
  std::optional<uint64_t> seed;
};

/// Versioned JSON job file; relative paths resolve against the file's directory.
JobConfig load_job(const std::string& path);
JobConfig default_job();
void apply_overrides(JobConfig& cfg, const Overrides& o);

std::string sha256_hex(const std::string& data);
/// Adds content_hash over the canonical dump of everything else.
json with_hash(json j);
bool hash_ok(const json& j);
void write_json(const std::string& dir, const std::string& name, const json& j);

json element_json(const PAdicElement& a);
PAdicElement element_from_json(const json& j, const Ctx& c);

/// Lazily built objects for one job.
class Session {
 public:
  explicit Session(JobConfig cfg);
  const JobConfig& config() const { return cfg_; }
  NumberFieldData& field();
  const SymbolSpace& space();
  const ClassicalSpace& classical();
  const EigenSymbolResult& eigen();
  EigenData eig();
  Ctx symbol_ctx() const;
  /// The control-theorem lift; reuses out/lift.json when its config hash matches.
  const DistSymbol& lift();
  const LiftReport& report();
  bool lift_reused() const { return reused_; }
  std::string lift_key() const;
  std::vector<HeckeCharacter> battery();

 private:
  JobConfig cfg_;
  std::unique_ptr<NumberFieldData> F_;
  std::unique_ptr<SymbolSpace> S_;
  std::unique_ptr<ClassicalSpace> V_;
  std::unique_ptr<EigenSymbolResult> R_;
  std::unique_ptr<DistSymbol> psi_;
  LiftReport rep_;
  bool reused_ = false;
  bool try_reuse();
};

json cmd_field_validate(const std::string& field_path);
json cmd_symbol_build(Session& s);
json cmd_lift(Session& s);
json cmd_lfun_compute(Session& s);
/// Evaluates the battery against a persisted mu (computing it first if absent).
json cmd_lfun_eval(Session& s);

json lift_json(Session& s);
json mu_json(const RayClassDistribution& mu, const RayClassGroup& G);
RayClassDistribution mu_from_json(const json& j, const Weight& w, int M, int N, const Ctx& c);

}  // namespace padicl
