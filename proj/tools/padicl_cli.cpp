#include <CLI11.hpp>
#include <iostream>

#include "padicl/suites.hpp"

using namespace padicl;

namespace {

int fail(const std::string& code, const std::string& message) {
  std::cerr << json{{"error", code}, {"message", message}}.dump() << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-adic L-functions of small slope eigensymbols"};
  app.require_subcommand(1);

  std::string config;
  int precision = 0, moments = 0;
  std::string out;
  uint64_t seed = 0;
  auto add_globals = [&](CLI::App* a) {
    a->add_option("--config", config, "job file");
    a->add_option("--precision", precision, "output precision N")->check(CLI::PositiveNumber);
    a->add_option("--moments", moments, "moment count M")->check(CLI::PositiveNumber);
    a->add_option("--out", out, "output directory");
    a->add_option("--seed", seed, "random seed");
  };
  add_globals(&app);

  auto* field = app.add_subcommand("field", "number field data");
  auto* validate = field->add_subcommand("validate", "check a field file");
  std::string field_path;
  validate->add_option("path", field_path, "field JSON")->required();
  field->require_subcommand(1);

  auto* symbol = app.add_subcommand("symbol", "modular symbols");
  auto* build = symbol->add_subcommand("build", "classical eigensymbol");
  auto* lift = symbol->add_subcommand("lift", "overconvergent lift");
  symbol->require_subcommand(1);

  auto* lfun = app.add_subcommand("lfun", "p-adic L-function");
  auto* compute = lfun->add_subcommand("compute", "build the ray class distribution");
  auto* eval = lfun->add_subcommand("eval", "evaluate the character battery");
  lfun->require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  std::string suite;
  verify->add_option("suite", suite, "suite name")->required();

  for (auto* a : {field, validate, symbol, build, lift, lfun, compute, eval, verify}) {
    a->fallthrough();
    add_globals(a);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(err_code(Err::ConfigError), e.what());
  }

  try {
    if (validate->parsed()) {
      std::cout << cmd_field_validate(field_path).dump(1) << "\n";
      return 0;
    }
    JobConfig cfg = config.empty() ? default_job() : load_job(config);
    Overrides o;
    if (precision) o.precision = precision;
    if (moments) o.moments = moments;
    if (!out.empty()) o.out = out;
    if (seed) o.seed = seed;
    apply_overrides(cfg, o);
    Session s(cfg);
    json result;
    if (build->parsed()) result = cmd_symbol_build(s);
    if (lift->parsed()) result = cmd_lift(s);
    if (compute->parsed()) result = cmd_lfun_compute(s);
    if (eval->parsed()) result = cmd_lfun_eval(s);
    if (verify->parsed()) {
      auto rep = run_suite(suite, s);
      result = with_hash(rep.to_json());
      write_json(cfg.out, "verify_" + suite + ".json", result);
      std::cout << result.dump(1) << "\n";
      return rep.pass() ? 0 : 1;
    }
    std::cout << result.dump(1) << "\n";
    return 0;
  } catch (const Error& e) {
    return fail(err_code(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail(err_code(Err::InvalidInput), e.what());
  }
}
