#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dph/dph.h"

namespace {

struct CommonOpts {
  std::string config_path;
  long long seed = -1;
  long long paths = -1;
  std::string out_dir;
  int threads = 1;
};

void attach(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "configuration file")->required();
  cmd->add_option("--seed", o.seed, "replace the seed list with this single seed");
  cmd->add_option("--paths", o.paths, "Monte Carlo path count");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--threads", o.threads, "upper bound for path workers")
      ->check(CLI::PositiveNumber);
}

int fail(dph_status st) {
  std::fprintf(stderr, "error: %s\n", dph_last_error());
  return int(st);
}

dph_status load_config(const CommonOpts& o, bool out_into_config, dph_config** cfg) {
  dph_status st = dph_config_load(o.config_path.c_str(), cfg);
  if (st != DPH_OK) return st;
  if (o.seed >= 0) {
    st = dph_config_set(*cfg, "run.seeds", std::to_string(o.seed).c_str());
    if (st != DPH_OK) return st;
  }
  if (o.paths >= 0) {
    st = dph_config_set(*cfg, "run.paths", std::to_string(o.paths).c_str());
    if (st != DPH_OK) return st;
  }
  if (out_into_config && !o.out_dir.empty())
    return dph_config_set(*cfg, "run.out", o.out_dir.c_str());
  return DPH_OK;
}

int run_pipeline(const CommonOpts& o, const char* forced_experiment) {
  dph_config* cfg = nullptr;
  dph_status st = load_config(o, true, &cfg);
  if (st == DPH_OK && forced_experiment)
    st = dph_config_set(cfg, "run.experiment", forced_experiment);
  if (st != DPH_OK) {
    dph_config_free(cfg);
    return fail(st);
  }
  dph_record* rec = nullptr;
  st = dph_run(cfg, &rec);
  dph_config_free(cfg);
  if (st != DPH_OK) return fail(st);

  std::vector<char> buf(1 << 16);
  std::printf("experiment: %s\n", dph_record_experiment(rec));
  std::printf("config: %s\n", dph_record_hash(rec));
  const size_t rows = dph_record_rows(rec);
  for (size_t i = 0; i < rows; ++i) {
    if (dph_record_row(rec, i, buf.data(), buf.size()) == DPH_OK)
      std::printf("  %s\n", buf.data());
  }
  const bool pass = dph_record_pass(rec) == 1;
  std::printf("checks: %s (%.1fs)\n", pass ? "pass" : "FAIL", dph_record_wall_seconds(rec));
  dph_record_free(rec);
  return pass ? 0 : int(DPH_ERR_CHECK);
}

int run_validate(const CommonOpts& o) {
  dph_config* cfg = nullptr;
  dph_status st = load_config(o, true, &cfg);
  if (st != DPH_OK) {
    dph_config_free(cfg);
    return fail(st);
  }
  int pass = 0;
  st = dph_validate_model(cfg, &pass);
  dph_config_free(cfg);
  if (st != DPH_OK) return fail(st);
  std::printf("hypotheses: %s\n", pass ? "pass" : "FAIL");
  return pass ? 0 : int(DPH_ERR_CHECK);
}

int run_replay(const CommonOpts& o) {
  dph_config* cfg = nullptr;
  dph_status st = load_config(o, false, &cfg);
  if (st != DPH_OK) {
    dph_config_free(cfg);
    return fail(st);
  }
  std::string ref = o.out_dir;
  if (ref.empty()) {
    std::vector<char> buf(4096);
    if (dph_config_get(cfg, "run.out", buf.data(), buf.size()) == DPH_OK) ref = buf.data();
  }
  if (ref.empty()) {
    dph_config_free(cfg);
    std::fprintf(stderr, "error: replay needs a reference directory (--out or run.out)\n");
    return int(DPH_ERR_CONFIG);
  }
  int match = 0;
  st = dph_replay(cfg, ref.c_str(), (ref + "/.replay-scratch").c_str(), &match);
  dph_config_free(cfg);
  if (st != DPH_OK) return fail(st);
  if (match != 1) {
    std::fprintf(stderr, "replay mismatch: %s\n", dph_last_error());
    return int(DPH_ERR_CHECK);
  }
  std::printf("replay: match\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"degenerate parabolic-hyperbolic SPDE toolbox"};
  app.require_subcommand(1);
  app.set_version_flag("--version", dph_version());

  CommonOpts o;
  CLI::App* validate = app.add_subcommand("validate", "audit the model hypotheses");
  CLI::App* run = app.add_subcommand("run", "execute the experiment named by the config");
  CLI::App* sweep = app.add_subcommand("sweep", "viscosity and regularization sweeps");
  CLI::App* trace = app.add_subcommand("trace", "boundary-layer trace study");
  CLI::App* scan = app.add_subcommand("scan", "nondegeneracy scan of the kinetic symbol");
  CLI::App* replay = app.add_subcommand("replay", "re-run a config and compare summaries");
  for (CLI::App* cmd : {validate, run, sweep, trace, scan, replay}) attach(cmd, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : int(DPH_ERR_CONFIG);
  }

  if (validate->parsed()) return run_validate(o);
  if (run->parsed()) return run_pipeline(o, nullptr);
  if (sweep->parsed()) return run_pipeline(o, "viscosity");
  if (trace->parsed()) return run_pipeline(o, "trace");
  if (scan->parsed()) return run_pipeline(o, "scan");
  if (replay->parsed()) return run_replay(o);
  return int(DPH_ERR_CONFIG);
}
