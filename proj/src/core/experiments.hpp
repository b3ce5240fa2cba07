#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core/common.hpp"
#include "core/config.hpp"
#include "core/field.hpp"
#include "core/model.hpp"
#include "core/solver_eps.hpp"

namespace dph {

// orchestration: named pipelines over the solvers and checkers, persisted as
// a run directory with a metadata record and a summary CSV
struct RunConfig {
  std::string experiment;
  std::string model = "default-powerlaw";
  int n1 = 32;
  int n2 = 32;
  double T = 0.25;
  double eps = 0.1;
  double mu = 0.01;
  std::vector<double> eps_list;
  std::vector<double> mu_list;
  std::vector<uint64_t> seeds = {1};
  int paths = 0;  // when positive, extend the seed list to this many paths
  std::string out_dir;
  Config raw;

  std::vector<uint64_t> seed_list() const;  // expanded and validated
  double num(const std::string& key, double fallback) const { return raw.get_num(key, fallback); }
};

RunConfig parse_run_config(const Config& c);
RunConfig load_run_config(const std::string& path);

struct SummaryRow {
  std::map<std::string, std::string> cells;
  void put(const std::string& key, double v);
  void put(const std::string& key, const std::string& v) { cells[key] = v; }
};

struct RunRecord {
  std::string dir;
  std::string config_hash;
  std::string experiment;
  bool pass = true;
  std::vector<SummaryRow> rows;
  double wall_seconds = 0.0;
};

// executes the named pipeline; when cfg.out_dir is nonempty writes
// metadata.txt and summary.csv there (summary bit-reproducible per config)
RunRecord run_experiment(const RunConfig& cfg);

std::vector<std::string> experiment_names();

// ---- shared scenario pieces ----------------------------------------------

double initial_upper(double x1, double x2);
double initial_lower(double x1, double x2);
double boundary_level();

// finite-volume run of the named model with the standard data; dt is snapped
// to a power-of-two multiple of the fine noise grid when noise is on
EpsRunResult standard_fv_run(const ModelSpec& m, int n1, int n2, double T, double eps,
                             uint64_t seed, bool with_noise,
                             const std::function<double(double, double)>& u0,
                             const std::vector<StepObserver>& observers = {});

// ---- study results consumed by both the pipelines and the checks ----------

struct PairedStudy {
  std::vector<double> times;
  Vec mean;     // ensemble mean of the per-time distance functional
  Vec half_ci;  // 1.96 sd / sqrt(paths)
  double initial = 0.0;
  double sup_violation = 0.0;
  int paths = 0;
};
// positive_part: integral (u_low - u_high)_+ (order defect); otherwise |u - v|
PairedStudy paired_ensemble_study(const RunConfig& cfg, int paths, bool positive_part);

struct OvershootStudy {
  double coarse = 0.0;
  double fine = 0.0;
  double order = 0.0;
  bool vacuous = false;  // both levels at zero
  int paths = 0;
};
OvershootStudy overshoot_study(const RunConfig& cfg);

struct SweepTable {
  std::vector<double> values;
  std::vector<double> diffs;  // eps: successive L1 differences; mu: distance to the limit
  bool decreasing = true;
};
// param "eps": pathwise finite-volume sweep on paired seeds
// param "mu": deterministic first-stage sweep against the finite-volume limit
SweepTable convergence_study(const RunConfig& cfg, const std::string& param);

// replay cfg into scratch_dir and byte-compare summary CSVs with reference_dir
bool replay_matches(const RunConfig& cfg, const std::string& reference_dir,
                    const std::string& scratch_dir, std::string* detail);

}  // namespace dph
