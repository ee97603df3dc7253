#ifndef SFV_DRIVER_HPP_
#define SFV_DRIVER_HPP_

#include <optional>
#include <string>
#include <vector>

#include "sfv/problems.hpp"
#include "sfv/rom.hpp"
#include "sfv/snapshots.hpp"
#include "sfv/stats.hpp"

namespace sfv {

// Flat key=value run configuration; every field has a serializable key so
// that serialize/parse round-trips are semantically idempotent.
struct RunConfig {
  std::string problem = "burgers-sine";  // burgers-sine | sod-narrow | sod-wide | custom
  std::string method = "fom-flux";       // fom-state | fom-flux | rom | rom-hr | det-1d
  int nx = 64;
  std::vector<int> ny{32, 32};  // stochastic cells per dimension
  int modes = 0;                // N (rom, rom-hr)
  int hyper_points = 0;         // N_H (rom-hr)
  double rel_tol = 1e-6;
  double abs_tol = 1e-8;
  double t_final = 0.0;  // <= 0: problem default
  int frames = 50;
  double weno_epsilon = 1e-6;
  std::string snapshots = "intrusive";  // intrusive | nonintrusive
  std::string basis_path;
  std::string snapshot_path;
  std::string output_dir = ".";
  std::string output_prefix = "run";
  std::vector<double> slice_at;  // parameter point; default: upper domain corner
  // custom problem description
  std::string custom_law = "burgers";
  std::vector<double> custom_left{1.0};
  std::vector<double> custom_right{0.0};
  double custom_x0_base = 0.5;
  double custom_x0_span = 0.0;
  double custom_x_lo = 0.0;
  double custom_x_hi = 1.0;
  std::string custom_bc = "periodic";

  void validate() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);
void apply_override(RunConfig& cfg, const std::string& assignment);  // "key=value"
std::string serialize_config(const RunConfig& cfg);

// Problem/operator assembly from a validated config.
ProblemSetup make_problem(const RunConfig& cfg);
TimeIntegratorConfig make_integrator_config(const RunConfig& cfg, const ProblemSetup& setup);
std::vector<std::string> component_names(const ConservationLaw& law);

// Artifact basenames: <output_dir>/<output_prefix>_<suffix>
std::string artifact_path(const RunConfig& cfg, const std::string& suffix);

struct SolveArtifacts {
  std::string stats_csv;
  std::string slice_csv;
  std::string summary_json;
  FieldStats stats;
  long long flux_evals = 0;
  long steps_accepted = 0;
};

SolveArtifacts cmd_solve(const RunConfig& cfg);

struct SnapshotArtifacts {
  std::string matrix_path;
  std::string manifest_path;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
};

SnapshotArtifacts cmd_snapshots(const RunConfig& cfg);

struct BasisArtifacts {
  std::string basis_path;
  std::string sigma_path;
  std::string face_path;
  std::string qdeim_path;  // empty unless hyper_points > 0
  std::string manifest_path;
  int modes = 0;
};

BasisArtifacts cmd_basis(const RunConfig& cfg);

// Pairwise comparison of two stats CSV files (second one is the reference).
ErrorReport cmd_compare(const std::string& csv_a, const std::string& csv_b);

// Experiment drivers (also used by the acceptance suite). Each writes its CSV
// into cfg.output_dir and returns the numbers.
struct ResolutionSweep {
  std::vector<int> ny;        // per-dimension stochastic cell counts
  std::vector<double> error;  // state-vs-flux relative L1 (state = reference)
};

ResolutionSweep reproduce_table1(const RunConfig& base, bool include_finest);
ResolutionSweep reproduce_table2(const RunConfig& base);

struct RomSweep {
  std::vector<int> modes;
  std::vector<double> error;  // rom vs flux-FOM relative L1
  std::vector<double> tv;     // total variation of the rom mean (first component)
  double fom_tv = 0.0;
};

RomSweep reproduce_rom_sweep(const RunConfig& base);  // burgers or sod per base.problem

struct HyperSweep {
  std::vector<int> hyper_points;
  std::vector<double> error;  // rom-hr vs flux-FOM relative L1
  double non_hr_error = 0.0;  // plain rom at the same mode count
};

HyperSweep reproduce_hr_sweep(const RunConfig& base);

struct SodWideReport {
  bool state_positivity_failure = false;
  std::string state_message;
  bool flux_completed = false;
  double min_density = 0.0;
  double min_pressure = 0.0;
};

SodWideReport reproduce_sod_wide_check(const RunConfig& base);

// dispatch by experiment id: table1, table2, burgers-rom-sweep,
// burgers-hr-sweep, sod-rom-sweep, sod-wide-check
void cmd_reproduce(const std::string& experiment, const RunConfig& base);

}  // namespace sfv

#endif  // SFV_DRIVER_HPP_
