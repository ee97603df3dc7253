#include "sfv/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sfv/io.hpp"

namespace sfv {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!s.empty() && s.back() == sep) parts.push_back("");
  return parts;
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected integer, got '" + v + "'");
  }
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected number, got '" + v + "'");
  }
}

std::vector<int> parse_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const std::string& item : split(v, ','))
    if (!trim(item).empty()) out.push_back(parse_int(key, trim(item)));
  if (out.empty()) throw ConfigError("config key '" + key + "': expected a list");
  return out;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const std::string& item : split(v, ','))
    if (!trim(item).empty()) out.push_back(parse_double(key, trim(item)));
  return out;
}

template <typename T>
std::string join(const std::vector<T>& xs) {
  std::ostringstream out;
  out.precision(17);
  for (size_t i = 0; i < xs.size(); ++i) out << (i ? "," : "") << xs[i];
  return out.str();
}

void set_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "problem") cfg.problem = value;
  else if (key == "method") cfg.method = value;
  else if (key == "nx") cfg.nx = parse_int(key, value);
  else if (key == "ny") cfg.ny = parse_int_list(key, value);
  else if (key == "modes") cfg.modes = parse_int(key, value);
  else if (key == "hyper_points") cfg.hyper_points = parse_int(key, value);
  else if (key == "rel_tol") cfg.rel_tol = parse_double(key, value);
  else if (key == "abs_tol") cfg.abs_tol = parse_double(key, value);
  else if (key == "t_final") cfg.t_final = parse_double(key, value);
  else if (key == "frames") cfg.frames = parse_int(key, value);
  else if (key == "weno_epsilon") cfg.weno_epsilon = parse_double(key, value);
  else if (key == "snapshots") cfg.snapshots = value;
  else if (key == "basis_path") cfg.basis_path = value;
  else if (key == "snapshot_path") cfg.snapshot_path = value;
  else if (key == "output_dir") cfg.output_dir = value;
  else if (key == "output_prefix") cfg.output_prefix = value;
  else if (key == "slice_at") cfg.slice_at = parse_double_list(key, value);
  else if (key == "custom_law") cfg.custom_law = value;
  else if (key == "custom_left") cfg.custom_left = parse_double_list(key, value);
  else if (key == "custom_right") cfg.custom_right = parse_double_list(key, value);
  else if (key == "custom_x0_base") cfg.custom_x0_base = parse_double(key, value);
  else if (key == "custom_x0_span") cfg.custom_x0_span = parse_double(key, value);
  else if (key == "custom_x_lo") cfg.custom_x_lo = parse_double(key, value);
  else if (key == "custom_x_hi") cfg.custom_x_hi = parse_double(key, value);
  else if (key == "custom_bc") cfg.custom_bc = value;
  else throw ConfigError("unknown config key '" + key + "'");
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for hashing");
  std::uint64_t h = 1469598103934665603ull;
  char buf[65536];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
    if (!in) break;
  }
  std::ostringstream hex;
  hex << std::hex << h;
  // return as decimal-free hex via string? keep numeric for json
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex << v;
  return out.str();
}

json mesh_manifest(const TensorGrid& grid, BoundaryKind bc) {
  json dims = json::array();
  for (int d = 0; d < grid.q(); ++d)
    dims.push_back({{"lo", grid.stochastic_domain(d).lo},
                    {"hi", grid.stochastic_domain(d).hi},
                    {"cells", grid.cells_per_dim(d)}});
  return {{"x_lo", grid.physical().lo},
          {"x_hi", grid.physical().hi},
          {"nx", grid.nx()},
          {"dims", dims},
          {"bc", bc == BoundaryKind::Periodic ? "periodic" : "zero-gradient"}};
}

void check_mesh(const json& manifest, const TensorGrid& grid) {
  const json& mesh = manifest.at("mesh");
  bool ok = mesh.at("nx").get<int>() == grid.nx() &&
            mesh.at("dims").size() == static_cast<size_t>(grid.q());
  if (ok)
    for (int d = 0; d < grid.q(); ++d)
      ok = ok && mesh.at("dims")[d].at("cells").get<int>() == grid.cells_per_dim(d);
  if (!ok) throw ConfigError("stored artifact mesh does not match the run configuration");
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError("cannot parse '" + path + "': " + e.what());
  }
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed on '" + path + "'");
}

std::string sibling(const std::string& main_path, const std::string& main_suffix,
                    const std::string& new_suffix) {
  if (main_path.size() < main_suffix.size() ||
      main_path.compare(main_path.size() - main_suffix.size(), main_suffix.size(),
                        main_suffix) != 0)
    throw ConfigError("path '" + main_path + "' must end in '" + main_suffix + "'");
  return main_path.substr(0, main_path.size() - main_suffix.size()) + new_suffix;
}

BoundaryKind parse_bc(const std::string& s) {
  if (s == "periodic") return BoundaryKind::Periodic;
  if (s == "zero-gradient" || s == "outflow") return BoundaryKind::ZeroGradient;
  throw ConfigError("unknown boundary kind '" + s + "'");
}

std::vector<double> slice_point(const RunConfig& cfg, const TensorGrid& grid) {
  std::vector<double> at = cfg.slice_at;
  if (at.empty())
    for (int d = 0; d < grid.q(); ++d) at.push_back(grid.stochastic_domain(d).hi);
  if (static_cast<int>(at.size()) != grid.q())
    throw ConfigError("slice_at must have one value per stochastic dimension");
  return at;
}

int nearest_cell(const TensorGrid& grid, const std::vector<double>& at) {
  std::vector<int> mi(std::max(grid.q(), 1));
  for (int d = 0; d < grid.q(); ++d) {
    const double rel = (at[d] - grid.stochastic_domain(d).lo) / grid.dy(d) - 0.5;
    const int idx = static_cast<int>(std::lround(rel));
    mi[d] = std::clamp(idx, 0, grid.cells_per_dim(d) - 1);
  }
  return grid.q() == 0 ? 0 : grid.linear_index(mi);
}

void write_stats_csv(const std::string& path, const TensorGrid& grid, const FieldStats& stats,
                     const std::vector<std::string>& names) {
  std::vector<std::string> headers{"x"};
  std::vector<Eigen::VectorXd> cols;
  Eigen::VectorXd x(grid.nx());
  for (int i = 0; i < grid.nx(); ++i) x[i] = grid.x_center(i);
  cols.push_back(x);
  for (size_t p = 0; p < names.size(); ++p) {
    headers.push_back("mean_" + names[p]);
    cols.push_back(stats.mean[p]);
  }
  for (size_t p = 0; p < names.size(); ++p) {
    headers.push_back("std_" + names[p]);
    cols.push_back(stats.std_dev[p]);
  }
  write_csv(path, headers, cols);
}

void write_slice_csv(const std::string& path, const TensorGrid& grid, const StateField& U,
                     int cell, const std::vector<std::string>& names) {
  std::vector<std::string> headers{"x"};
  std::vector<Eigen::VectorXd> cols;
  Eigen::VectorXd x(grid.nx());
  for (int i = 0; i < grid.nx(); ++i) x[i] = grid.x_center(i);
  cols.push_back(x);
  for (size_t p = 0; p < names.size(); ++p) {
    headers.push_back(names[p]);
    Eigen::VectorXd v(grid.nx());
    for (int i = 0; i < grid.nx(); ++i) v[i] = U.at(static_cast<int>(p), i, cell);
    cols.push_back(v);
  }
  write_csv(path, headers, cols);
}

SnapshotMatrix load_snapshots(const std::string& path, const SfvOperator& op) {
  SnapshotMatrix snap;
  snap.values = read_matrix(path);
  const json manifest = load_json(sibling(path, ".bin", ".json"));
  check_mesh(manifest, op.grid());
  snap.nx = manifest.at("mesh").at("nx").get<int>();
  snap.n_comp = manifest.at("n_comp").get<int>();
  snap.frame_times = manifest.at("frame_times").get<std::vector<double>>();
  const int m = static_cast<int>(snap.frame_times.size());
  if (snap.values.rows() != op.quadrature().total())
    throw ConfigError("snapshot rows do not match the quadrature node count");
  if (snap.values.cols() !=
      static_cast<Eigen::Index>(m) * snap.n_comp * (snap.nx + 1))
    throw ConfigError("snapshot column count does not match its manifest");
  for (int f = 0; f < m; ++f)
    for (int p = 0; p < snap.n_comp; ++p)
      for (int k = 0; k <= snap.nx; ++k) snap.columns.push_back({f, p, k});
  snap.validate();
  return snap;
}

struct BasisBundle {
  PodBasis basis;
  FaceIntegralMatrix face;
};

BasisBundle load_basis_bundle(const std::string& basis_path, const SfvOperator& op) {
  BasisBundle out;
  out.basis.V = read_matrix(basis_path);
  const Eigen::MatrixXd sig = read_matrix(sibling(basis_path, "_basis.bin", "_sigma.bin"));
  out.basis.singular_values = sig.col(0);
  out.face.B = read_matrix(sibling(basis_path, "_basis.bin", "_faceint.bin"));
  const json manifest = load_json(sibling(basis_path, "_basis.bin", "_basis.json"));
  check_mesh(manifest, op.grid());
  if (out.basis.V.rows() != op.quadrature().total())
    throw ConfigError("basis rows do not match the quadrature node count");
  return out;
}

}  // namespace

void RunConfig::validate() const {
  static const std::vector<std::string> problems{"burgers-sine", "sod-narrow", "sod-wide",
                                                 "custom"};
  static const std::vector<std::string> methods{"fom-state", "fom-flux", "rom", "rom-hr",
                                                "det-1d"};
  if (std::find(problems.begin(), problems.end(), problem) == problems.end())
    throw ConfigError("unknown problem '" + problem + "'");
  if (std::find(methods.begin(), methods.end(), method) == methods.end())
    throw ConfigError("unknown method '" + method + "'");
  if (nx < 3) throw ConfigError("nx must be at least 3");
  if (ny.empty()) throw ConfigError("ny must list at least one stochastic dimension");
  for (int c : ny)
    if (c < 1) throw ConfigError("stochastic cell counts must be positive");
  if (frames < 1) throw ConfigError("frames must be at least 1");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ConfigError("tolerances must be positive");
  if (!(weno_epsilon > 0.0)) throw ConfigError("weno_epsilon must be positive");
  if (snapshots != "intrusive" && snapshots != "nonintrusive")
    throw ConfigError("snapshots must be 'intrusive' or 'nonintrusive'");
  if (method == "rom" || method == "rom-hr") {
    if (basis_path.empty() && (snapshot_path.empty() || modes < 1))
      throw ConfigError("method '" + method +
                        "' needs basis_path, or snapshot_path together with modes");
  }
  if (method == "rom-hr" && hyper_points < 1)
    throw ConfigError("method 'rom-hr' needs hyper_points");
  if (method == "rom-hr" && modes > 0 && hyper_points < modes)
    throw ConfigError("hyper_points must be at least the mode count");
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    set_key(cfg, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override '" + assignment + "' is not of the form key=value");
  set_key(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  out << "problem = " << cfg.problem << '\n';
  out << "method = " << cfg.method << '\n';
  out << "nx = " << cfg.nx << '\n';
  out << "ny = " << join(cfg.ny) << '\n';
  out << "modes = " << cfg.modes << '\n';
  out << "hyper_points = " << cfg.hyper_points << '\n';
  out << "rel_tol = " << cfg.rel_tol << '\n';
  out << "abs_tol = " << cfg.abs_tol << '\n';
  out << "t_final = " << cfg.t_final << '\n';
  out << "frames = " << cfg.frames << '\n';
  out << "weno_epsilon = " << cfg.weno_epsilon << '\n';
  out << "snapshots = " << cfg.snapshots << '\n';
  out << "basis_path = " << cfg.basis_path << '\n';
  out << "snapshot_path = " << cfg.snapshot_path << '\n';
  out << "output_dir = " << cfg.output_dir << '\n';
  out << "output_prefix = " << cfg.output_prefix << '\n';
  out << "slice_at = " << join(cfg.slice_at) << '\n';
  out << "custom_law = " << cfg.custom_law << '\n';
  out << "custom_left = " << join(cfg.custom_left) << '\n';
  out << "custom_right = " << join(cfg.custom_right) << '\n';
  out << "custom_x0_base = " << cfg.custom_x0_base << '\n';
  out << "custom_x0_span = " << cfg.custom_x0_span << '\n';
  out << "custom_x_lo = " << cfg.custom_x_lo << '\n';
  out << "custom_x_hi = " << cfg.custom_x_hi << '\n';
  out << "custom_bc = " << cfg.custom_bc << '\n';
  return out.str();
}

ProblemSetup make_problem(const RunConfig& cfg) {
  cfg.validate();
  ProblemSetup setup;
  if (cfg.problem == "burgers-sine") {
    setup = burgers_sine(cfg.ny);
  } else if (cfg.problem == "sod-narrow") {
    setup = sod_narrow(cfg.ny);
  } else if (cfg.problem == "sod-wide") {
    setup = sod_wide(cfg.ny);
  } else {
    ConservationLaw law = cfg.custom_law == "euler" ? ConservationLaw::euler(1.4)
                                                    : ConservationLaw::burgers();
    if (cfg.custom_law != "euler" && cfg.custom_law != "burgers")
      throw ConfigError("custom_law must be 'burgers' or 'euler'");
    setup = custom_riemann(law, cfg.custom_left, cfg.custom_right, cfg.custom_x0_base,
                           cfg.custom_x0_span, Interval{cfg.custom_x_lo, cfg.custom_x_hi},
                           parse_bc(cfg.custom_bc), cfg.t_final > 0 ? cfg.t_final : 0.2,
                           cfg.ny);
  }
  if (cfg.t_final > 0.0) setup.t_final = cfg.t_final;
  return setup;
}

TimeIntegratorConfig make_integrator_config(const RunConfig& cfg, const ProblemSetup& setup) {
  TimeIntegratorConfig icfg;
  icfg.rel_tol = cfg.rel_tol;
  icfg.abs_tol = cfg.abs_tol;
  icfg.t_final = setup.t_final;
  icfg.frames = cfg.frames;
  return icfg;
}

std::vector<std::string> component_names(const ConservationLaw& law) {
  if (law.kind == LawKind::Burgers) return {"u"};
  return {"rho", "rhou", "E"};
}

std::string artifact_path(const RunConfig& cfg, const std::string& suffix) {
  std::filesystem::create_directories(cfg.output_dir);
  return (std::filesystem::path(cfg.output_dir) / (cfg.output_prefix + "_" + suffix)).string();
}

SolveArtifacts cmd_solve(const RunConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  cfg.validate();
  const ProblemSetup setup = make_problem(cfg);
  WenoParams weno;
  weno.epsilon = cfg.weno_epsilon;
  const std::vector<std::string> names = component_names(setup.law);

  SolveArtifacts out;
  json summary;
  summary["problem"] = cfg.problem;
  summary["method"] = cfg.method;
  summary["nx"] = cfg.nx;
  summary["ny"] = cfg.ny;
  summary["q"] = cfg.ny.size();
  summary["t_final"] = setup.t_final;
  summary["frames"] = cfg.frames;
  summary["rel_tol"] = cfg.rel_tol;
  summary["abs_tol"] = cfg.abs_tol;

  if (cfg.method == "det-1d") {
    TensorGrid grid(setup.x_domain, cfg.nx, setup.stochastic_dims);
    const std::vector<double> at = slice_point(cfg, grid);
    TimeIntegratorConfig icfg = make_integrator_config(cfg, setup);
    const auto u0 = [&](double x, double* u) { setup.initial(x, at.data(), u); };
    const DeterministicRun run = run_deterministic_1d(setup.law, setup.x_domain, cfg.nx,
                                                      setup.bc, weno, u0, icfg);
    TensorGrid grid1(setup.x_domain, cfg.nx, {});
    const StateField& final_state = run.frames.back();
    FieldStats stats;
    for (int p = 0; p < setup.law.n_components; ++p) {
      Eigen::VectorXd v(cfg.nx);
      for (int i = 0; i < cfg.nx; ++i) v[i] = final_state.at(p, i, 0);
      stats.mean.push_back(v);
      stats.std_dev.push_back(Eigen::VectorXd::Zero(cfg.nx));
    }
    out.stats = stats;
    out.stats_csv = artifact_path(cfg, "stats.csv");
    write_stats_csv(out.stats_csv, grid1, stats, names);
    out.slice_csv = artifact_path(cfg, "slice.csv");
    write_slice_csv(out.slice_csv, grid1, final_state, 0, names);
    summary["parameter_point"] = at;
    summary["outputs"] = {{"stats_csv", out.stats_csv}, {"slice_csv", out.slice_csv}};
    out.summary_json = artifact_path(cfg, "summary.json");
    const auto t_end = std::chrono::steady_clock::now();
    summary["wall_time_seconds"] = std::chrono::duration<double>(t_end - t_start).count();
    write_json(out.summary_json, summary);
    return out;
  }

  TensorGrid grid(setup.x_domain, cfg.nx, setup.stochastic_dims);
  SfvOperator op(setup.law, grid, DensityFn::uniform(), setup.bc, weno);
  TimeIntegratorConfig icfg = make_integrator_config(cfg, setup);
  const StateField U0 = op.project_initial_condition(setup.initial);
  if (icfg.initial_dt <= 0.0) icfg.initial_dt = op.cfl_initial_dt(U0);

  Trajectory traj;
  if (cfg.method == "fom-state" || cfg.method == "fom-flux") {
    const RhsVariant variant =
        cfg.method == "fom-state" ? RhsVariant::State : RhsVariant::Flux;
    RhsFn rhs;
    if (variant == RhsVariant::State)
      rhs = [&op](double, const StateField& U, StateField& d) {
        op.rhs_state_reconstruction(U, d);
      };
    else
      rhs = [&op](double, const StateField& U, StateField& d) {
        op.rhs_flux_reconstruction(U, d);
      };
    traj = integrate(U0, rhs, icfg);
  } else {
    BasisBundle bundle;
    if (!cfg.basis_path.empty()) {
      bundle = load_basis_bundle(cfg.basis_path, op);
      if (cfg.modes > 0 && cfg.modes != bundle.basis.modes())
        throw ConfigError("stored basis has " + std::to_string(bundle.basis.modes()) +
                          " modes, config asks for " + std::to_string(cfg.modes));
    } else {
      const SnapshotMatrix snap = load_snapshots(cfg.snapshot_path, op);
      bundle.basis = compute_pod(snap, cfg.modes);
      bundle.face = build_face_integrals(bundle.basis, op.quadrature());
    }
    RomOperator rom(op, bundle.basis, bundle.face);
    summary["modes"] = rom.basis().modes();
    RhsFn rhs;
    if (cfg.method == "rom-hr") {
      rom.set_hyper_reduction(qdeim_select(rom.basis(), cfg.hyper_points, grid));
      summary["hyper_points"] = cfg.hyper_points;
      summary["closure_cells"] = rom.index().closure.size();
      rhs = [&rom](double, const StateField& U, StateField& d) { rom.hyper_reduced_rhs(U, d); };
    } else {
      rhs = [&rom](double, const StateField& U, StateField& d) { rom.rhs(U, d); };
    }
    traj = integrate(U0, rhs, icfg);
  }

  const FieldStats stats = field_stats(traj.final_state, op.measures());
  out.stats = stats;
  out.stats_csv = artifact_path(cfg, "stats.csv");
  write_stats_csv(out.stats_csv, grid, stats, names);

  const std::vector<double> at = slice_point(cfg, grid);
  const int cell = nearest_cell(grid, at);
  out.slice_csv = artifact_path(cfg, "slice.csv");
  write_slice_csv(out.slice_csv, grid, traj.final_state, cell, names);

  out.flux_evals = op.counters().flux_evals;
  out.steps_accepted = traj.steps_accepted;
  summary["steps_accepted"] = traj.steps_accepted;
  summary["steps_rejected"] = traj.steps_rejected;
  summary["max_error_estimate"] = traj.max_error_estimate;
  summary["flux_evals"] = op.counters().flux_evals;
  summary["rhs_calls"] = op.counters().rhs_calls;
  summary["slice_requested"] = at;
  std::vector<double> centers;
  {
    std::vector<int> mi(std::max(grid.q(), 1));
    grid.multi_index(cell, mi);
    for (int d = 0; d < grid.q(); ++d) centers.push_back(grid.y_center(d, mi[d]));
  }
  summary["slice_cell_center"] = centers;
  summary["slice_rule"] = "nearest stochastic cell center";
  summary["outputs"] = {{"stats_csv", out.stats_csv}, {"slice_csv", out.slice_csv}};
  const auto t_end = std::chrono::steady_clock::now();
  summary["wall_time_seconds"] = std::chrono::duration<double>(t_end - t_start).count();
  out.summary_json = artifact_path(cfg, "summary.json");
  write_json(out.summary_json, summary);
  return out;
}

SnapshotArtifacts cmd_snapshots(const RunConfig& cfg) {
  cfg.validate();
  const ProblemSetup setup = make_problem(cfg);
  WenoParams weno;
  weno.epsilon = cfg.weno_epsilon;
  TensorGrid grid(setup.x_domain, cfg.nx, setup.stochastic_dims);
  SfvOperator op(setup.law, grid, DensityFn::uniform(), setup.bc, weno);
  TimeIntegratorConfig icfg = make_integrator_config(cfg, setup);

  SnapshotMatrix snap;
  if (cfg.snapshots == "intrusive") {
    const FomResult fom = run_fom(op, setup.initial, RhsVariant::Flux, icfg);
    snap = collect_intrusive(op, fom.trajectory.frames, fom.trajectory.frame_times);
  } else {
    snap = collect_nonintrusive(op, setup.initial, icfg);
  }

  SnapshotArtifacts out;
  out.rows = snap.values.rows();
  out.cols = snap.values.cols();
  out.matrix_path = artifact_path(cfg, "snapshots.bin");
  write_matrix(out.matrix_path, snap.values);

  json manifest;
  manifest["provenance"] = cfg.snapshots;
  manifest["problem"] = cfg.problem;
  manifest["n_comp"] = snap.n_comp;
  manifest["frame_times"] = snap.frame_times;
  manifest["rows"] = snap.values.rows();
  manifest["cols"] = snap.values.cols();
  manifest["nodes_per_cell"] = op.quadrature().nodes_per_cell;
  manifest["mesh"] = mesh_manifest(grid, setup.bc);
  manifest["mesh_hash"] = hex64(fnv1a64_file(out.matrix_path));
  out.manifest_path = sibling(out.matrix_path, ".bin", ".json");
  write_json(out.manifest_path, manifest);
  return out;
}

BasisArtifacts cmd_basis(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.snapshot_path.empty()) throw ConfigError("basis construction needs snapshot_path");
  if (cfg.modes < 1) throw ConfigError("basis construction needs modes >= 1");
  const ProblemSetup setup = make_problem(cfg);
  WenoParams weno;
  weno.epsilon = cfg.weno_epsilon;
  TensorGrid grid(setup.x_domain, cfg.nx, setup.stochastic_dims);
  SfvOperator op(setup.law, grid, DensityFn::uniform(), setup.bc, weno);

  const SnapshotMatrix snap = load_snapshots(cfg.snapshot_path, op);
  const PodBasis basis = compute_pod(snap, cfg.modes);
  const FaceIntegralMatrix face = build_face_integrals(basis, op.quadrature());

  BasisArtifacts out;
  out.modes = basis.modes();
  out.basis_path = artifact_path(cfg, "basis.bin");
  write_matrix(out.basis_path, basis.V);
  out.sigma_path = artifact_path(cfg, "sigma.bin");
  write_matrix(out.sigma_path, basis.singular_values);
  out.face_path = artifact_path(cfg, "faceint.bin");
  write_matrix(out.face_path, face.B);
  if (cfg.hyper_points > 0) {
    const HyperReductionIndex index = qdeim_select(basis, cfg.hyper_points, grid);
    Eigen::MatrixXd idx(index.nodes.size(), 1);
    for (size_t r = 0; r < index.nodes.size(); ++r) idx(r, 0) = index.nodes[r];
    out.qdeim_path = artifact_path(cfg, "qdeim.bin");
    write_matrix(out.qdeim_path, idx);
  }

  json manifest;
  manifest["N"] = basis.modes();
  manifest["N_H"] = cfg.hyper_points;
  manifest["q"] = grid.q();
  manifest["N_y"] = grid.ny();
  manifest["N_q"] = op.quadrature().nodes_per_cell;
  manifest["snapshot_hash"] = hex64(fnv1a64_file(cfg.snapshot_path));
  manifest["mesh"] = mesh_manifest(grid, setup.bc);
  out.manifest_path = artifact_path(cfg, "basis.json");
  write_json(out.manifest_path, manifest);
  return out;
}

ErrorReport cmd_compare(const std::string& csv_a, const std::string& csv_b) {
  const auto parse = [](const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw IoError("'" + path + "' is empty");
    const std::vector<std::string> header = split(trim(line), ',');
    if (header.empty() || header[0] != "x")
      throw IoError("'" + path + "' is not a statistics CSV (no x column)");
    size_t n_mean = 0;
    while (1 + n_mean < header.size() && header[1 + n_mean].rfind("mean_", 0) == 0) ++n_mean;
    if (n_mean == 0) throw IoError("'" + path + "' has no mean columns");
    std::vector<std::vector<double>> cols(header.size());
    while (std::getline(in, line)) {
      if (trim(line).empty()) continue;
      const std::vector<std::string> items = split(trim(line), ',');
      if (items.size() != header.size()) throw IoError("'" + path + "' has ragged rows");
      for (size_t c = 0; c < items.size(); ++c)
        cols[c].push_back(parse_double("csv", trim(items[c])));
    }
    FieldStats stats;
    for (size_t p = 0; p < n_mean; ++p)
      stats.mean.push_back(
          Eigen::Map<const Eigen::VectorXd>(cols[1 + p].data(), cols[1 + p].size()));
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(cols[0].data(), cols[0].size());
    return std::pair<Eigen::VectorXd, FieldStats>(x, stats);
  };
  const auto [xa, sa] = parse(csv_a);
  const auto [xb, sb] = parse(csv_b);
  if (xa.size() != xb.size()) throw ConfigError("compared runs use different meshes");
  const double dx = xa.size() > 1 ? xa[1] - xa[0] : 1.0;
  return relative_l1(sa, sb, Eigen::VectorXd::Constant(xa.size(), dx));
}

namespace {

// run one (problem, method) pair and return final-time statistics
FieldStats sweep_run(const ProblemSetup& setup, int nx, const WenoParams& weno,
                     const TimeIntegratorConfig& icfg, RhsVariant variant) {
  TensorGrid grid(setup.x_domain, nx, setup.stochastic_dims);
  SfvOperator op(setup.law, grid, DensityFn::uniform(), setup.bc, weno);
  const FomResult fom = run_fom(op, setup.initial, variant, icfg);
  return field_stats(fom.trajectory.final_state, op.measures());
}

void write_sweep_csv(const std::string& path, const std::string& res_name,
                     const std::vector<int>& res, const std::vector<double>& err) {
  Eigen::VectorXd r(res.size()), e(err.size()), ratio(err.size()), order(err.size());
  for (size_t i = 0; i < res.size(); ++i) {
    r[i] = res[i];
    e[i] = err[i];
    const auto rat = i ? error_ratio(err[i - 1], err[i]) : std::nullopt;
    const auto ord = i ? convergence_order(err[i - 1], err[i]) : std::nullopt;
    ratio[i] = rat ? *rat : std::numeric_limits<double>::quiet_NaN();
    order[i] = ord ? *ord : std::numeric_limits<double>::quiet_NaN();
  }
  write_csv(path, {res_name, "rel_l1_error", "ratio", "order"}, {r, e, ratio, order});
}

}  // namespace

ResolutionSweep reproduce_table1(const RunConfig& base, bool include_finest) {
  ResolutionSweep sweep;
  std::vector<int> per_dim{4, 8, 16, 32};
  if (include_finest) per_dim.push_back(64);
  WenoParams weno;
  weno.epsilon = base.weno_epsilon;
  for (int r : per_dim) {
    const ProblemSetup setup = burgers_sine({r, r});
    TimeIntegratorConfig icfg;
    icfg.rel_tol = base.rel_tol;
    icfg.abs_tol = base.abs_tol;
    icfg.t_final = setup.t_final;
    icfg.frames = base.frames;
    const FieldStats state = sweep_run(setup, 64, weno, icfg, RhsVariant::State);
    const FieldStats flux = sweep_run(setup, 64, weno, icfg, RhsVariant::Flux);
    const Eigen::VectorXd widths = Eigen::VectorXd::Constant(64, 1.0 / 64);
    sweep.ny.push_back(r);
    sweep.error.push_back(relative_l1(flux, state, widths).aggregate);
  }
  return sweep;
}

ResolutionSweep reproduce_table2(const RunConfig& base) {
  ResolutionSweep sweep;
  WenoParams weno;
  weno.epsilon = base.weno_epsilon;
  for (int r : {4, 8, 16, 32, 64}) {
    const ProblemSetup setup = sod_narrow({r});
    TimeIntegratorConfig icfg;
    icfg.rel_tol = base.rel_tol;
    icfg.abs_tol = base.abs_tol;
    icfg.t_final = setup.t_final;
    icfg.frames = base.frames;
    const FieldStats state = sweep_run(setup, 128, weno, icfg, RhsVariant::State);
    const FieldStats flux = sweep_run(setup, 128, weno, icfg, RhsVariant::Flux);
    const Eigen::VectorXd widths = Eigen::VectorXd::Constant(128, 1.0 / 128);
    sweep.ny.push_back(r);
    sweep.error.push_back(relative_l1(flux, state, widths).aggregate);
  }
  return sweep;
}

RomSweep reproduce_rom_sweep(const RunConfig& base) {
  const bool sod = base.problem.rfind("sod", 0) == 0;
  const ProblemSetup setup = sod ? sod_narrow({32}) : burgers_sine({32, 32});
  const int nx = sod ? 128 : 64;
  WenoParams weno;
  weno.epsilon = base.weno_epsilon;
  TensorGrid grid(setup.x_domain, nx, setup.stochastic_dims);
  SfvOperator op(setup.law, grid, DensityFn::uniform(), setup.bc, weno);
  TimeIntegratorConfig icfg;
  icfg.rel_tol = base.rel_tol;
  icfg.abs_tol = base.abs_tol;
  icfg.t_final = setup.t_final;
  icfg.frames = base.frames;

  const FomResult fom = run_fom(op, setup.initial, RhsVariant::Flux, icfg);
  const FieldStats fom_stats = field_stats(fom.trajectory.final_state, op.measures());
  const SnapshotMatrix snap =
      collect_intrusive(op, fom.trajectory.frames, fom.trajectory.frame_times);
  const Eigen::VectorXd widths = Eigen::VectorXd::Constant(nx, grid.dx());
  const StateField U0 = op.project_initial_condition(setup.initial);
  TimeIntegratorConfig icfg_run = icfg;
  icfg_run.initial_dt = op.cfl_initial_dt(U0);

  RomSweep sweep;
  sweep.fom_tv = total_variation(fom_stats.mean[0]);
  const std::vector<int> mode_list = sod ? std::vector<int>{4, 8, 16, 32}
                                         : std::vector<int>{10, 20, 50};
  for (int N : mode_list) {
    const PodBasis basis = compute_pod(snap, N);
    const FaceIntegralMatrix face = build_face_integrals(basis, op.quadrature());
    RomOperator rom(op, basis, face);
    const RhsFn rhs = [&rom](double, const StateField& U, StateField& d) { rom.rhs(U, d); };
    const Trajectory traj = integrate(U0, rhs, icfg_run);
    const FieldStats stats = field_stats(traj.final_state, op.measures());
    sweep.modes.push_back(N);
    sweep.error.push_back(relative_l1(stats, fom_stats, widths).aggregate);
    sweep.tv.push_back(total_variation(stats.mean[0]));
  }
  return sweep;
}

HyperSweep reproduce_hr_sweep(const RunConfig& base) {
  const ProblemSetup setup = burgers_sine({32, 32});
  const int nx = 64;
  const int N = base.modes > 0 ? base.modes : 50;
  WenoParams weno;
  weno.epsilon = base.weno_epsilon;
  TensorGrid grid(setup.x_domain, nx, setup.stochastic_dims);
  SfvOperator op(setup.law, grid, DensityFn::uniform(), setup.bc, weno);
  TimeIntegratorConfig icfg;
  icfg.rel_tol = base.rel_tol;
  icfg.abs_tol = base.abs_tol;
  icfg.t_final = setup.t_final;
  icfg.frames = base.frames;

  const FomResult fom = run_fom(op, setup.initial, RhsVariant::Flux, icfg);
  const FieldStats fom_stats = field_stats(fom.trajectory.final_state, op.measures());
  const SnapshotMatrix snap =
      collect_intrusive(op, fom.trajectory.frames, fom.trajectory.frame_times);
  const Eigen::VectorXd widths = Eigen::VectorXd::Constant(nx, grid.dx());
  const StateField U0 = op.project_initial_condition(setup.initial);
  TimeIntegratorConfig icfg_run = icfg;
  icfg_run.initial_dt = op.cfl_initial_dt(U0);

  const PodBasis basis = compute_pod(snap, N);
  const FaceIntegralMatrix face = build_face_integrals(basis, op.quadrature());

  HyperSweep sweep;
  {
    RomOperator rom(op, basis, face);
    const RhsFn rhs = [&rom](double, const StateField& U, StateField& d) { rom.rhs(U, d); };
    const Trajectory traj = integrate(U0, rhs, icfg_run);
    sweep.non_hr_error =
        relative_l1(field_stats(traj.final_state, op.measures()), fom_stats, widths).aggregate;
  }
  for (int nh : {N, static_cast<int>(N * 1.5), N * 2, N * 3}) {
    RomOperator rom(op, basis, face);
    rom.set_hyper_reduction(qdeim_select(basis, nh, grid));
    const RhsFn rhs =
        [&rom](double, const StateField& U, StateField& d) { rom.hyper_reduced_rhs(U, d); };
    const Trajectory traj = integrate(U0, rhs, icfg_run);
    sweep.hyper_points.push_back(nh);
    sweep.error.push_back(
        relative_l1(field_stats(traj.final_state, op.measures()), fom_stats, widths).aggregate);
  }
  return sweep;
}

SodWideReport reproduce_sod_wide_check(const RunConfig& base) {
  const ProblemSetup setup = sod_wide({32});
  const int nx = 128;
  WenoParams weno;
  weno.epsilon = base.weno_epsilon;
  TimeIntegratorConfig icfg;
  icfg.rel_tol = base.rel_tol;
  icfg.abs_tol = base.abs_tol;
  icfg.t_final = setup.t_final;
  icfg.frames = base.frames;

  SodWideReport report;
  try {
    TensorGrid grid(setup.x_domain, nx, setup.stochastic_dims);
    SfvOperator op(setup.law, grid, DensityFn::uniform(), setup.bc, weno);
    run_fom(op, setup.initial, RhsVariant::State, icfg);
  } catch (const PositivityError& e) {
    report.state_positivity_failure = true;
    report.state_message = e.what();
  }

  TensorGrid grid(setup.x_domain, nx, setup.stochastic_dims);
  SfvOperator op(setup.law, grid, DensityFn::uniform(), setup.bc, weno);
  const FomResult fom = run_fom(op, setup.initial, RhsVariant::Flux, icfg);
  report.flux_completed = true;
  const StateField& final_state = fom.trajectory.final_state;
  report.min_density = std::numeric_limits<double>::infinity();
  report.min_pressure = std::numeric_limits<double>::infinity();
  for (int i = 0; i < final_state.nx; ++i) {
    for (int j = 0; j < final_state.ny; ++j) {
      const double rho = final_state.at(0, i, j);
      const double p = euler_pressure(rho, final_state.at(1, i, j), final_state.at(2, i, j),
                                      setup.law.gamma);
      report.min_density = std::min(report.min_density, rho);
      report.min_pressure = std::min(report.min_pressure, p);
    }
  }
  return report;
}

void cmd_reproduce(const std::string& experiment, const RunConfig& base, bool full) {
  std::filesystem::create_directories(base.output_dir);
  const auto out = [&base](const std::string& name) {
    return (std::filesystem::path(base.output_dir) / name).string();
  };
  if (experiment == "table1") {
    const ResolutionSweep sweep = reproduce_table1(base, full);
    write_sweep_csv(out("table1.csv"), "ny_per_dim", sweep.ny, sweep.error);
  } else if (experiment == "table2") {
    const ResolutionSweep sweep = reproduce_table2(base);
    write_sweep_csv(out("table2.csv"), "ny", sweep.ny, sweep.error);
  } else if (experiment == "burgers-rom-sweep" || experiment == "sod-rom-sweep") {
    RunConfig cfg = base;
    cfg.problem = experiment == "sod-rom-sweep" ? "sod-narrow" : "burgers-sine";
    const RomSweep sweep = reproduce_rom_sweep(cfg);
    Eigen::VectorXd n(sweep.modes.size()), e(sweep.modes.size()), tv(sweep.modes.size());
    for (size_t i = 0; i < sweep.modes.size(); ++i) {
      n[i] = sweep.modes[i];
      e[i] = sweep.error[i];
      tv[i] = sweep.tv[i];
    }
    const std::string stem =
        experiment == "sod-rom-sweep" ? "sod_rom_sweep" : "burgers_rom_sweep";
    write_csv(out(stem + ".csv"), {"modes", "rel_l1_error", "tv_mean"}, {n, e, tv});
    write_json(out(stem + ".json"), json{{"fom_tv_mean", sweep.fom_tv}});
  } else if (experiment == "burgers-hr-sweep") {
    const HyperSweep sweep = reproduce_hr_sweep(base);
    Eigen::VectorXd nh(sweep.hyper_points.size()), e(sweep.hyper_points.size());
    for (size_t i = 0; i < sweep.hyper_points.size(); ++i) {
      nh[i] = sweep.hyper_points[i];
      e[i] = sweep.error[i];
    }
    write_csv(out("burgers_hr_sweep.csv"), {"hyper_points", "rel_l1_error"}, {nh, e});
    write_json(out("burgers_hr_sweep.json"), json{{"non_hr_error", sweep.non_hr_error}});
  } else if (experiment == "sod-wide-check") {
    const SodWideReport report = reproduce_sod_wide_check(base);
    write_json(out("sod_wide_check.json"),
               json{{"state_positivity_failure", report.state_positivity_failure},
                    {"state_message", report.state_message},
                    {"flux_completed", report.flux_completed},
                    {"min_density", report.min_density},
                    {"min_pressure", report.min_pressure}});
  } else {
    throw ConfigError("unknown experiment '" + experiment + "'");
  }
}

}  // namespace sfv
