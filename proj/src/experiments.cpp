#include "lumplab/experiments.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lumplab/lumping.hpp"
#include "lumplab/matrix_io.hpp"

namespace lumplab {

using nlohmann::json;

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& item : obj.items())
    if (!allowed.count(item.key()))
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
}

const std::set<std::string> kExperiments = {"assemble", "spectrum", "lump",
                                            "converge", "integrate", "nkp"};
const std::set<std::string> kGeometries = {"unit_interval", "unit_square", "quarter_annulus",
                                           "stretched_square", "reentrant_corner", "unit_cube"};
const std::set<std::string> kDensities = {"constant", "appendix"};
const std::set<std::string> kProblems = {"laplace_1d_mixed", "laplace_2d_mixed",
                                         "laplace_1d_dirichlet", "wave_1d", "wave_2d_annulus"};

Discretization parse_discretization(const json& j, bool need_subdivisions) {
  std::set<std::string> allowed = {"degrees", "geometry", "density", "bc"};
  if (need_subdivisions) allowed.insert("subdivisions");
  check_keys(j, allowed, "discretization");
  Discretization d;
  if (!j.contains("degrees")) throw ConfigError("discretization.degrees is required");
  d.degrees = j.at("degrees").get<std::vector<int>>();
  if (d.degrees.empty() || d.degrees.size() > 3)
    throw ConfigError("discretization needs 1 to 3 directions");
  for (int p : d.degrees)
    if (p < 1 || p > 9) throw ConfigError("degrees must lie in 1..9");
  if (need_subdivisions) {
    if (!j.contains("subdivisions")) throw ConfigError("discretization.subdivisions is required");
    d.subdivisions = j.at("subdivisions").get<std::vector<int>>();
    if (d.subdivisions.size() != d.degrees.size())
      throw ConfigError("degrees and subdivisions must have matching lengths");
    for (int m : d.subdivisions)
      if (m < 1) throw ConfigError("subdivisions must be >= 1");
  }
  d.geometry = j.value("geometry", std::string("unit_interval"));
  if (!kGeometries.count(d.geometry)) throw ConfigError("unknown geometry id: " + d.geometry);
  d.density = j.value("density", std::string("constant"));
  if (!kDensities.count(d.density)) throw ConfigError("unknown density id: " + d.density);
  if (j.contains("bc"))
    d.bc = j.at("bc").get<std::vector<std::string>>();
  else
    d.bc.assign(d.degrees.size(), "dirichlet");
  if (d.bc.size() != d.degrees.size())
    throw ConfigError("bc list must have one entry per direction");
  for (const auto& b : d.bc) parse_bc(b);  // validates
  return d;
}

}  // namespace

DiscreteModel build_model(const Discretization& d) {
  GeometryMap geom = GeometryMap::named(d.geometry);
  DensityField rho = DensityField::named(d.density);
  if (d.degrees.size() != geom.dim())
    throw ConfigError("discretization dimension does not match the geometry");
  std::vector<SplineSpace> spaces;
  std::vector<DirectionBc> bcs;
  for (std::size_t i = 0; i < d.degrees.size(); ++i) {
    spaces.emplace_back(d.degrees[i], d.subdivisions[i]);
    bcs.push_back(parse_bc(d.bc[i]));
  }
  if (d.degrees.size() == 1) return assemble_1d(spaces[0], rho, geom, bcs[0]);
  if (d.degrees.size() == 2) return assemble_2d(spaces, rho, geom, bcs);
  return assemble_3d(spaces, rho, bcs);
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, {"experiment", "discretization", "operators", "meshes", "problem", "final_time",
                 "safety", "sample_times", "export_dofs", "rank", "seed", "outputs"},
             "config");
  ExperimentConfig cfg;
  if (!j.contains("experiment")) throw ConfigError("config.experiment is required");
  cfg.experiment = j.at("experiment").get<std::string>();
  if (!kExperiments.count(cfg.experiment))
    throw ConfigError("unknown experiment id: " + cfg.experiment);

  const bool is_converge = cfg.experiment == "converge";
  if (!j.contains("discretization")) throw ConfigError("config.discretization is required");
  cfg.disc = parse_discretization(j.at("discretization"), !is_converge);

  if (j.contains("operators")) cfg.operators = j.at("operators").get<std::vector<std::string>>();
  if (j.contains("meshes")) {
    cfg.meshes = j.at("meshes").get<std::vector<int>>();
    for (int m : cfg.meshes)
      if (m < 1) throw ConfigError("meshes entries must be >= 1");
  }
  if (j.contains("problem")) {
    cfg.problem = j.at("problem").get<std::string>();
    if (!kProblems.count(cfg.problem)) throw ConfigError("unknown problem id: " + cfg.problem);
  }
  cfg.final_time = j.value("final_time", 6.0);
  cfg.safety = j.value("safety", 0.85);
  if (j.contains("sample_times")) cfg.sample_times = j.at("sample_times").get<Vec>();
  if (j.contains("export_dofs"))
    cfg.export_dofs = j.at("export_dofs").get<std::vector<std::size_t>>();
  cfg.rank = j.value("rank", std::size_t{1});
  if (cfg.rank < 1) throw ConfigError("rank must be >= 1");
  cfg.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("outputs")) {
    if (!j.at("outputs").is_object()) throw ConfigError("outputs must be an object");
    for (const auto& item : j.at("outputs").items()) {
      if (!item.value().is_string()) throw ConfigError("outputs values must be strings");
      cfg.outputs[item.key()] = item.value().get<std::string>();
    }
  }

  if (cfg.experiment == "spectrum" || cfg.experiment == "lump" || cfg.experiment == "converge" ||
      cfg.experiment == "integrate") {
    if (cfg.operators.empty()) throw ConfigError(cfg.experiment + " requires an operator list");
  }
  if (is_converge) {
    if (cfg.meshes.size() < 3) throw ConfigError("converge requires at least 3 meshes");
    if (cfg.problem.empty()) throw ConfigError("converge requires a problem id");
  }
  if (cfg.experiment == "integrate" && cfg.problem.empty())
    throw ConfigError("integrate requires a problem id");

  char hex[32];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(fnv1a64(j.dump())));
  cfg.config_hash = hex;
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return from_json_text(ss.str());
}

BuiltOperator build_operator(const std::string& name, const DiscreteModel& model) {
  SymMatrix mass = model.mass();
  if (name == "M" || name == "consistent") {
    return {name, MassOperator::dense(mass, name), mass};
  }
  if (name.rfind("NKP", 0) == 0) {
    std::vector<std::size_t> dims;
    for (const auto& f : model.free_per_dir) dims.push_back(f.size());
    if (dims.size() != 2) throw ConfigError("NKP operators need a 2D discretization");
    if (name.rfind("NKP_P", 0) == 0) {
      const std::string idx = name.substr(5);
      if (idx.size() != 2 || !std::isdigit(idx[0]) || !std::isdigit(idx[1]))
        throw ConfigError("two-level operator must look like NKP_P<ij>: " + name);
      NkpResult res = nkp_rank1(mass, dims[0], dims[1]);
      KronOperator p = make_Pij({res.factors[0], res.factors[1]},
                                {std::size_t(idx[0] - '0'), std::size_t(idx[1] - '0')});
      return {name, MassOperator::kron(p, name), p.materialize(8192)};
    }
    std::size_t r = 1;
    if (name.size() > 3) r = std::stoul(name.substr(3));
    KronOperator approx = nkp_rank_r(mass, dims[0], dims[1], r);
    SymMatrix dense = approx.materialize(8192);
    return {name, MassOperator::dense(dense, name), dense};
  }
  if (name.size() >= 2 && name[0] == 'P') {
    const std::string idx = name.substr(1);
    for (char c : idx)
      if (!std::isdigit(c) || c == '0')
        throw ConfigError("operator indices must be digits 1-9: " + name);
    if (idx.size() == 1) {
      auto pi = make_Pi(mass, std::size_t(idx[0] - '0'));
      return {name, MassOperator::banded(pi.matrix, name), pi.matrix.dense()};
    }
    if (!model.kron_flag)
      throw ConfigError("operator " + name + " needs a Kronecker-structured mass matrix");
    std::vector<SymMatrix> factors = model.mass_factors_free();
    if (idx.size() != factors.size())
      throw ConfigError("operator " + name + " has the wrong number of indices");
    std::vector<std::size_t> indices;
    for (char c : idx) indices.push_back(std::size_t(c - '0'));
    KronOperator p = make_Pij(factors, indices);
    return {name, MassOperator::kron(p, name), p.materialize(8192)};
  }
  throw ConfigError("unknown operator id: " + name);
}

namespace {

std::string output_path(const ExperimentConfig& cfg, const std::string& out_dir,
                        const std::string& logical, const std::string& fallback) {
  const auto it = cfg.outputs.find(logical);
  const std::string name = it == cfg.outputs.end() ? fallback : it->second;
  return out_dir + "/" + name;
}

std::string csv_header(const ExperimentConfig& cfg, const std::string& columns) {
  return "# config_hash=" + cfg.config_hash + "\n" + columns + "\n";
}

void write_json_file(const std::string& path, const json& j) {
  write_file_atomic(path, j.dump(2) + "\n");
}

}  // namespace

void run_assemble_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  DiscreteModel model = build_model(cfg.disc);
  write_matrix_market_file(output_path(cfg, out_dir, "mass", "M.mtx"), model.mass());
  write_matrix_market_file(output_path(cfg, out_dir, "stiffness", "K.mtx"), model.stiffness());
  json side;
  side["config_hash"] = cfg.config_hash;
  side["degrees"] = cfg.disc.degrees;
  side["subdivisions"] = cfg.disc.subdivisions;
  side["geometry"] = cfg.disc.geometry;
  side["density"] = cfg.disc.density;
  side["free_dofs"] = model.n_free();
  side["kronecker"] = model.kron_flag;
  write_json_file(output_path(cfg, out_dir, "sidecar", "model.json"), side);
}

SpectrumResult run_spectrum_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  DiscreteModel model = build_model(cfg.disc);
  SymMatrix k = model.stiffness();
  SymMatrix m = model.mass();

  SpectrumResult res;
  std::vector<BuiltOperator> ops;
  for (const auto& opname : cfg.operators) {
    ops.push_back(build_operator(opname, model));
    res.names.push_back(opname);
    res.spectra.push_back(gen_eig_values(k, ops.back().dense));
  }

  std::ostringstream csv;
  std::string cols = "k";
  for (const auto& n : res.names) cols += ",lambda_" + n;
  csv << csv_header(cfg, cols);
  const std::size_t nvals = res.spectra.empty() ? 0 : res.spectra.front().size();
  for (std::size_t i = 0; i < nvals; ++i) {
    csv << (i + 1);
    for (const auto& s : res.spectra) csv << "," << format_double(s[i]);
    csv << "\n";
  }
  write_file_atomic(output_path(cfg, out_dir, "spectrum_csv", "spectrum.csv"), csv.str());

  json summary;
  summary["config_hash"] = cfg.config_hash;
  summary["experiment"] = cfg.experiment;
  for (std::size_t i = 0; i < res.names.size(); ++i) {
    json entry;
    entry["lambda_min"] = res.spectra[i].front();
    entry["lambda_max"] = res.spectra[i].back();
    entry["critical_dt"] = 2.0 / std::sqrt(res.spectra[i].back());
    if (res.names[i] != "M" && res.names[i] != "consistent") {
      BoundReport rep = ratio_bounds(k, m, ops[i].dense);
      entry["ratio_lower"] = rep.rows.front().lower;
      entry["ratio_upper"] = rep.rows.front().upper;
      write_file_atomic(out_dir + "/ratio_" + res.names[i] + ".csv",
                        "# config_hash=" + cfg.config_hash + "\n" + rep.to_csv());
    }
    summary["operators"][res.names[i]] = entry;
  }
  write_json_file(output_path(cfg, out_dir, "summary_json", "summary.json"), summary);
  return res;
}

void run_lump_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  DiscreteModel model = build_model(cfg.disc);
  SymMatrix mass = model.mass();
  for (const auto& opname : cfg.operators) {
    BuiltOperator op = build_operator(opname, model);
    write_matrix_market_file(out_dir + "/" + opname + ".mtx", op.dense);
    if (opname.size() == 2 && opname[0] == 'P') {
      auto pi = make_Pi(mass, std::size_t(opname[1] - '0'));
      std::ostringstream os;
      os << "# config_hash=" << cfg.config_hash << "\n";
      write_band_csv(os, pi.matrix);
      write_file_atomic(out_dir + "/" + opname + "_bands.csv", os.str());
    }
  }
}

ConvergeResult run_convergence_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  const double w_exact = exact_eigenfrequency(cfg.problem);
  ConvergeResult res;
  res.names = cfg.operators;
  res.errors.assign(cfg.operators.size(), {});

  for (int mesh : cfg.meshes) {
    Discretization d = cfg.disc;
    d.subdivisions.assign(d.degrees.size(), mesh);
    DiscreteModel model = build_model(d);
    SymMatrix k = model.stiffness();
    res.hs.push_back(1.0 / static_cast<double>(mesh));
    for (std::size_t i = 0; i < cfg.operators.size(); ++i) {
      BuiltOperator op = build_operator(cfg.operators[i], model);
      const double wh = std::sqrt(gen_eig_values(k, op.dense).front());
      res.errors[i].push_back((w_exact - wh) / w_exact);
    }
  }

  // log-log least-squares slope over points above the double-precision floor
  for (std::size_t i = 0; i < cfg.operators.size(); ++i) {
    Vec hs, errs;
    for (std::size_t j = 0; j < res.hs.size(); ++j)
      if (std::fabs(res.errors[i][j]) > kSlopeNoiseFloor) {
        hs.push_back(res.hs[j]);
        errs.push_back(std::fabs(res.errors[i][j]));
      }
    double slope = 0.0;
    if (hs.size() >= 2) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (std::size_t j = 0; j < hs.size(); ++j) {
        const double x = std::log(hs[j]), y = std::log(errs[j]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
      }
      const double nn = static_cast<double>(hs.size());
      slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
    }
    res.slopes.push_back(slope);
  }

  std::ostringstream csv;
  std::string cols = "h";
  for (const auto& n : res.names) cols += ",err_" + n;
  csv << csv_header(cfg, cols);
  for (std::size_t j = 0; j < res.hs.size(); ++j) {
    csv << format_double(res.hs[j]);
    for (std::size_t i = 0; i < res.names.size(); ++i)
      csv << "," << format_double(res.errors[i][j]);
    csv << "\n";
  }
  write_file_atomic(output_path(cfg, out_dir, "errors_csv", "convergence.csv"), csv.str());

  json summary;
  summary["config_hash"] = cfg.config_hash;
  summary["problem"] = cfg.problem;
  summary["omega_exact"] = w_exact;
  for (std::size_t i = 0; i < res.names.size(); ++i)
    summary["slopes"][res.names[i]] = res.slopes[i];
  write_json_file(output_path(cfg, out_dir, "summary_json", "convergence_summary.json"), summary);
  return res;
}

namespace {

struct WaveProblem {
  Vec u0, v0;
  ForcingFn forcing;
  SpaceTimeFn exact;
};

WaveProblem make_wave_problem(const std::string& id, const DiscreteModel& model) {
  const std::size_t n = model.n_free();
  WaveProblem wp;
  if (id == "wave_1d") {
    wp.u0 = l2_project(model, [](const std::array<double, 3>& x) {
      return std::sin(4.0 * M_PI * x[0]);
    });
    wp.v0.assign(n, 0.0);
    wp.forcing = [n](double) { return Vec(n, 0.0); };
    wp.exact = [](const std::array<double, 3>& x, double t) {
      return std::sin(4.0 * M_PI * x[0]) * std::cos(4.0 * M_PI * t);
    };
    return wp;
  }
  if (id == "wave_2d_annulus") {
    // u(x,y,t) = w(x,y) sin(2 pi t) with w = (r^2-1)(r^2-4) sin(x) sin(y);
    // forcing f = u_tt - Laplace(u) evaluated analytically
    auto w_fn = [](const std::array<double, 3>& p) {
      const double r2 = p[0] * p[0] + p[1] * p[1];
      return (r2 - 1.0) * (r2 - 4.0) * std::sin(p[0]) * std::sin(p[1]);
    };
    auto g_fn = [&](const std::array<double, 3>& p) {
      const double x = p[0], y = p[1];
      const double r2 = x * x + y * y;
      const double g = (r2 - 1.0) * (r2 - 4.0);
      const double s = std::sin(x) * std::sin(y);
      const double grad_cross =
          (4.0 * r2 - 10.0) * (x * std::cos(x) * std::sin(y) + y * std::sin(x) * std::cos(y));
      const double lap_w = (16.0 * r2 - 20.0) * s + 2.0 * grad_cross - 2.0 * g * s;
      return -4.0 * M_PI * M_PI * g * s - lap_w;
    };
    Vec load = l2_load(model, g_fn);
    Vec load_free(n);
    for (std::size_t i = 0; i < n; ++i) load_free[i] = load[model.free_dofs[i]];
    wp.u0.assign(n, 0.0);
    wp.v0 = l2_project(model, [&](const std::array<double, 3>& p) {
      return 2.0 * M_PI * w_fn(p);
    });
    wp.forcing = [load_free](double t) { return scaled(load_free, std::sin(2.0 * M_PI * t)); };
    wp.exact = [w_fn](const std::array<double, 3>& p, double t) {
      return w_fn(p) * std::sin(2.0 * M_PI * t);
    };
    return wp;
  }
  throw ConfigError("unknown wave problem id: " + id);
}

}  // namespace

DynamicsResult run_dynamics_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  DiscreteModel model = build_model(cfg.disc);
  SymMatrix k = model.stiffness();
  WaveProblem wp = make_wave_problem(cfg.problem, model);

  DynamicsResult res;
  res.sample_times = cfg.sample_times;
  if (res.sample_times.empty()) res.sample_times = {cfg.final_time};

  json summary;
  summary["config_hash"] = cfg.config_hash;
  summary["problem"] = cfg.problem;
  summary["safety"] = cfg.safety;
  for (const auto& opname : cfg.operators) {
    BuiltOperator op = build_operator(opname, model);
    Trajectory traj;
    try {
      traj = central_difference(op.op, k, wp.forcing, wp.u0, wp.v0, cfg.final_time, cfg.safety);
    } catch (const UnstableError& e) {
      throw UnstableError("operator " + opname + ": time integration diverged", e.step());
    }
    res.names.push_back(opname);
    res.steps.push_back(traj.config.steps);
    res.dts.push_back(traj.config.dt);
    res.error_series.push_back(transient_l2_series(model, traj, wp.exact, res.sample_times));

    summary["operators"][opname]["steps"] = traj.config.steps;
    summary["operators"][opname]["dt"] = traj.config.dt;

    std::ostringstream final_csv;
    final_csv << csv_header(cfg, "dof,u_final");
    for (std::size_t i = 0; i < traj.u.back().size(); ++i)
      final_csv << i << "," << format_double(traj.u.back()[i]) << "\n";
    write_file_atomic(out_dir + "/final_" + opname + ".csv", final_csv.str());

    if (!cfg.export_dofs.empty()) {
      std::ostringstream tcsv;
      tcsv << "# config_hash=" << cfg.config_hash << "\n";
      write_trajectory_csv(tcsv, traj, cfg.export_dofs);
      write_file_atomic(out_dir + "/traj_" + opname + ".csv", tcsv.str());
    }
    std::ostringstream bin(std::ios::binary);
    write_trajectory_binary(bin, traj);
    write_file_atomic(out_dir + "/traj_" + opname + ".bin", bin.str());
  }

  std::ostringstream ecsv;
  std::string cols = "t";
  for (const auto& n : res.names) cols += ",l2err_" + n;
  ecsv << csv_header(cfg, cols);
  for (std::size_t j = 0; j < res.sample_times.size(); ++j) {
    ecsv << format_double(res.sample_times[j]);
    for (std::size_t i = 0; i < res.names.size(); ++i)
      ecsv << "," << format_double(res.error_series[i][j]);
    ecsv << "\n";
  }
  write_file_atomic(output_path(cfg, out_dir, "errors_csv", "l2_errors.csv"), ecsv.str());
  write_json_file(output_path(cfg, out_dir, "summary_json", "dynamics_summary.json"), summary);
  return res;
}

NkpExperimentResult run_nkp_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  DiscreteModel model = build_model(cfg.disc);
  SymMatrix mass = model.mass();
  std::vector<std::size_t> dims;
  for (const auto& f : model.free_per_dir) dims.push_back(f.size());
  if (dims.size() != 2) throw ConfigError("nkp experiment needs a 2D discretization");

  NkpExperimentResult res;
  NkpResult r1 = nkp_rank1(mass, dims[0], dims[1]);
  res.singular_values = r1.singular_values;
  res.kronecker_rank = r1.kronecker_rank;
  res.truncation_error = r1.truncation_error;

  std::ostringstream scsv;
  scsv << csv_header(cfg, "i,sigma_i");
  for (std::size_t i = 0; i < res.singular_values.size(); ++i)
    scsv << (i + 1) << "," << format_double(res.singular_values[i]) << "\n";
  write_file_atomic(output_path(cfg, out_dir, "singular_values_csv", "singular_values.csv"),
                    scsv.str());

  write_matrix_market_file(out_dir + "/factor_B.mtx", r1.factors[0]);
  write_matrix_market_file(out_dir + "/factor_C.mtx", r1.factors[1]);

  const std::size_t bound_rank = std::max<std::size_t>(cfg.rank, res.kronecker_rank);
  KronOperator op = nkp_rank_r(mass, dims[0], dims[1], std::min(bound_rank, r1.kronecker_rank));
  res.bound = cond_bound(op);

  json bj;
  bj["config_hash"] = cfg.config_hash;
  bj["delta"] = res.bound.delta;
  bj["applicable"] = res.bound.applicable;
  bj["bound"] = res.bound.bound;
  bj["kappa"] = res.bound.kappa;
  bj["kronecker_rank"] = res.kronecker_rank;
  bj["truncation_error"] = res.truncation_error;
  bj["singular_values"] = res.singular_values;
  write_json_file(output_path(cfg, out_dir, "cond_bound_json", "cond_bound.json"), bj);

  if (!cfg.meshes.empty()) {
    Discretization base = cfg.disc;
    auto maker = [&](int mesh) {
      Discretization d = base;
      d.subdivisions.assign(d.degrees.size(), mesh);
      return build_model(d);
    };
    res.scan = spectral_equivalence_scan(maker, cfg.meshes, cfg.rank);
    std::ostringstream tcsv;
    tcsv << csv_header(cfg, "h,lambda_min,lambda_max,definite");
    for (const auto& row : res.scan)
      tcsv << format_double(row.h) << "," << format_double(row.lambda_min) << ","
           << format_double(row.lambda_max) << "," << (row.definite ? 1 : 0) << "\n";
    write_file_atomic(output_path(cfg, out_dir, "equivalence_csv", "spectral_equivalence.csv"),
                      tcsv.str());
  }
  return res;
}

void run_experiment(const ExperimentConfig& cfg, const std::string& subcommand,
                    const std::string& out_dir) {
  if (cfg.experiment != subcommand)
    throw ConfigError("config experiment '" + cfg.experiment + "' does not match subcommand '" +
                      subcommand + "'");
  if (cfg.experiment == "assemble") {
    run_assemble_experiment(cfg, out_dir);
  } else if (cfg.experiment == "spectrum") {
    run_spectrum_experiment(cfg, out_dir);
  } else if (cfg.experiment == "lump") {
    run_lump_experiment(cfg, out_dir);
  } else if (cfg.experiment == "converge") {
    run_convergence_experiment(cfg, out_dir);
  } else if (cfg.experiment == "integrate") {
    run_dynamics_experiment(cfg, out_dir);
  } else {
    run_nkp_experiment(cfg, out_dir);
  }
}

}  // namespace lumplab
