#pragma once

#include <cstdint>
#include <map>

#include "lumplab/newmark.hpp"
#include "lumplab/nkp.hpp"
#include "lumplab/pencil.hpp"

namespace lumplab {

/// Relative-error floor below which convergence-study data points are treated
/// as saturated by double precision and excluded from slope fits.
inline constexpr double kSlopeNoiseFloor = 1e-11;

struct Discretization {
  std::vector<int> degrees;
  std::vector<int> subdivisions;
  std::string geometry = "unit_interval";
  std::string density = "constant";
  std::vector<std::string> bc;
};

DiscreteModel build_model(const Discretization& d);

/// Declarative experiment description. Parsed from strict JSON: unknown keys
/// anywhere are rejected, ids must come from the registered catalogues.
struct ExperimentConfig {
  std::string experiment;  ///< assemble | spectrum | lump | converge | integrate | nkp
  Discretization disc;
  std::vector<std::string> operators;
  std::vector<int> meshes;     ///< converge mesh list / nkp scan meshes
  std::string problem;         ///< converge: eigenfrequency id; integrate: wave id
  double final_time = 6.0;
  double safety = 0.85;
  Vec sample_times;
  std::vector<std::size_t> export_dofs;
  std::size_t rank = 1;        ///< nkp truncation rank for factor export
  std::uint64_t seed = 0;
  std::map<std::string, std::string> outputs;  ///< logical name -> file name
  std::string config_hash;     ///< FNV-1a of the canonical JSON text

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);
};

/// Operator catalogue: "M"/"consistent", "P<i>", "P<ij>" (Kronecker input),
/// "P<ijk>" (3D), "NKP" or "NKP<r>", and the two-level "NKP_P<ii>".
struct BuiltOperator {
  std::string name;
  MassOperator op;
  SymMatrix dense;
};

BuiltOperator build_operator(const std::string& name, const DiscreteModel& model);

struct SpectrumResult {
  std::vector<std::string> names;
  std::vector<Vec> spectra;  ///< one ascending spectrum per operator
};

struct ConvergeResult {
  Vec hs;
  std::vector<std::string> names;
  std::vector<Vec> errors;   ///< per operator, one entry per mesh
  std::vector<double> slopes;
};

struct DynamicsResult {
  std::vector<std::string> names;
  std::vector<std::size_t> steps;
  std::vector<double> dts;
  Vec sample_times;
  std::vector<Vec> error_series;  ///< per operator, per sample time
};

struct NkpExperimentResult {
  Vec singular_values;
  std::size_t kronecker_rank = 0;
  double truncation_error = 0.0;
  CondBound bound;
  std::vector<EquivalenceRow> scan;
};

void run_assemble_experiment(const ExperimentConfig& cfg, const std::string& out_dir);
SpectrumResult run_spectrum_experiment(const ExperimentConfig& cfg, const std::string& out_dir);
void run_lump_experiment(const ExperimentConfig& cfg, const std::string& out_dir);
ConvergeResult run_convergence_experiment(const ExperimentConfig& cfg, const std::string& out_dir);
DynamicsResult run_dynamics_experiment(const ExperimentConfig& cfg, const std::string& out_dir);
NkpExperimentResult run_nkp_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

/// Dispatch on cfg.experiment; `subcommand` must match it.
void run_experiment(const ExperimentConfig& cfg, const std::string& subcommand,
                    const std::string& out_dir);

std::uint64_t fnv1a64(const std::string& text);

}  // namespace lumplab
