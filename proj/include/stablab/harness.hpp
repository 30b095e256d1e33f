#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "stablab/control.hpp"
#include "stablab/derivation.hpp"
#include "stablab/fixed_point.hpp"
#include "stablab/stabilizer.hpp"

namespace stablab {

enum class OutputFormat { Csv, Json };

/// Flat experiment description, the shape of the JSON config files.
struct ExperimentConfig {
    // space
    SpaceKind space_kind = SpaceKind::VectorOverScalars;
    int space_dim = 2;

    // derivation
    enum class DerivationChoice { RandomSkew, SkewMatrix, InnerCommutator, Witness };
    DerivationChoice derivation_kind = DerivationChoice::RandomSkew;
    std::vector<Complex> derivation_entries;
    std::uint64_t derivation_seed = 7;

    // perturbation
    PerturbationSpec::Kind perturbation_family = PerturbationSpec::Kind::None;
    double eps = 0.0;
    double perturbation_p = 0.5;
    double radius = 4.0;
    bool direction_auto = true;
    std::vector<Complex> direction_entries;

    // control
    ControlFunction control = ControlFunction::rassias(0.0, 0.2, 0.0, 0.5);

    // grid
    int base_points = 8;
    int scale_depth = 12;
    std::uint64_t seed = 20240809;

    // run
    bool regime_auto = true;
    Regime regime = Regime::Doubling;
    int depth = 40;
    double tol = 1e-9;
    bool strict = true;
    int envelope_tuples = 160;
    double envelope_cap = 1.0;
    int admissibility_depth = 20;
    int axiom_tuples = 200;
    double axiom_tol = 1e-10;

    // output
    OutputFormat format = OutputFormat::Json;
    std::string out_path;  ///< empty: stdout
};

/// Parses and validates a config file. ParseError carries the byte offset;
/// ValidationError names the violated field. A control exponent of exactly 1
/// raises the dedicated PEqualsOneError.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);
void validate_config(const ExperimentConfig& cfg);

/// Showcase and control presets used by the CLI defaults and the test suite.
ExperimentConfig default_config();
ExperimentConfig showcase_doubling_config();  ///< C^2, power law p = 0.5, beta = 0.2
ExperimentConfig showcase_halving_config();   ///< C^2, power law p = 2, beta = 1
ExperimentConfig negative_control_config();   ///< undersized beta; envelope must flag it

ModuleSpace make_space(const ExperimentConfig& cfg);
SampleGrid make_grid(const ExperimentConfig& cfg);
MapUnderTest make_map(const ExperimentConfig& cfg);

struct RunArtifacts {
    ExperimentConfig config;
    AxiomReport axioms;
    AdmissibilityReport admissibility;
    DefectEnvelope envelope;
    OrbitReport orbit;
    StabilizationReport stabilization;
    double uniqueness_discrepancy = 0.0;
    std::vector<double> running_rate;  ///< per-n rate estimate for the CSV table

    bool any_violation() const;
};

/// Pipeline: verify_axioms, check_admissibility, defect_envelope,
/// orbit_distances, stabilize (with uniqueness probe), rate estimation.
/// Deterministic for a fixed config and seed.
RunArtifacts run_experiment(const ExperimentConfig& cfg);

/// CSV convergence table; one row per iteration with all columns defined.
void emit_csv(const RunArtifacts& artifacts, std::ostream& os);
/// JSON report mirroring the artifact sections in snake_case, numbers with
/// 17 significant digits. The infinite distance sentinel serializes as the
/// string "infinity".
void emit_json(const RunArtifacts& artifacts, std::ostream& os);
/// Writes to the path (or stdout when empty). Throws IoError.
void emit_report(const RunArtifacts& artifacts, OutputFormat format, const std::string& path);

/// 17-significant-digit formatting used by both emitters.
std::string format_number(double v);

}  // namespace stablab
