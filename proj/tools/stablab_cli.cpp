#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "stablab/errors.hpp"
#include "stablab/harness.hpp"

namespace {

using namespace stablab;

struct GlobalFlags {
    std::int64_t seed = -1;
    int depth = -1;
    double tol = -1.0;
    bool strict = false;
    bool lax = false;
    std::string format;
    std::string out;
};

void apply_flags(ExperimentConfig& cfg, const GlobalFlags& g) {
    if (g.seed >= 0) cfg.seed = static_cast<std::uint64_t>(g.seed);
    if (g.depth >= 0) cfg.depth = g.depth;
    if (g.tol > 0.0) cfg.tol = g.tol;
    if (g.strict) cfg.strict = true;
    if (g.lax) cfg.strict = false;
    if (g.format == "csv") cfg.format = OutputFormat::Csv;
    if (g.format == "json") cfg.format = OutputFormat::Json;
    if (!g.out.empty()) cfg.out_path = g.out;
}

int run_command(const std::string& config_path, const GlobalFlags& g) {
    ExperimentConfig cfg = load_config(config_path);
    apply_flags(cfg, g);
    validate_config(cfg);
    const RunArtifacts art = run_experiment(cfg);
    emit_report(art, cfg.format, cfg.out_path);
    if (cfg.strict && art.any_violation()) return 3;
    return 0;
}

int verify_axioms_command(const std::string& space, int dim, const GlobalFlags& g) {
    ExperimentConfig cfg = default_config();
    cfg.space_kind = space == "algebra" ? SpaceKind::AlgebraOverItself
                                        : SpaceKind::VectorOverScalars;
    cfg.space_dim = dim;
    apply_flags(cfg, g);
    validate_config(cfg);

    const AxiomReport rep =
        verify_axioms(make_space(cfg), make_grid(cfg), cfg.axiom_tol, cfg.axiom_tuples);
    std::cout << "space:               " << make_space(cfg).str() << '\n'
              << "positivity:          " << format_number(rep.positivity_residual) << '\n'
              << "definiteness:        " << format_number(rep.definiteness_residual) << '\n'
              << "first-slot linear:   " << format_number(rep.linearity_residual) << '\n'
              << "algebra linear:      " << format_number(rep.algebra_linearity_residual) << '\n'
              << "involution:          " << format_number(rep.involution_residual) << '\n'
              << "tolerance:           " << format_number(rep.tol) << '\n'
              << "verdict:             " << (rep.pass() ? "pass" : "FAIL") << '\n';
    return rep.pass() ? 0 : 3;
}

int stabilize_command(const std::string& config_path, const GlobalFlags& g) {
    ExperimentConfig cfg =
        config_path.empty() ? showcase_doubling_config() : load_config(config_path);
    apply_flags(cfg, g);
    validate_config(cfg);

    const SampleGrid grid = make_grid(cfg);
    const MapUnderTest map = make_map(cfg);
    EnvelopeOptions env_opts;
    env_opts.tuples = cfg.envelope_tuples;
    env_opts.derivation_norm_cap = cfg.envelope_cap;
    const DefectEnvelope env = defect_envelope(map, grid, cfg.control, env_opts);

    StabilizeOptions opts;
    opts.depth = cfg.depth;
    opts.tol = cfg.tol;
    opts.strict = cfg.strict;
    const StabilizationReport rep = stabilize(map, grid, cfg.control, env, opts);

    std::cout << "regime:              " << regime_name(rep.regime) << '\n'
              << "contraction L:       " << format_number(rep.L) << '\n'
              << "max cauchy step:     " << format_number(rep.max_cauchy_step) << '\n'
              << "min bound margin:    " << format_number(rep.min_margin) << '\n'
              << "bound violations:    " << rep.bound_violations << '\n'
              << "additivity residual: " << format_number(rep.additivity_residual) << '\n'
              << "mu-panel residual:   " << format_number(rep.mu_linearity_residual) << '\n'
              << "derivation residual: " << format_number(rep.derivation_residual) << '\n'
              << "envelope violations: " << rep.envelope_violations << '\n'
              << "rate estimate:       "
              << (rep.rate_defined ? format_number(rep.rate_estimate) : std::string("undefined"))
              << '\n';
    const bool bad = rep.bound_violations > 0 || !rep.envelope_ok;
    return (cfg.strict && bad) ? 3 : 0;
}

int contract_check_command(const GlobalFlags& g) {
    ExperimentConfig cfg = default_config();
    apply_flags(cfg, g);
    validate_config(cfg);
    const SampleGrid grid = make_grid(cfg);

    int worst_violations = 0;
    const auto run_family = [&](double p) {
        const ControlFunction c = p < 1.0 ? ControlFunction::rassias(0.3, 1.0, 0.5, p)
                                          : ControlFunction::rassias(0.0, 1.0, 0.5, p);
        const RegimeConstants rc = regime_constants(c);
        const auto pairs = random_map_pairs(grid, psi_function(c), 100, cfg.seed ^ 0x5bf0);
        const ContractionReport rep =
            contraction_check(pairs, psi_function(c), rc.regime, rc.L);
        std::printf("p = %-4g regime = %-8s L = %-10.6f pairs = %3d violations = %d (max gap %s)\n",
                    p, regime_name(rc.regime), rc.L, rep.pairs_checked, rep.violations,
                    format_number(rep.max_violation).c_str());
        worst_violations += rep.violations;
    };
    for (double p : {0.0, 0.5, 0.9, 1.5, 2.0, 3.0}) run_family(p);
    return worst_violations == 0 ? 0 : 3;
}

int decompose_command(double re, double im) {
    const auto mus = three_unimodular(Complex(re, im));
    Complex sum(0.0, 0.0);
    for (int i = 0; i < 3; ++i) {
        std::cout << "mu" << i + 1 << ": " << format_number(mus[static_cast<size_t>(i)].real())
                  << " " << format_number(mus[static_cast<size_t>(i)].imag())
                  << "  |mu| - 1 = "
                  << format_number(std::abs(mus[static_cast<size_t>(i)]) - 1.0) << '\n';
        sum += mus[static_cast<size_t>(i)];
    }
    std::cout << "sum residual: " << format_number(std::abs(sum - Complex(re, im))) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Desk-scale stability laboratory for module derivations"};
    app.require_subcommand(1);

    GlobalFlags g;
    app.add_option("--seed", g.seed, "Override the grid seed");
    app.add_option("--depth", g.depth, "Override the iteration depth");
    app.add_option("--tol", g.tol, "Override the convergence tolerance");
    app.add_flag("--strict", g.strict, "Fail on hypothesis violations");
    app.add_flag("--no-strict", g.lax, "Record violations without failing");
    app.add_option("--format", g.format, "Report format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", g.out, "Report output path");

    auto* verify = app.add_subcommand("verify-axioms", "Check the module axioms on a grid");
    verify->fallthrough();
    std::string space = "vectors";
    int dim = 2;
    verify->add_option("--space", space, "vectors or algebra")
        ->check(CLI::IsMember({"vectors", "algebra"}));
    verify->add_option("--dim", dim, "Space dimension");

    auto* stab = app.add_subcommand("stabilize", "Iterate a map to its derivation limit");
    stab->fallthrough();
    std::string stab_config;
    stab->add_option("config", stab_config, "Experiment config (default: built-in showcase)");

    auto* contract = app.add_subcommand("contract-check", "Contraction property of the scaling operator");
    contract->fallthrough();

    auto* decompose = app.add_subcommand("decompose", "Write z as a sum of three unimodulars");
    decompose->fallthrough();
    double z_re = 0.0, z_im = 0.0;
    decompose->add_option("re", z_re, "Real part")->required();
    decompose->add_option("im", z_im, "Imaginary part")->required();

    auto* run = app.add_subcommand("run", "Run a full experiment from a config file");
    run->fallthrough();
    std::string run_config;
    run->add_option("config", run_config, "Experiment config path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (verify->parsed()) return verify_axioms_command(space, dim, g);
        if (stab->parsed()) return stabilize_command(stab_config, g);
        if (contract->parsed()) return contract_check_command(g);
        if (decompose->parsed()) return decompose_command(z_re, z_im);
        if (run->parsed()) return run_command(run_config, g);
    } catch (const stablab::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const stablab::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const stablab::PEqualsOneError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const stablab::AlphaNotAllowedError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const stablab::OutOfRangeError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const stablab::HypothesisViolatedError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const stablab::NotConvergedError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const stablab::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
