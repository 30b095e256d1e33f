// Acceptance suite: runs every contract criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exits nonzero if any fail.
// argv[1]: path to the stablab CLI binary (used by the process-level checks).

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "stablab/errors.hpp"
#include "stablab/harness.hpp"
#include "stablab/rng.hpp"

using namespace stablab;

namespace {

int g_failures = 0;

void report(int id, const char* label, bool ok, const std::string& detail = "") {
    std::printf("[%2d] %-52s %s%s%s\n", id, label, ok ? "PASS" : "FAIL",
                detail.empty() ? "" : "  -- ", detail.c_str());
    if (!ok) ++g_failures;
}

std::string cli_path;

int run_cli(const std::string& args) {
    const std::string cmd = cli_path + " " + args;
    const int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
#ifdef _WIN32
    return rc;
#else
    return WEXITSTATUS(rc);
#endif
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ---- criterion 1: module axioms over both kinds ---------------------------
void criterion_axioms() {
    bool ok = true;
    std::string detail;
    const std::vector<ModuleSpace> spaces = {ModuleSpace::vectors(1), ModuleSpace::vectors(2),
                                             ModuleSpace::vectors(4), ModuleSpace::algebra(2),
                                             ModuleSpace::algebra(3)};
    for (const ModuleSpace& space : spaces) {
        const SampleGrid grid = SampleGrid::make(space, 8, 12, 0x51ab);
        const AxiomReport rep = verify_axioms(space, grid, 1e-10, 500);
        if (!rep.pass()) {
            ok = false;
            detail = space.str() + " max residual " + format_number(rep.max_residual());
        }
    }
    report(1, "axiom suite (C^1, C^2, C^4, M_2, M_3; 500 tuples)", ok, detail);
}

// ---- criterion 2: derivation certification and the witness -----------------
void criterion_derivations() {
    Sampler rng(0xd0c5);
    bool ok = true;
    std::string detail;

    const ModuleSpace c3 = ModuleSpace::vectors(3);
    const DerivationSpec skew = DerivationSpec::skew_matrix(rng.random_skew(3), 3);
    const ModuleSpace m2 = ModuleSpace::algebra(2);
    const DerivationSpec comm = DerivationSpec::inner_commutator(rng.random_skew(2));

    static constexpr double kNorms[3] = {0.25, 1.0, 4.0};
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        {
            const ModuleElement x = rng.element_with_norm(c3, kNorms[t % 3]);
            const ModuleElement y = rng.element_with_norm(c3, kNorms[(t + 1) % 3]);
            const ModuleElement z = rng.element_with_norm(c3, kNorms[(t + 2) % 3]);
            worst = std::max(worst, derivation_residual(skew, x, y, z));
        }
        {
            const ModuleElement x = rng.element_with_norm(m2, kNorms[t % 3]);
            const ModuleElement y = rng.element_with_norm(m2, kNorms[(t + 1) % 3]);
            const ModuleElement z = rng.element_with_norm(m2, kNorms[(t + 2) % 3]);
            worst = std::max(worst, derivation_residual(comm, x, y, z));
        }
    }
    if (worst > 1e-10) {
        ok = false;
        detail = "max residual " + format_number(worst);
    }

    const WitnessResult w = non_adjointable_witness(2);
    if (std::abs(w.residual - 2.0) > 1e-12) {
        ok = false;
        detail += " witness residual " + format_number(w.residual);
    }
    report(2, "derivation certification + non-adjointable witness", ok, detail);
}

// ---- criterion 3: contraction of the scaling operator ----------------------
void criterion_contraction() {
    const ModuleSpace c2 = ModuleSpace::vectors(2);
    const SampleGrid grid = SampleGrid::make(c2, 8, 12, 0xc0ffee);
    bool ok = true;
    std::string detail;
    const auto run = [&](double p, double alpha) {
        const ControlFunction c = ControlFunction::rassias(alpha, 1.0, 0.5, p);
        const RegimeConstants rc = regime_constants(c);
        const auto pairs =
            random_map_pairs(grid, psi_function(c), 100, 0xabc0 + static_cast<int>(p * 10));
        const ContractionReport rep =
            contraction_check(pairs, psi_function(c), rc.regime, rc.L);
        if (rep.violations != 0) {
            ok = false;
            detail = "p = " + format_number(p) + ": " + std::to_string(rep.violations) +
                     " violations (max gap " + format_number(rep.max_violation) + ")";
        }
    };
    for (double p : {0.0, 0.5, 0.9}) run(p, 0.3);
    for (double p : {1.5, 2.0, 3.0}) run(p, 0.0);
    report(3, "contraction d(Jg,Jh) <= L d(g,h) + 1e-12 (both regimes)", ok, detail);
}

// ---- criteria 4-8 ----------------------------------------------------------
struct ShowcaseResult {
    RunArtifacts art;
    SampleGrid grid;
    MapUnderTest map;
    RegimeConstants rc;
};

ShowcaseResult run_showcase(const ExperimentConfig& cfg) {
    return ShowcaseResult{run_experiment(cfg), make_grid(cfg), make_map(cfg),
                          regime_constants(cfg.control)};
}

void criterion_doubling_showcase(const ShowcaseResult& s) {
    const StabilizationReport& st = s.art.stabilization;

    report(4, "doubling showcase (a): defect envelope clean",
           s.art.envelope.violation_count == 0,
           "min margin " + format_number(s.art.envelope.min_margin));

    report(4, "doubling showcase (b): Cauchy step <= 1e-9 at depth 40",
           st.depth == 40 && st.converged && st.max_cauchy_step <= 1e-9,
           "max step " + format_number(st.max_cauchy_step));

    bool closed_form_ok = true;
    bool bound_ok = st.bound_violations == 0;
    double worst_gap = 0.0;
    for (const PointRecord& p : st.points) {
        const double expect = 0.1 * std::sqrt(p.norm);
        const double gap = std::abs(p.distance - expect);
        worst_gap = std::max(worst_gap, gap);
        if (gap > 1e-9 * (1.0 + expect)) closed_form_ok = false;
        if (p.distance > p.bound + 1e-12) bound_ok = false;
    }
    report(4, "doubling showcase (c): ||f - T|| = eps ||x||^1/2 <= bound",
           closed_form_ok && bound_ok, "worst closed-form gap " + format_number(worst_gap));

    const double worst_residual =
        std::max({st.additivity_residual, st.mu_linearity_residual,
                  st.mu_additivity_residual, st.derivation_residual});
    report(4, "doubling showcase (d): limit residuals <= 1e-8", worst_residual <= 1e-8,
           "worst " + format_number(worst_residual));

    report(4, "doubling showcase (e): rate = 2^(-1/2) within 1e-6",
           st.rate_defined && std::abs(st.rate_estimate - std::exp2(-0.5)) <= 1e-6,
           "rate " + format_number(st.rate_estimate));
}

void criterion_halving_showcase(const ShowcaseResult& s) {
    const StabilizationReport& st = s.art.stabilization;
    bool bound_ok = st.bound_violations == 0 && s.art.envelope.violation_count == 0;
    for (const PointRecord& p : st.points)
        if (p.distance > p.bound + 1e-12) bound_ok = false;
    report(5, "halving showcase: eps ||x||^2 <= bound at every point", bound_ok,
           "min margin " + format_number(st.min_margin));
    report(5, "halving showcase: rate = 1/2 within 1e-6",
           st.rate_defined && std::abs(st.rate_estimate - 0.5) <= 1e-6,
           "rate " + format_number(st.rate_estimate));
}

void criterion_uniqueness(const ShowcaseResult& a, const ShowcaseResult& b) {
    const double d1 = a.art.uniqueness_discrepancy;
    const double d2 = b.art.uniqueness_discrepancy;
    report(6, "uniqueness probe <= 1e-9 at depth 40 (both regimes)",
           d1 <= 1e-9 && d2 <= 1e-9,
           "doubling " + format_number(d1) + ", halving " + format_number(d2));
}

void criterion_orbit_bound(const ShowcaseResult& s, const char* label) {
    const PsiFunction psi = psi_function(s.art.config.control);
    const TabulatedMap f_tab = TabulatedMap::tabulate(
        s.grid, [&](const ModuleElement& x) { return s.map.eval(x); });
    const StabilizedEvaluator T(s.map, s.art.config.depth, s.rc.regime, s.rc.L);
    const TabulatedMap t_tab =
        TabulatedMap::tabulate(s.grid, [&](const ModuleElement& x) { return T(x); });

    const double lhs = gen_distance(f_tab, t_tab, psi).finite_value();
    const double d0 = s.art.orbit.distances[0].finite_value();
    const double rhs = d0 / (1.0 - s.rc.L) + 1e-9;
    report(7, label, lhs <= rhs,
           "d(f,T) = " + format_number(lhs) + " vs " + format_number(rhs));
}

void criterion_unimodular(const ShowcaseResult& dbl, const ShowcaseResult& hlv) {
    Sampler rng(0x3333);
    bool ok = true;
    std::string detail;
    for (int t = 0; t < 2000; ++t) {
        const Complex z = t < 1000 ? rng.unit_disc() : 3.0 * rng.unit_disc();
        const auto mus = three_unimodular(z);
        Complex sum(0, 0);
        for (const Complex& mu : mus) {
            if (std::abs(std::abs(mu) - 1.0) > 1e-12) ok = false;
            sum += mu;
        }
        if (std::abs(sum - z) > 1e-12) ok = false;
    }
    if (!ok) detail = "decomposition residuals above 1e-12";

    for (const ShowcaseResult* s : {&dbl, &hlv}) {
        const StabilizedEvaluator T(s->map, s->art.config.depth, s->rc.regime, s->rc.L);
        int unit_base = 0;
        for (int b = 0; b < static_cast<int>(s->grid.base_points().size()); ++b)
            if (std::abs(module_norm(s->grid.base_points()[b]) - 1.0) < 1e-9) {
                unit_base = b;
                break;
            }
        const ModuleElement x = s->grid.base_points()[unit_base];
        for (const Complex lam : {Complex(2, 1), Complex(-3.7, 0), Complex(0.01, 0)}) {
            const ScalarLinearityResult r = scalar_linearity_check(T, lam, x);
            if (r.chain_residual > 1e-8) {
                ok = false;
                detail = "chain residual " + format_number(r.chain_residual);
            }
        }
    }
    report(8, "three-unimodular decomposition + scalar linearity chain", ok, detail);
}

// ---- criterion 9: the p = 1 rejection, library and process level -----------
void criterion_p_equals_one(const std::filesystem::path& dir) {
    bool ok = true;
    std::string detail;
    try {
        parse_config_text(R"({"control": {"family": "rassias", "beta": 1.0, "p": 1.0}})");
        ok = false;
        detail = "config accepted";
    } catch (const PEqualsOneError& e) {
        if (std::string(e.what()).find("p = 1 is not covered") == std::string::npos) {
            ok = false;
            detail = "message lacks the dedicated text";
        }
    } catch (...) {
        ok = false;
        detail = "wrong error type";
    }

    const auto cfg_path = dir / "p1.json";
    std::ofstream(cfg_path) << R"({"control": {"family": "rassias", "beta": 1.0, "p": 1.0}})";
    const auto err_path = dir / "p1.err";
    const int rc =
        run_cli("run " + cfg_path.string() + " 2> " + err_path.string());
    if (rc != 2) {
        ok = false;
        detail += " exit code " + std::to_string(rc);
    }
    if (slurp(err_path).find("p = 1 is not covered") == std::string::npos) {
        ok = false;
        detail += " stderr lacks the dedicated message";
    }
    report(9, "p = 1 rejected with the dedicated error, exit code 2", ok, detail);
}

// ---- criterion 10: byte-identical reruns ------------------------------------
void criterion_determinism(const std::filesystem::path& dir) {
    const auto cfg_path = dir / "showcase.json";
    std::ofstream(cfg_path) << R"({
        "space": {"kind": "vectors", "dim": 2},
        "perturbation": {"family": "power-law", "epsilon": 0.1, "p": 0.5},
        "control": {"family": "rassias", "beta": 0.2, "p": 0.5},
        "grid": {"base_points": 6, "scale_depth": 8, "seed": 4242}
    })";

    bool ok = true;
    std::string detail;
    for (const std::string fmt : {"csv", "json"}) {
        const auto out1 = dir / ("run1." + fmt);
        const auto out2 = dir / ("run2." + fmt);
        const int r1 = run_cli("run " + cfg_path.string() + " --format " + fmt + " --out " +
                               out1.string());
        const int r2 = run_cli("run " + cfg_path.string() + " --format " + fmt + " --out " +
                               out2.string());
        if (r1 != 0 || r2 != 0) {
            ok = false;
            detail = fmt + " exit codes " + std::to_string(r1) + "/" + std::to_string(r2);
            continue;
        }
        const std::string b1 = slurp(out1);
        const std::string b2 = slurp(out2);
        if (b1.empty() || b1 != b2) {
            ok = false;
            detail = fmt + " outputs differ";
        }
    }
    report(10, "byte-identical CSV and JSON across reruns", ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) cli_path = argv[1];

    std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "stablab_acceptance";
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);

    criterion_axioms();
    criterion_derivations();
    criterion_contraction();

    ExperimentConfig dbl_cfg = showcase_doubling_config();
    ExperimentConfig hlv_cfg = showcase_halving_config();
    const ShowcaseResult dbl = run_showcase(dbl_cfg);
    const ShowcaseResult hlv = run_showcase(hlv_cfg);

    criterion_doubling_showcase(dbl);
    criterion_halving_showcase(hlv);
    criterion_uniqueness(dbl, hlv);
    criterion_orbit_bound(dbl, "orbit bound d(f,T) <= d(f,Jf)/(1-L) (doubling)");
    criterion_orbit_bound(hlv, "orbit bound d(f,T) <= d(f,Jf)/(1-L) (halving)");
    criterion_unimodular(dbl, hlv);

    if (!cli_path.empty()) {
        criterion_p_equals_one(dir);
        criterion_determinism(dir);
    } else {
        report(9, "p = 1 rejection (CLI path not provided)", false, "missing argv[1]");
        report(10, "determinism (CLI path not provided)", false, "missing argv[1]");
    }

    if (g_failures > 0) {
        std::printf("%d criterion check(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria PASS\n");
    return 0;
}
