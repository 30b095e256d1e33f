#include "stablab/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "stablab/errors.hpp"
#include "stablab/rng.hpp"

namespace stablab {

namespace {

using nlohmann::json;

std::vector<Complex> complex_list(const json& arr, const std::string& field) {
    if (!arr.is_array() || arr.size() % 2 != 0)
        throw ParseError(field + ": expected a flat [re, im, ...] array");
    std::vector<Complex> out;
    out.reserve(arr.size() / 2);
    for (size_t i = 0; i < arr.size(); i += 2) {
        if (!arr[i].is_number() || !arr[i + 1].is_number())
            throw ParseError(field + ": entries must be numbers");
        out.emplace_back(arr[i].get<double>(), arr[i + 1].get<double>());
    }
    return out;
}

double num_field(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw ParseError(std::string(key) + ": expected a number");
    return obj[key].get<double>();
}

std::int64_t int_field(const json& obj, const char* key, std::int64_t fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer())
        throw ParseError(std::string(key) + ": expected an integer");
    return obj[key].get<std::int64_t>();
}

std::string str_field(const json& obj, const char* key, const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_string()) throw ParseError(std::string(key) + ": expected a string");
    return obj[key].get<std::string>();
}

bool bool_field(const json& obj, const char* key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_boolean()) throw ParseError(std::string(key) + ": expected a boolean");
    return obj[key].get<bool>();
}

Regime perturbation_regime(const ExperimentConfig& cfg) {
    if (cfg.perturbation_family == PerturbationSpec::Kind::CompactSupport)
        return Regime::Doubling;
    return cfg.perturbation_p < 1.0 ? Regime::Doubling : Regime::Halving;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("config: top level must be an object");

    ExperimentConfig cfg = default_config();

    if (j.contains("space")) {
        const json& s = j["space"];
        const std::string kind = str_field(s, "kind", "vectors");
        if (kind == "vectors")
            cfg.space_kind = SpaceKind::VectorOverScalars;
        else if (kind == "algebra")
            cfg.space_kind = SpaceKind::AlgebraOverItself;
        else
            throw ValidationError("space.kind: must be \"vectors\" or \"algebra\"");
        cfg.space_dim = static_cast<int>(int_field(s, "dim", cfg.space_dim));
    }

    if (j.contains("derivation")) {
        const json& d = j["derivation"];
        const std::string kind = str_field(d, "kind", "random-skew");
        if (kind == "random-skew")
            cfg.derivation_kind = ExperimentConfig::DerivationChoice::RandomSkew;
        else if (kind == "skew-matrix")
            cfg.derivation_kind = ExperimentConfig::DerivationChoice::SkewMatrix;
        else if (kind == "inner-commutator")
            cfg.derivation_kind = ExperimentConfig::DerivationChoice::InnerCommutator;
        else if (kind == "witness")
            cfg.derivation_kind = ExperimentConfig::DerivationChoice::Witness;
        else
            throw ValidationError("derivation.kind: unknown kind \"" + kind + "\"");
        if (d.contains("entries"))
            cfg.derivation_entries = complex_list(d["entries"], "derivation.entries");
        cfg.derivation_seed = static_cast<std::uint64_t>(
            int_field(d, "seed", static_cast<std::int64_t>(cfg.derivation_seed)));
    }

    if (j.contains("perturbation")) {
        const json& p = j["perturbation"];
        const std::string family = str_field(p, "family", "none");
        if (family == "none")
            cfg.perturbation_family = PerturbationSpec::Kind::None;
        else if (family == "power-law")
            cfg.perturbation_family = PerturbationSpec::Kind::PowerLaw;
        else if (family == "compact-support")
            cfg.perturbation_family = PerturbationSpec::Kind::CompactSupport;
        else
            throw ValidationError("perturbation.family: unknown family \"" + family + "\"");
        cfg.eps = num_field(p, "epsilon", cfg.eps);
        cfg.perturbation_p = num_field(p, "p", cfg.perturbation_p);
        cfg.radius = num_field(p, "radius", cfg.radius);
        if (p.contains("direction")) {
            if (p["direction"].is_string()) {
                if (p["direction"].get<std::string>() != "auto")
                    throw ValidationError("perturbation.direction: expected \"auto\" or entries");
                cfg.direction_auto = true;
            } else {
                cfg.direction_auto = false;
                cfg.direction_entries =
                    complex_list(p["direction"], "perturbation.direction");
            }
        }
    }

    if (j.contains("control")) {
        const json& c = j["control"];
        const std::string family = str_field(c, "family", "rassias");
        const double alpha = num_field(c, "alpha", 0.0);
        if (family == "constant") {
            cfg.control = ControlFunction::constant(alpha);
        } else if (family == "rassias") {
            cfg.control = ControlFunction::rassias(alpha, num_field(c, "beta", 0.0),
                                                   num_field(c, "gamma", 0.0),
                                                   num_field(c, "p", 0.0));
        } else {
            throw ValidationError("control.family: unknown family \"" + family + "\"");
        }
    }

    if (j.contains("grid")) {
        const json& g = j["grid"];
        cfg.base_points = static_cast<int>(int_field(g, "base_points", cfg.base_points));
        cfg.scale_depth = static_cast<int>(int_field(g, "scale_depth", cfg.scale_depth));
        cfg.seed = static_cast<std::uint64_t>(
            int_field(g, "seed", static_cast<std::int64_t>(cfg.seed)));
    }

    if (j.contains("run")) {
        const json& r = j["run"];
        const std::string regime = str_field(r, "regime", "auto");
        if (regime == "auto") {
            cfg.regime_auto = true;
        } else if (regime == "doubling") {
            cfg.regime_auto = false;
            cfg.regime = Regime::Doubling;
        } else if (regime == "halving") {
            cfg.regime_auto = false;
            cfg.regime = Regime::Halving;
        } else {
            throw ValidationError("run.regime: must be auto, doubling, or halving");
        }
        cfg.depth = static_cast<int>(int_field(r, "depth", cfg.depth));
        cfg.tol = num_field(r, "tol", cfg.tol);
        cfg.strict = bool_field(r, "strict", cfg.strict);
        cfg.envelope_tuples =
            static_cast<int>(int_field(r, "envelope_tuples", cfg.envelope_tuples));
        cfg.envelope_cap = num_field(r, "envelope_cap", cfg.envelope_cap);
        cfg.admissibility_depth =
            static_cast<int>(int_field(r, "admissibility_depth", cfg.admissibility_depth));
        cfg.axiom_tuples = static_cast<int>(int_field(r, "axiom_tuples", cfg.axiom_tuples));
        cfg.axiom_tol = num_field(r, "axiom_tol", cfg.axiom_tol);
    }

    if (j.contains("output")) {
        const json& o = j["output"];
        const std::string format = str_field(o, "format", "json");
        if (format == "csv")
            cfg.format = OutputFormat::Csv;
        else if (format == "json")
            cfg.format = OutputFormat::Json;
        else
            throw ValidationError("output.format: must be csv or json");
        cfg.out_path = str_field(o, "path", cfg.out_path);
    }

    validate_config(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("load_config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.space_dim < 1 || cfg.space_dim > 16)
        throw ValidationError("space.dim: must lie in [1, 16]");
    if (cfg.base_points < 1 || cfg.base_points > 64)
        throw ValidationError("grid.base_points: must lie in [1, 64]");
    if (cfg.scale_depth < 1 || cfg.scale_depth > 30)
        throw ValidationError("grid.scale_depth: must lie in [1, 30]");
    if (cfg.depth < 2 || cfg.depth > 60)
        throw ValidationError("run.depth: must lie in [2, 60]");
    if (!(cfg.tol > 0.0)) throw ValidationError("run.tol: must be > 0");
    if (!(cfg.eps >= 0.0)) throw ValidationError("perturbation.epsilon: must be >= 0");
    if (cfg.envelope_tuples < 1)
        throw ValidationError("run.envelope_tuples: must be >= 1");
    if (!(cfg.envelope_cap > 0.0))
        throw ValidationError("run.envelope_cap: must be > 0");
    if (cfg.admissibility_depth < 1)
        throw ValidationError("run.admissibility_depth: must be >= 1");
    if (cfg.axiom_tuples < 1) throw ValidationError("run.axiom_tuples: must be >= 1");
    if (!(cfg.axiom_tol > 0.0)) throw ValidationError("run.axiom_tol: must be > 0");

    if (cfg.perturbation_family == PerturbationSpec::Kind::PowerLaw) {
        if (!(cfg.perturbation_p >= 0.0))
            throw ValidationError("perturbation.p: must be >= 0");
        if (cfg.eps > 0.0 && cfg.perturbation_p == 1.0)
            throw ValidationError("perturbation.p: exponent 1 matches no scaling regime");
    }
    if (cfg.perturbation_family == PerturbationSpec::Kind::CompactSupport &&
        !(cfg.radius > 0.0))
        throw ValidationError("perturbation.radius: must be > 0");

    const bool vectors = cfg.space_kind == SpaceKind::VectorOverScalars;
    if (!vectors && cfg.derivation_kind == ExperimentConfig::DerivationChoice::SkewMatrix)
        throw ValidationError("derivation.kind: skew-matrix acts on vector spaces only");
    if (vectors && (cfg.derivation_kind == ExperimentConfig::DerivationChoice::InnerCommutator ||
                    cfg.derivation_kind == ExperimentConfig::DerivationChoice::Witness))
        throw ValidationError("derivation.kind: commutator derivations act on algebra spaces");

    // The regime gate; p = 1 and the halving-with-alpha case raise their
    // dedicated errors from regime_constants.
    const RegimeConstants rc = regime_constants(cfg.control);
    if (!cfg.regime_auto && cfg.regime != rc.regime)
        throw ValidationError("run.regime: override contradicts the control function's regime");
    if (cfg.eps > 0.0 && perturbation_regime(cfg) != rc.regime)
        throw ValidationError(
            "perturbation/control: perturbation scaling does not match the control regime");
}

ExperimentConfig default_config() { return ExperimentConfig{}; }

ExperimentConfig showcase_doubling_config() {
    ExperimentConfig cfg;
    cfg.space_kind = SpaceKind::VectorOverScalars;
    cfg.space_dim = 2;
    cfg.derivation_kind = ExperimentConfig::DerivationChoice::RandomSkew;
    cfg.perturbation_family = PerturbationSpec::Kind::PowerLaw;
    cfg.eps = 0.1;
    cfg.perturbation_p = 0.5;
    cfg.control = ControlFunction::rassias(0.0, 0.2, 0.0, 0.5);
    return cfg;
}

ExperimentConfig showcase_halving_config() {
    ExperimentConfig cfg = showcase_doubling_config();
    cfg.perturbation_p = 2.0;
    cfg.control = ControlFunction::rassias(0.0, 1.0, 0.0, 2.0);
    return cfg;
}

ExperimentConfig negative_control_config() {
    ExperimentConfig cfg = showcase_doubling_config();
    cfg.control = ControlFunction::rassias(0.0, 0.01, 0.0, 0.5);
    return cfg;
}

ModuleSpace make_space(const ExperimentConfig& cfg) {
    return cfg.space_kind == SpaceKind::VectorOverScalars
               ? ModuleSpace::vectors(cfg.space_dim)
               : ModuleSpace::algebra(cfg.space_dim);
}

SampleGrid make_grid(const ExperimentConfig& cfg) {
    return SampleGrid::make(make_space(cfg), cfg.base_points, cfg.scale_depth, cfg.seed);
}

MapUnderTest make_map(const ExperimentConfig& cfg) {
    const ModuleSpace space = make_space(cfg);
    const int k = cfg.space_dim;

    auto matrix_from_entries = [&](const std::vector<Complex>& entries) {
        if (static_cast<int>(entries.size()) != k * k)
            throw ValidationError("derivation.entries: expected " + std::to_string(k * k) +
                                  " complex entries");
        return CMatrix(k, entries);
    };

    DerivationSpec derivation = [&]() {
        switch (cfg.derivation_kind) {
            case ExperimentConfig::DerivationChoice::SkewMatrix:
                return DerivationSpec::skew_matrix(matrix_from_entries(cfg.derivation_entries),
                                                   k);
            case ExperimentConfig::DerivationChoice::InnerCommutator:
                return DerivationSpec::inner_commutator(
                    matrix_from_entries(cfg.derivation_entries));
            case ExperimentConfig::DerivationChoice::Witness:
                return DerivationSpec::inner_commutator(
                    CMatrix::unit(k, 0, 0, Complex(0.0, 2.0)));
            case ExperimentConfig::DerivationChoice::RandomSkew:
            default: {
                Sampler rng(cfg.derivation_seed);
                const CMatrix d = rng.random_skew(k);
                return cfg.space_kind == SpaceKind::VectorOverScalars
                           ? DerivationSpec::skew_matrix(d, k)
                           : DerivationSpec::inner_commutator(d);
            }
        }
    }();

    ModuleElement direction =
        cfg.direction_auto
            ? (cfg.space_kind == SpaceKind::VectorOverScalars
                   ? ModuleElement::basis(space, 0)
                   : ModuleElement::basis(space, 0, 0))
            : ModuleElement(space, cfg.direction_entries);

    PerturbationSpec perturbation = [&]() {
        switch (cfg.perturbation_family) {
            case PerturbationSpec::Kind::PowerLaw:
                return PerturbationSpec::power_law(cfg.eps, cfg.perturbation_p,
                                                   std::move(direction));
            case PerturbationSpec::Kind::CompactSupport:
                return PerturbationSpec::compact_support(cfg.eps, cfg.radius,
                                                         std::move(direction));
            case PerturbationSpec::Kind::None:
            default:
                return PerturbationSpec::none(space);
        }
    }();

    return MapUnderTest(std::move(derivation), std::move(perturbation));
}

bool RunArtifacts::any_violation() const {
    return !axioms.pass() || !admissibility.admissible || !envelope.ok() ||
           !orbit.contraction_ok || stabilization.bound_violations > 0;
}

RunArtifacts run_experiment(const ExperimentConfig& cfg) {
    validate_config(cfg);

    RunArtifacts art;
    art.config = cfg;

    const ModuleSpace space = make_space(cfg);
    const SampleGrid grid = make_grid(cfg);
    const MapUnderTest map = make_map(cfg);
    const ControlFunction& control = cfg.control;
    const RegimeConstants rc = regime_constants(control);

    art.axioms = verify_axioms(space, grid, cfg.axiom_tol, cfg.axiom_tuples);
    art.admissibility = check_admissibility(control, grid, cfg.admissibility_depth);

    EnvelopeOptions env_opts;
    env_opts.tuples = cfg.envelope_tuples;
    env_opts.derivation_norm_cap = cfg.envelope_cap;
    art.envelope = defect_envelope(map, grid, control, env_opts);

    const PsiFunction psi = psi_function(control);
    const TabulatedMap tab =
        TabulatedMap::tabulate(grid, [&map](const ModuleElement& x) { return map.eval(x); });
    const int orbit_steps = std::min(cfg.depth, 2 * cfg.scale_depth);
    art.orbit = orbit_distances(tab, psi, rc.regime, rc.L, orbit_steps);

    StabilizeOptions opts;
    opts.depth = cfg.depth;
    opts.tol = cfg.tol;
    opts.strict = cfg.strict;
    art.stabilization = stabilize(map, grid, control, art.envelope, opts);
    art.stabilization.branch = art.orbit.a2_consistent ? "a2" : "a1";

    art.uniqueness_discrepancy = uniqueness_probe(map, grid, control, cfg.depth);

    // Running rate column for the convergence table, measured at the first
    // unit-norm base point against the stabilized limit.
    {
        int base_idx = 0;
        for (int b = 0; b < static_cast<int>(grid.base_points().size()); ++b) {
            if (std::abs(module_norm(grid.base_points()[static_cast<size_t>(b)]) - 1.0) <
                1e-9) {
                base_idx = b;
                break;
            }
        }
        const ModuleElement& x0 = grid.base_points()[static_cast<size_t>(base_idx)];
        const MapFn fn = [&map](const ModuleElement& x) { return map.eval(x); };
        const ModuleElement limit = stabilized_value(fn, x0, cfg.depth, rc.regime, rc.L);
        const int rows = static_cast<int>(
            std::min(art.stabilization.trace.size(), art.orbit.distances.size()));
        std::vector<double> errors(static_cast<size_t>(rows) + 1);
        for (int n = 0; n <= rows; ++n)
            errors[static_cast<size_t>(n)] =
                module_norm(hyers_iterate(fn, x0, n, rc.regime) - limit);
        art.running_rate.assign(static_cast<size_t>(rows), 0.0);
        for (int n = 1; n <= rows; ++n) {
            bool ok = true;
            for (int m = 0; m <= n; ++m)
                if (errors[static_cast<size_t>(m)] <= 1e-13) ok = false;
            art.running_rate[static_cast<size_t>(n - 1)] =
                ok ? std::pow(errors[static_cast<size_t>(n)] / errors[0], 1.0 / n) : 0.0;
        }
    }

    return art;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

void emit_csv(const RunArtifacts& art, std::ostream& os) {
    os << "n,max_cauchy_step,max_bound_margin_min,orbit_distance,rate_estimate\n";
    const size_t rows =
        std::min(art.stabilization.trace.size(), art.orbit.distances.size());
    for (size_t i = 0; i < rows; ++i) {
        const ConvergenceRow& row = art.stabilization.trace[i];
        const ExtendedNonNegative& dist = art.orbit.distances[i];
        os << row.n << ',' << format_number(row.max_cauchy_step) << ','
           << format_number(row.max_bound_margin_min) << ','
           << (dist.is_infinite() ? std::string("inf") : format_number(dist.finite_value()))
           << ',' << format_number(i < art.running_rate.size() ? art.running_rate[i] : 0.0)
           << '\n';
    }
}

namespace {

class JsonWriter {
public:
    explicit JsonWriter(std::ostream& os) : os_(os) {}

    void begin_object() { open('{'); }
    void end_object() { close('}'); }
    void begin_array() { open('['); }
    void end_array() { close(']'); }

    void key(const std::string& k) {
        comma();
        os_ << '"' << k << "\":";
        just_keyed_ = true;
    }

    void value_num(double v) {
        comma();
        if (std::isinf(v))
            os_ << "\"infinity\"";
        else
            os_ << format_number(v);
    }
    void value_int(std::int64_t v) {
        comma();
        os_ << v;
    }
    void value_bool(bool v) {
        comma();
        os_ << (v ? "true" : "false");
    }
    void value_str(const std::string& s) {
        comma();
        os_ << '"' << s << '"';  // report strings need no escaping
    }

    void kv(const std::string& k, double v) {
        key(k);
        value_num(v);
    }
    void kv_int(const std::string& k, std::int64_t v) {
        key(k);
        value_int(v);
    }
    void kv_bool(const std::string& k, bool v) {
        key(k);
        value_bool(v);
    }
    void kv_str(const std::string& k, const std::string& v) {
        key(k);
        value_str(v);
    }

private:
    void open(char c) {
        comma();
        os_ << c;
        pending_first_ = true;
    }
    void close(char c) {
        os_ << c;
        pending_first_ = false;
        just_keyed_ = false;
    }
    void comma() {
        if (just_keyed_) {
            just_keyed_ = false;
            return;
        }
        if (!pending_first_) os_ << ',';
        pending_first_ = false;
    }

    std::ostream& os_;
    bool pending_first_ = true;
    bool just_keyed_ = false;
};

}  // namespace

void emit_json(const RunArtifacts& art, std::ostream& os) {
    JsonWriter w(os);
    w.begin_object();
    w.kv_str("schema", "stablab-run-v1");

    w.key("axiom_report");
    w.begin_object();
    w.kv("positivity_residual", art.axioms.positivity_residual);
    w.kv("definiteness_residual", art.axioms.definiteness_residual);
    w.kv("linearity_residual", art.axioms.linearity_residual);
    w.kv("algebra_linearity_residual", art.axioms.algebra_linearity_residual);
    w.kv("involution_residual", art.axioms.involution_residual);
    w.kv_int("sample_count", art.axioms.sample_count);
    w.kv("tol", art.axioms.tol);
    w.kv_bool("pass", art.axioms.pass());
    w.end_object();

    w.key("admissibility_report");
    w.begin_object();
    w.kv_str("regime", regime_name(art.admissibility.regime));
    w.kv("contraction_constant", art.admissibility.L);
    w.kv("max_ratio_first", art.admissibility.max_ratio.empty() ? 0.0
                                                                : art.admissibility.max_ratio.front());
    w.kv("max_ratio_last", art.admissibility.max_ratio.empty() ? 0.0
                                                               : art.admissibility.max_ratio.back());
    w.kv("psi_min_slack", art.admissibility.psi_min_slack);
    w.kv_bool("psi_scaling_ok", art.admissibility.psi_scaling_ok);
    w.kv_bool("ratios_decay", art.admissibility.ratios_decay);
    w.kv_bool("admissible", art.admissibility.admissible);
    w.end_object();

    w.key("defect_envelope");
    w.begin_object();
    w.kv_int("tuple_count", art.envelope.tuple_count);
    w.kv_int("violation_count", art.envelope.violation_count);
    w.kv("min_margin", art.envelope.min_margin);
    w.kv("derivation_norm_cap", art.envelope.derivation_norm_cap);
    w.key("rows");
    w.begin_array();
    for (const EnvelopeRow& row : art.envelope.rows) {
        w.begin_object();
        w.kv("norm_x", row.norm_x);
        w.kv("norm_y", row.norm_y);
        w.kv("norm_u", row.norm_u);
        w.kv("norm_v", row.norm_v);
        w.kv("norm_w", row.norm_w);
        w.kv("mu_re", row.mu.real());
        w.kv("mu_im", row.mu.imag());
        w.kv("defect", row.defect);
        w.kv("phi", row.phi);
        w.kv("margin", row.margin);
        w.end_object();
    }
    w.end_array();
    w.end_object();

    w.key("orbit_report");
    w.begin_object();
    w.key("distances");
    w.begin_array();
    for (const ExtendedNonNegative& d : art.orbit.distances) w.value_num(d.raw());
    w.end_array();
    w.kv_int("first_finite", art.orbit.first_finite);
    w.kv_bool("a2_consistent", art.orbit.a2_consistent);
    w.kv("max_ratio_violation", art.orbit.max_ratio_violation);
    w.kv_bool("contraction_ok", art.orbit.contraction_ok);
    w.end_object();

    const StabilizationReport& st = art.stabilization;
    w.key("stabilization_report");
    w.begin_object();
    w.kv_str("regime", regime_name(st.regime));
    w.kv("contraction_constant", st.L);
    w.kv_int("depth", st.depth);
    w.kv("tol", st.tol);
    w.kv("max_cauchy_step", st.max_cauchy_step);
    w.kv("min_margin", st.min_margin);
    w.kv_int("bound_violations", st.bound_violations);
    w.kv("additivity_residual", st.additivity_residual);
    w.kv("mu_linearity_residual", st.mu_linearity_residual);
    w.kv("mu_additivity_residual", st.mu_additivity_residual);
    w.kv("derivation_residual", st.derivation_residual);
    w.kv("rate_estimate", st.rate_estimate);
    w.kv_bool("rate_defined", st.rate_defined);
    w.kv_bool("envelope_ok", st.envelope_ok);
    w.kv_int("envelope_violations", st.envelope_violations);
    w.kv_bool("converged", st.converged);
    w.kv_str("branch", st.branch);
    w.key("points");
    w.begin_array();
    for (const PointRecord& p : st.points) {
        w.begin_object();
        w.kv_int("base", p.base);
        w.kv_int("scale", p.scale);
        w.kv("norm", p.norm);
        w.kv("distance", p.distance);
        w.kv("bound", p.bound);
        w.kv("margin", p.margin);
        w.kv("cauchy_step", p.cauchy_step);
        w.end_object();
    }
    w.end_array();
    w.end_object();

    w.kv("uniqueness_discrepancy", art.uniqueness_discrepancy);

    w.key("convergence_table");
    w.begin_array();
    const size_t rows =
        std::min(art.stabilization.trace.size(), art.orbit.distances.size());
    for (size_t i = 0; i < rows; ++i) {
        const ConvergenceRow& row = art.stabilization.trace[i];
        w.begin_object();
        w.kv_int("n", row.n);
        w.kv("max_cauchy_step", row.max_cauchy_step);
        w.kv("max_bound_margin_min", row.max_bound_margin_min);
        w.kv("orbit_distance", art.orbit.distances[i].raw());
        w.kv("rate_estimate", i < art.running_rate.size() ? art.running_rate[i] : 0.0);
        w.end_object();
    }
    w.end_array();

    w.end_object();
    os << '\n';
}

void emit_report(const RunArtifacts& art, OutputFormat format, const std::string& path) {
    if (path.empty() || path == "-") {
        if (format == OutputFormat::Csv)
            emit_csv(art, std::cout);
        else
            emit_json(art, std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("emit_report: cannot open " + path + " for writing");
    if (format == OutputFormat::Csv)
        emit_csv(art, out);
    else
        emit_json(art, out);
    out.flush();
    if (!out) throw IoError("emit_report: write to " + path + " failed");
}

}  // namespace stablab
