#include <doctest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "stablab/errors.hpp"
#include "stablab/harness.hpp"

using namespace stablab;

TEST_CASE("minimal config gets the documented defaults") {
    const ExperimentConfig cfg = parse_config_text(R"({"space": {"kind": "vectors", "dim": 2}})");
    CHECK(cfg.space_dim == 2);
    CHECK(cfg.depth == 40);
    CHECK(cfg.tol == 1e-9);
    CHECK(cfg.base_points == 8);
    CHECK(cfg.scale_depth == 12);
    CHECK(cfg.eps == 0.0);
    CHECK(cfg.strict);
}

TEST_CASE("config validation rejects the uncovered and malformed cases") {
    // The unsolved exponent gets its dedicated error.
    try {
        parse_config_text(R"({"control": {"family": "rassias", "beta": 1.0, "p": 1.0}})");
        FAIL("p = 1 must be rejected");
    } catch (const PEqualsOneError& e) {
        CHECK(std::string(e.what()).find("p = 1 is not covered") != std::string::npos);
    }

    // A constant term is incompatible with the halving regime.
    CHECK_THROWS_AS(parse_config_text(
                        R"({"control": {"family": "rassias", "alpha": 0.5, "beta": 1.0, "p": 2.0}})"),
                    AlphaNotAllowedError);

    // Compact support scales like the doubling regime only.
    CHECK_THROWS_AS(
        parse_config_text(R"({
            "perturbation": {"family": "compact-support", "epsilon": 0.1, "radius": 2.0},
            "control": {"family": "rassias", "beta": 1.0, "p": 2.0}})"),
        ValidationError);

    CHECK_THROWS_AS(parse_config_text(R"({"space": {"kind": "vectors", "dim": 17}})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_config_text(R"({"run": {"depth": 61}})"), ValidationError);
    CHECK_THROWS_AS(parse_config_text(R"({"run": {"regime": "halving"}})"), ValidationError);
    CHECK_THROWS_AS(parse_config_text("{ not json"), ParseError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), IoError);
}

TEST_CASE("perturbation exponent must match the control regime") {
    CHECK_THROWS_AS(parse_config_text(R"({
        "perturbation": {"family": "power-law", "epsilon": 0.1, "p": 2.0},
        "control": {"family": "rassias", "beta": 0.2, "p": 0.5}})"),
                    ValidationError);
    // Exponent 1 with a live perturbation matches neither regime.
    CHECK_THROWS_AS(parse_config_text(R"({
        "perturbation": {"family": "power-law", "epsilon": 0.1, "p": 1.0}})"),
                    ValidationError);
}

TEST_CASE("stage isolation: the unperturbed run is clean everywhere") {
    ExperimentConfig cfg = default_config();
    cfg.base_points = 6;
    cfg.scale_depth = 8;
    const RunArtifacts art = run_experiment(cfg);
    CHECK(art.axioms.pass());
    CHECK(art.admissibility.admissible);
    CHECK(art.envelope.violation_count == 0);
    CHECK(art.stabilization.bound_violations == 0);
    CHECK(art.stabilization.max_cauchy_step <= 1e-10);
    for (const auto& d : art.orbit.distances) CHECK(d.raw() <= 1e-10);
    CHECK_FALSE(art.any_violation());
    CHECK(art.stabilization.branch == "a2");
}

TEST_CASE("emitters are deterministic and the CSV header is pinned") {
    ExperimentConfig cfg = showcase_doubling_config();
    cfg.base_points = 6;
    cfg.scale_depth = 8;
    const RunArtifacts a = run_experiment(cfg);
    const RunArtifacts b = run_experiment(cfg);

    std::ostringstream ja, jb, ca, cb;
    emit_json(a, ja);
    emit_json(b, jb);
    emit_csv(a, ca);
    emit_csv(b, cb);
    CHECK(ja.str() == jb.str());
    CHECK(ca.str() == cb.str());

    const std::string header = ca.str().substr(0, ca.str().find('\n'));
    CHECK(header == "n,max_cauchy_step,max_bound_margin_min,orbit_distance,rate_estimate");

    // The orbit column contracts at L = 2^(-1/2) per row.
    std::istringstream rows(ca.str());
    std::string line;
    std::getline(rows, line);  // header
    double prev = -1.0;
    int checked = 0;
    while (std::getline(rows, line)) {
        const size_t c1 = line.find(',');
        const size_t c2 = line.find(',', c1 + 1);
        const size_t c3 = line.find(',', c2 + 1);
        const size_t c4 = line.find(',', c3 + 1);
        const double orbit = std::stod(line.substr(c3 + 1, c4 - c3 - 1));
        if (prev > 0.0) {
            CHECK(std::abs(orbit / prev - std::exp2(-0.5)) <= 1e-9);
            ++checked;
        }
        prev = orbit;
    }
    CHECK(checked > 5);
}

TEST_CASE("json report round-trips its numbers exactly") {
    ExperimentConfig cfg = showcase_doubling_config();
    cfg.base_points = 4;
    cfg.scale_depth = 6;
    const RunArtifacts art = run_experiment(cfg);

    std::ostringstream os;
    emit_json(art, os);
    const nlohmann::json j = nlohmann::json::parse(os.str());

    CHECK(j["stabilization_report"]["min_margin"].get<double>() ==
          art.stabilization.min_margin);
    CHECK(j["stabilization_report"]["rate_estimate"].get<double>() ==
          art.stabilization.rate_estimate);
    CHECK(j["uniqueness_discrepancy"].get<double>() == art.uniqueness_discrepancy);
    CHECK(j["defect_envelope"]["rows"][3]["phi"].get<double>() == art.envelope.rows[3].phi);
    CHECK(j["orbit_report"]["distances"][0].get<double>() ==
          art.orbit.distances[0].finite_value());
    CHECK(j["stabilization_report"]["points"][5]["distance"].get<double>() ==
          art.stabilization.points[5].distance);
    CHECK(j["convergence_table"][2]["orbit_distance"].get<double>() ==
          art.orbit.distances[2].finite_value());
    CHECK(j["axiom_report"]["pass"].get<bool>());
}

TEST_CASE("negative control: violations flow into the strict contract") {
    ExperimentConfig cfg = negative_control_config();
    cfg.base_points = 6;
    cfg.scale_depth = 8;
    cfg.strict = false;
    const RunArtifacts art = run_experiment(cfg);
    CHECK(art.envelope.violation_count > 0);
    CHECK(art.any_violation());

    cfg.strict = true;
    CHECK_THROWS_AS(run_experiment(cfg), HypothesisViolatedError);
}
