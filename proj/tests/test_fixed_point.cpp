#include <doctest.h>

#include <cmath>

#include "stablab/control.hpp"
#include "stablab/derivation.hpp"
#include "stablab/errors.hpp"
#include "stablab/fixed_point.hpp"
#include "stablab/rng.hpp"

using namespace stablab;

namespace {

const ModuleSpace c2 = ModuleSpace::vectors(2);

PsiFunction power_psi(double beta, double p) {
    return psi_function(ControlFunction::rassias(0, beta, 0, p));
}

MapFn identity_map() {
    return [](const ModuleElement& x) { return x; };
}

}  // namespace

TEST_CASE("sample grid geometry") {
    const SampleGrid grid = SampleGrid::make(c2, 5, 6, 123);
    const auto pts = grid.all_points();
    CHECK(pts.size() == 1 + 5 * 13);
    CHECK(pts.front().is_zero);
    CHECK(pts.front().x.max_abs() == 0.0);

    // Doubling a point moves exactly one scale up, bit for bit.
    const ModuleElement p = grid.point(2, 3);
    CHECK((p.scaled_pow2(1) - grid.point(2, 4)).max_abs() == 0.0);

    // Base norms rotate through {0.25, 1, 4}.
    CHECK(std::abs(module_norm(grid.base_points()[0]) - 0.25) <= 1e-12);
    CHECK(std::abs(module_norm(grid.base_points()[1]) - 1.0) <= 1e-12);
    CHECK(std::abs(module_norm(grid.base_points()[2]) - 4.0) <= 1e-12);

    // Same seed, same grid.
    const SampleGrid again = SampleGrid::make(c2, 5, 6, 123);
    CHECK(grid.compatible(again));
    // Different seed, different base points.
    const SampleGrid other = SampleGrid::make(c2, 5, 6, 124);
    CHECK_FALSE(grid.compatible(other));
}

TEST_CASE("gen_distance conventions") {
    const SampleGrid grid = SampleGrid::make(c2, 4, 5, 200);
    const PsiFunction psi = power_psi(1.0, 0.5);

    const TabulatedMap g = TabulatedMap::tabulate(grid, identity_map());
    CHECK(gen_distance(g, g, psi) == ExtendedNonNegative::finite(0.0));

    // h = g + psi(x) * unit vector: the ratio is exactly 1 everywhere.
    const TabulatedMap h = TabulatedMap::tabulate(grid, [&](const ModuleElement& x) {
        return x + Complex(psi(x), 0.0) * ModuleElement::basis(c2, 0);
    });
    const ExtendedNonNegative one = gen_distance(g, h, psi);
    CHECK(one.is_finite());
    CHECK(std::abs(one.finite_value() - 1.0) <= 1e-12);

    // A psi that vanishes on a subgrid sends positive differences to infinity.
    const PsiFunction dead{[](const ModuleElement&) { return 0.0; }};
    CHECK(gen_distance(g, h, dead).is_infinite());
    CHECK(gen_distance(g, g, dead) == ExtendedNonNegative::finite(0.0));  // 0/0 = 0

    // Maps differing only at the origin are identical as grid maps: the value
    // at zero is pinned for every member of S.
    const TabulatedMap g2 = TabulatedMap::tabulate(grid, [&](const ModuleElement& x) {
        if (x.is_zero()) return ModuleElement::basis(c2, 0);  // never consulted
        return x;
    });
    CHECK(gen_distance(g, g2, psi) == ExtendedNonNegative::finite(0.0));

    const SampleGrid other = SampleGrid::make(c2, 4, 5, 999);
    const TabulatedMap k = TabulatedMap::tabulate(other, identity_map());
    CHECK_THROWS_AS(gen_distance(g, k, psi), GridMismatchError);
}

TEST_CASE("gen_distance is a generalized metric") {
    const SampleGrid grid = SampleGrid::make(c2, 4, 4, 201);
    const PsiFunction psi = power_psi(0.7, 0.5);
    Sampler rng(55);
    const auto pairs = random_map_pairs(grid, psi, 3, 777);
    const TabulatedMap& a = pairs[0].first;
    const TabulatedMap& b = pairs[1].first;
    const TabulatedMap& c = pairs[2].first;

    // Symmetry is exact.
    CHECK(gen_distance(a, b, psi) == gen_distance(b, a, psi));

    // Triangle inequality within tolerance.
    const double ab = gen_distance(a, b, psi).finite_value();
    const double bc = gen_distance(b, c, psi).finite_value();
    const double ac = gen_distance(a, c, psi).finite_value();
    CHECK(ac <= ab + bc + 1e-12);

    // Identity of indiscernibles where psi > 0.
    CHECK(gen_distance(a, a, psi) == ExtendedNonNegative::finite(0.0));
}

TEST_CASE("apply_J fixed points and scaling") {
    const SampleGrid grid = SampleGrid::make(c2, 4, 5, 202);

    // The identity map is a fixed point of both scaling operators, exactly.
    const TabulatedMap id = TabulatedMap::tabulate(grid, identity_map());
    for (Regime r : {Regime::Doubling, Regime::Halving}) {
        const TabulatedMap jid = apply_J(id, r);
        for (int b = 0; b < 4; ++b)
            for (int k = jid.scale_lo(); k <= jid.scale_hi(); ++k)
                CHECK((jid.value(b, k) - id.value(b, k)).max_abs() == 0.0);
    }

    // g(x) = ||x||^p e maps to 2^(p-1) g under the doubling operator.
    const double p = 0.5;
    const TabulatedMap powmap = TabulatedMap::tabulate(grid, [&](const ModuleElement& x) {
        return Complex(std::pow(module_norm(x), p), 0.0) * ModuleElement::basis(c2, 0);
    });
    const TabulatedMap jpow = apply_J(powmap, Regime::Doubling);
    const double factor = std::exp2(p - 1.0);
    for (int b = 0; b < 4; ++b) {
        for (int k = jpow.scale_lo(); k <= jpow.scale_hi(); ++k) {
            const ModuleElement expect = Complex(factor, 0.0) * powmap.value(b, k);
            CHECK((jpow.value(b, k) - expect).max_abs() <=
                  1e-14 * (1.0 + expect.max_abs()));
        }
    }

    // The window shrinks by one scale per application and eventually runs out.
    TabulatedMap walk = id;
    for (int i = 0; i < 10; ++i) walk = apply_J(walk, Regime::Doubling);
    CHECK_THROWS_AS(apply_J(walk, Regime::Doubling), DepthExhaustedError);
}

TEST_CASE("contraction of the scaling operator on random pairs") {
    const SampleGrid grid = SampleGrid::make(c2, 6, 8, 203);
    for (double p : {0.0, 0.5, 0.9}) {
        const ControlFunction c = ControlFunction::rassias(0.3, 1.0, 0.5, p);
        const RegimeConstants rc = regime_constants(c);
        const auto pairs = random_map_pairs(grid, psi_function(c), 100, 31337);
        const ContractionReport rep =
            contraction_check(pairs, psi_function(c), rc.regime, rc.L);
        CHECK(rep.pairs_checked == 100);
        CHECK(rep.violations == 0);
    }
    for (double p : {1.5, 2.0, 3.0}) {
        const ControlFunction c = ControlFunction::rassias(0.0, 1.0, 0.5, p);
        const RegimeConstants rc = regime_constants(c);
        const auto pairs = random_map_pairs(grid, psi_function(c), 100, 424242);
        const ContractionReport rep =
            contraction_check(pairs, psi_function(c), rc.regime, rc.L);
        CHECK(rep.violations == 0);
    }

    // Equal maps: 0 <= 0.
    const PsiFunction psi = power_psi(1.0, 0.5);
    const TabulatedMap id = TabulatedMap::tabulate(grid, identity_map());
    const ContractionReport triv = contraction_check({{id, id}}, psi, Regime::Doubling,
                                                     std::exp2(-0.5));
    CHECK(triv.violations == 0);
    CHECK(triv.max_violation == 0.0);
}

TEST_CASE("orbit distances") {
    Sampler rng(56);
    const SampleGrid grid = SampleGrid::make(c2, 6, 10, 204);
    const DerivationSpec d = DerivationSpec::skew_matrix(rng.random_skew(2), 2);

    // Exact derivation: f is already the fixed point, all distances are 0.
    {
        const MapUnderTest f(d, PerturbationSpec::none(c2));
        const TabulatedMap tab =
            TabulatedMap::tabulate(grid, [&](const ModuleElement& x) { return f.eval(x); });
        const PsiFunction psi = power_psi(0.2, 0.5);
        const OrbitReport rep = orbit_distances(tab, psi, Regime::Doubling, std::exp2(-0.5), 8);
        for (const auto& dist : rep.distances) CHECK(dist.raw() <= 1e-10);
        CHECK(rep.a2_consistent);
        CHECK(rep.contraction_ok);
    }

    // Power-law perturbation: d_n = d_0 L^n with d_0 in closed form.
    {
        const double eps = 0.1, p = 0.5, beta = 0.2;
        const MapUnderTest f(
            d, PerturbationSpec::power_law(eps, p, ModuleElement::basis(c2, 0)));
        const TabulatedMap tab =
            TabulatedMap::tabulate(grid, [&](const ModuleElement& x) { return f.eval(x); });
        const PsiFunction psi = power_psi(beta, p);
        const double L = std::exp2(p - 1.0);
        const OrbitReport rep = orbit_distances(tab, psi, Regime::Doubling, L, 10);
        const double d0 = eps * (1.0 - L) * L / beta;
        CHECK(std::abs(rep.distances[0].finite_value() - d0) <= 1e-10 * (1.0 + d0));
        for (size_t n = 0; n + 1 < rep.distances.size(); ++n) {
            const double ratio =
                rep.distances[n + 1].finite_value() / rep.distances[n].finite_value();
            CHECK(std::abs(ratio - L) <= 1e-10);
        }
        CHECK(rep.contraction_ok);
        CHECK(rep.a2_consistent);
    }

    // A psi that vanishes off the origin puts the orbit on the infinite
    // branch at this resolution.
    {
        const MapUnderTest f(
            d, PerturbationSpec::power_law(0.1, 0.5, ModuleElement::basis(c2, 0)));
        const TabulatedMap tab =
            TabulatedMap::tabulate(grid, [&](const ModuleElement& x) { return f.eval(x); });
        const PsiFunction dead{[](const ModuleElement&) { return 0.0; }};
        const OrbitReport rep = orbit_distances(tab, dead, Regime::Doubling, 0.5, 4);
        CHECK(rep.distances[0].is_infinite());
        CHECK_FALSE(rep.a2_consistent);
        CHECK(rep.first_finite == -1);
    }
}
