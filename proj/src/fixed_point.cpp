#include "stablab/fixed_point.hpp"

#include <cassert>
#include <cmath>
#include <limits>

#include "stablab/errors.hpp"
#include "stablab/rng.hpp"

namespace stablab {

TabulatedMap TabulatedMap::tabulate(const SampleGrid& grid, const MapFn& f) {
    const int n = grid.scale_depth();
    std::vector<ModuleElement> values;
    values.reserve(grid.base_points().size() * (2 * static_cast<size_t>(n) + 1));
    for (int b = 0; b < static_cast<int>(grid.base_points().size()); ++b)
        for (int k = -n; k <= n; ++k) values.push_back(f(grid.point(b, k)));
    return TabulatedMap(grid, -n, n, std::move(values));
}

size_t TabulatedMap::index(int base, int scale) const {
    assert(scale >= lo_ && scale <= hi_);
    const size_t width = static_cast<size_t>(hi_ - lo_ + 1);
    return static_cast<size_t>(base) * width + static_cast<size_t>(scale - lo_);
}

const ModuleElement& TabulatedMap::value(int base, int scale) const {
    return values_[index(base, scale)];
}

TabulatedMap TabulatedMap::with_value(int base, int scale, ModuleElement v) const {
    TabulatedMap out = *this;
    out.values_[index(base, scale)] = std::move(v);
    return out;
}

std::vector<GridPoint> TabulatedMap::domain() const {
    std::vector<GridPoint> pts;
    pts.push_back(GridPoint{ModuleElement::zero(grid_.space()), -1, 0, true});
    for (int b = 0; b < static_cast<int>(grid_.base_points().size()); ++b)
        for (int k = lo_; k <= hi_; ++k)
            pts.push_back(GridPoint{grid_.point(b, k), b, k, false});
    return pts;
}

ExtendedNonNegative gen_distance(const TabulatedMap& g, const TabulatedMap& h,
                                 const PsiFunction& psi) {
    if (!g.grid().compatible(h.grid()))
        throw GridMismatchError("gen_distance: maps tabulated on different grids");

    const int lo = std::max(g.scale_lo(), h.scale_lo());
    const int hi = std::min(g.scale_hi(), h.scale_hi());
    ExtendedNonNegative worst = ExtendedNonNegative::finite(0.0);
    // The zero point contributes 0: both maps are pinned to 0 there.
    for (int b = 0; b < static_cast<int>(g.grid().base_points().size()); ++b) {
        for (int k = lo; k <= hi; ++k) {
            const double diff = module_norm(g.value(b, k) - h.value(b, k));
            if (diff == 0.0) continue;
            const double px = psi(g.grid().point(b, k));
            const ExtendedNonNegative ratio = px == 0.0
                                                  ? ExtendedNonNegative::infinity()
                                                  : ExtendedNonNegative::finite(diff / px);
            worst = ExtendedNonNegative::max(worst, ratio);
        }
    }
    return worst;
}

TabulatedMap apply_J(const TabulatedMap& g, Regime regime) {
    const int lo = regime == Regime::Doubling ? g.lo_ : g.lo_ + 1;
    const int hi = regime == Regime::Doubling ? g.hi_ - 1 : g.hi_;
    if (lo > hi)
        throw DepthExhaustedError("apply_J: the grid's scale window is exhausted");

    std::vector<ModuleElement> values;
    const size_t bases = g.grid_.base_points().size();
    values.reserve(bases * static_cast<size_t>(hi - lo + 1));
    for (int b = 0; b < static_cast<int>(bases); ++b) {
        for (int k = lo; k <= hi; ++k) {
            if (regime == Regime::Doubling)
                values.push_back(g.value(b, k + 1).scaled_pow2(-1));  // g(2x)/2
            else
                values.push_back(g.value(b, k - 1).scaled_pow2(1));  // 2 g(x/2)
        }
    }
    return TabulatedMap(g.grid_, lo, hi, std::move(values));
}

ContractionReport contraction_check(
    const std::vector<std::pair<TabulatedMap, TabulatedMap>>& pairs, const PsiFunction& psi,
    Regime regime, double L) {
    ContractionReport rep;
    for (const auto& [g, h] : pairs) {
        ++rep.pairs_checked;
        const ExtendedNonNegative d_gh = gen_distance(g, h, psi);
        const ExtendedNonNegative d_j = gen_distance(apply_J(g, regime), apply_J(h, regime), psi);
        const ExtendedNonNegative bound = d_gh.scaled(L);
        if (bound.is_infinite()) continue;  // L * inf = inf dominates everything
        if (d_j.is_infinite()) {
            ++rep.violations;
            rep.max_violation = std::numeric_limits<double>::infinity();
            continue;
        }
        const double gap = d_j.finite_value() - bound.finite_value();
        rep.max_violation = std::max(rep.max_violation, gap);
        if (gap > 1e-12) ++rep.violations;
    }
    return rep;
}

std::vector<std::pair<TabulatedMap, TabulatedMap>> random_map_pairs(const SampleGrid& grid,
                                                                    const PsiFunction& psi,
                                                                    int count,
                                                                    std::uint64_t seed) {
    Sampler rng(seed);
    const auto random_map = [&]() {
        return TabulatedMap::tabulate(grid, [&](const ModuleElement& x) {
            const double target = rng.uniform(0.0, 2.0) * psi(x);
            if (target == 0.0 || x.is_zero()) return ModuleElement::zero(grid.space());
            return rng.element_with_norm(grid.space(), target);
        });
    };
    std::vector<std::pair<TabulatedMap, TabulatedMap>> pairs;
    pairs.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) pairs.emplace_back(random_map(), random_map());
    return pairs;
}

OrbitReport orbit_distances(const TabulatedMap& f, const PsiFunction& psi, Regime regime,
                            double L, int steps) {
    OrbitReport rep;
    TabulatedMap current = f;
    TabulatedMap next = apply_J(current, regime);
    for (int n = 0; n < steps; ++n) {
        rep.distances.push_back(gen_distance(current, next, psi));
        if (n + 1 < steps) {
            current = next;
            next = apply_J(current, regime);
        }
    }

    for (size_t n = 0; n < rep.distances.size(); ++n) {
        if (rep.distances[n].is_finite()) {
            rep.first_finite = static_cast<int>(n);
            break;
        }
    }
    rep.a2_consistent = rep.first_finite >= 0;
    if (rep.first_finite >= 0) {
        for (size_t n = static_cast<size_t>(rep.first_finite); n < rep.distances.size(); ++n)
            if (rep.distances[n].is_infinite()) rep.a2_consistent = false;
    }

    for (size_t n = 0; n + 1 < rep.distances.size(); ++n) {
        const ExtendedNonNegative bound = rep.distances[n].scaled(L);
        if (bound.is_infinite()) continue;
        if (rep.distances[n + 1].is_infinite()) {
            rep.contraction_ok = false;
            rep.max_ratio_violation = std::numeric_limits<double>::infinity();
            continue;
        }
        const double gap = rep.distances[n + 1].finite_value() - bound.finite_value();
        rep.max_ratio_violation = std::max(rep.max_ratio_violation, gap);
        if (gap > 1e-12) rep.contraction_ok = false;
    }
    return rep;
}

}  // namespace stablab
