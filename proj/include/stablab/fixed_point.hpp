#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "stablab/control.hpp"
#include "stablab/extended_real.hpp"
#include "stablab/sample_grid.hpp"

namespace stablab {

using MapFn = std::function<ModuleElement(const ModuleElement&)>;

/// A map from the set S = {g : g(0) = 0}, tabulated on a dyadic grid. The
/// value at zero is pinned to zero; the scale window shrinks as the scaling
/// operator consumes depth, so no interpolation ever happens.
class TabulatedMap {
public:
    static TabulatedMap tabulate(const SampleGrid& grid, const MapFn& f);

    const SampleGrid& grid() const { return grid_; }
    int scale_lo() const { return lo_; }
    int scale_hi() const { return hi_; }

    const ModuleElement& value(int base, int scale) const;
    TabulatedMap with_value(int base, int scale, ModuleElement v) const;

    /// Grid points with tabulated values (zero point first).
    std::vector<GridPoint> domain() const;

private:
    TabulatedMap(SampleGrid grid, int lo, int hi, std::vector<ModuleElement> values)
        : grid_(std::move(grid)), lo_(lo), hi_(hi), values_(std::move(values)) {}

    size_t index(int base, int scale) const;

    SampleGrid grid_;
    int lo_, hi_;
    std::vector<ModuleElement> values_;  // base-major, scales lo..hi

    friend TabulatedMap apply_J(const TabulatedMap& g, Regime regime);
};

/// d(g,h) = inf{c : ||g(x) - h(x)|| <= c psi(x) on the grid}, realized as the
/// max of pointwise ratios with 0/0 = 0 and positive/0 = infinity.
ExtendedNonNegative gen_distance(const TabulatedMap& g, const TabulatedMap& h,
                                 const PsiFunction& psi);

/// (J0 g)(x) = g(2x)/2 (doubling) or (J1 g)(x) = 2 g(x/2) (halving), acting by
/// exact relabeling on the depth-reduced window. Throws DepthExhaustedError
/// when the window would become empty.
TabulatedMap apply_J(const TabulatedMap& g, Regime regime);

struct ContractionReport {
    int pairs_checked = 0;
    int violations = 0;
    double max_violation = 0.0;  ///< max of d(Jg,Jh) - L d(g,h) over finite pairs
    bool ok() const { return violations == 0; }
};

/// Verifies d(Jg, Jh) <= L d(g, h) + 1e-12 for each pair.
ContractionReport contraction_check(
    const std::vector<std::pair<TabulatedMap, TabulatedMap>>& pairs, const PsiFunction& psi,
    Regime regime, double L);

struct OrbitReport {
    std::vector<ExtendedNonNegative> distances;  ///< d_n = d(J^n f, J^(n+1) f)
    int first_finite = -1;
    bool a2_consistent = false;  ///< all distances finite from some n0 on
    double max_ratio_violation = 0.0;  ///< max of d_(n+1) - L d_n over finite steps
    bool contraction_ok = true;
};

/// Distances along the orbit of f under J, classifying which branch of the
/// fixed point alternative the data is consistent with at grid resolution.
OrbitReport orbit_distances(const TabulatedMap& f, const PsiFunction& psi, Regime regime,
                            double L, int steps);

/// Seeded random tabulated pairs at O(1) generalized distance: each value has
/// norm uniform in [0, 2 psi(x)] in a random direction, value at 0 pinned.
std::vector<std::pair<TabulatedMap, TabulatedMap>> random_map_pairs(const SampleGrid& grid,
                                                                    const PsiFunction& psi,
                                                                    int count,
                                                                    std::uint64_t seed);

}  // namespace stablab
