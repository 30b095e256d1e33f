#pragma once

#include <array>
#include <string>
#include <vector>

#include "stablab/control.hpp"
#include "stablab/derivation.hpp"
#include "stablab/fixed_point.hpp"
#include "stablab/sample_grid.hpp"

namespace stablab {

inline constexpr double kDefaultOverflowCap = 1e100;

/// The raw scaling iterate: f(2^n x)/2^n (doubling) or 2^n f(2^-n x)
/// (halving); n = 0 gives f(x). Throws OverflowError when a scaled argument
/// or value leaves the cap.
ModuleElement hyers_iterate(const MapFn& f, const ModuleElement& x, int n, Regime regime,
                            double overflow_cap = kDefaultOverflowCap);
ModuleElement hyers_iterate(const MapUnderTest& f, const ModuleElement& x, int n, Regime regime,
                            double overflow_cap = kDefaultOverflowCap);

/// Pointwise limit of the scaling iteration, evaluated as the depth-th
/// iterate plus the geometric tail L/(1-L) (it_depth - it_(depth-1)). When
/// the iteration error contracts exactly at rate L (every perturbation family
/// here) this recovers the limit to rounding accuracy.
ModuleElement stabilized_value(const MapFn& f, const ModuleElement& x, int depth, Regime regime,
                               double L, double overflow_cap = kDefaultOverflowCap);

/// Evaluate-anywhere stabilized limit of one map.
class StabilizedEvaluator {
public:
    StabilizedEvaluator(MapFn f, int depth, Regime regime, double L)
        : f_(std::move(f)), depth_(depth), regime_(regime), L_(L) {}
    StabilizedEvaluator(const MapUnderTest& f, int depth, Regime regime, double L);

    ModuleElement operator()(const ModuleElement& x) const {
        return stabilized_value(f_, x, depth_, regime_, L_);
    }
    Regime regime() const { return regime_; }

private:
    MapFn f_;
    int depth_;
    Regime regime_;
    double L_;
};

struct PointRecord {
    int base;    ///< -1 for the zero point
    int scale;
    double norm;
    double distance;     ///< ||f(x) - T(x)||
    double bound;        ///< conclusion_bound(x)
    double margin;       ///< bound - distance
    double cauchy_step;  ///< stabilized-sequence step at the final depth
};

struct ConvergenceRow {
    int n;
    double max_cauchy_step;       ///< max over grid of the raw iterate step at n
    double max_bound_margin_min;  ///< min over grid of bound - ||f - it_n||
};

struct StabilizationReport {
    Regime regime;
    double L = 0.0;
    int depth = 0;
    double tol = 0.0;

    std::vector<PointRecord> points;
    double max_cauchy_step = 0.0;
    double min_margin = 0.0;
    int bound_violations = 0;  ///< points with margin < -1e-10

    double additivity_residual = 0.0;     ///< T(x+y) vs T(x) + T(y)
    double mu_linearity_residual = 0.0;   ///< T(mu x) vs mu T(x)
    double mu_additivity_residual = 0.0;  ///< T(mu x + y) vs mu T(x) + T(y)
    double derivation_residual = 0.0;     ///< derivation identity of T

    double rate_estimate = 0.0;
    bool rate_defined = false;

    bool envelope_ok = false;
    int envelope_violations = 0;

    bool converged = false;
    std::string branch = "unclassified";

    std::vector<ConvergenceRow> trace;  ///< raw-iterate convergence table
};

struct StabilizeOptions {
    int depth = 40;
    double tol = 1e-9;
    bool strict = false;
    int additivity_pairs = 120;
    int mu_points = 24;
    int derivation_triples = 200;
    double overflow_cap = kDefaultOverflowCap;
};

/// Runs the pointwise stabilization over the grid, certifies the conclusion
/// bound, additivity, unimodular linearity, and the derivation identity of
/// the limit, and embeds the defect-envelope verdict. Throws
/// HypothesisViolatedError (strict mode with envelope violations) and
/// NotConvergedError (final Cauchy step above tol).
StabilizationReport stabilize(const MapUnderTest& f, const SampleGrid& grid,
                              const ControlFunction& c, const DefectEnvelope& envelope,
                              const StabilizeOptions& opts = {});

/// Stabilizes f and its J-image as two starting points in the same orbit
/// class and returns the max pointwise distance between the two limits.
double uniqueness_probe(const MapUnderTest& f, const SampleGrid& grid, const ControlFunction& c,
                        int depth);

/// Deterministic decomposition of z (|z| <= 3) into three unimodular numbers
/// mu1 + mu2 + mu3 = z. Throws OutOfRangeError for |z| > 3 + 1e-12.
std::array<Complex, 3> three_unimodular(Complex z);

struct ScalarLinearityResult {
    double chain_residual;   ///< reconstruction through K and the unimodular triple
    double direct_residual;  ///< ||T(lambda x) - lambda T(x)||
};

/// Replays the scalar-linearity argument: K = floor(4|lambda|) + 1, decompose
/// 3 lambda / K, and compare (K/3) sum T(mu_i x) against T(lambda x).
ScalarLinearityResult scalar_linearity_check(const StabilizedEvaluator& T, Complex lambda,
                                             const ModuleElement& x);

struct RateEstimate {
    double l_hat = 0.0;
    bool defined = false;
    int n_lo = 0;
    int n_hi = 0;
};

/// Geometric-mean ratio of successive iteration errors against the
/// stabilized limit. Throws RateUndefinedError when the errors fall below
/// 1e-13 anywhere in the range.
RateEstimate rate_estimate(const MapUnderTest& f, const ModuleElement& x, Regime regime,
                           double L, int n_lo, int n_hi, int limit_depth = 40);

}  // namespace stablab
