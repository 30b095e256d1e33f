#include "stablab/stabilizer.hpp"

#include <cassert>
#include <cmath>
#include <limits>

#include "stablab/errors.hpp"
#include "stablab/rng.hpp"

namespace stablab {

namespace {

MapFn as_fn(const MapUnderTest& f) {
    return [&f](const ModuleElement& x) { return f.eval(x); };
}

void check_cap(const ModuleElement& e, double cap, const char* what) {
    if (e.max_abs() > cap)
        throw OverflowError(std::string("hyers_iterate: ") + what + " exceeds the overflow cap");
}

}  // namespace

ModuleElement hyers_iterate(const MapFn& f, const ModuleElement& x, int n, Regime regime,
                            double overflow_cap) {
    assert(n >= 0);
    const int shift = regime == Regime::Doubling ? n : -n;
    const ModuleElement arg = x.scaled_pow2(shift);
    check_cap(arg, overflow_cap, "scaled argument");
    const ModuleElement val = f(arg).scaled_pow2(-shift);
    check_cap(val, overflow_cap, "scaled value");
    return val;
}

ModuleElement hyers_iterate(const MapUnderTest& f, const ModuleElement& x, int n, Regime regime,
                            double overflow_cap) {
    return hyers_iterate(as_fn(f), x, n, regime, overflow_cap);
}

ModuleElement stabilized_value(const MapFn& f, const ModuleElement& x, int depth, Regime regime,
                               double L, double overflow_cap) {
    assert(depth >= 1);
    const ModuleElement prev = hyers_iterate(f, x, depth - 1, regime, overflow_cap);
    const ModuleElement last = hyers_iterate(f, x, depth, regime, overflow_cap);
    const Complex tail(L / (1.0 - L), 0.0);
    return last + tail * (last - prev);
}

StabilizedEvaluator::StabilizedEvaluator(const MapUnderTest& f, int depth, Regime regime,
                                         double L)
    : f_([f](const ModuleElement& x) { return f.eval(x); }),
      depth_(depth),
      regime_(regime),
      L_(L) {}

StabilizationReport stabilize(const MapUnderTest& f, const SampleGrid& grid,
                              const ControlFunction& c, const DefectEnvelope& envelope,
                              const StabilizeOptions& opts) {
    if (grid.space() != f.space())
        throw SpaceMismatchError("stabilize: grid belongs to a different space");
    if (opts.depth < 2) throw ValidationError("stabilize: depth must be >= 2");

    const RegimeConstants rc = regime_constants(c);

    StabilizationReport rep;
    rep.regime = rc.regime;
    rep.L = rc.L;
    rep.depth = opts.depth;
    rep.tol = opts.tol;
    rep.envelope_ok = envelope.ok();
    rep.envelope_violations = envelope.violation_count;

    if (opts.strict && !envelope.ok())
        throw HypothesisViolatedError(
            "stabilize: the defect envelope reports control-function violations");

    const double tail = rc.L / (1.0 - rc.L);
    const std::vector<GridPoint> pts = grid.all_points();

    rep.trace.resize(static_cast<size_t>(opts.depth));
    for (int n = 1; n <= opts.depth; ++n) {
        rep.trace[static_cast<size_t>(n - 1)] =
            ConvergenceRow{n, 0.0, std::numeric_limits<double>::infinity()};
    }
    rep.min_margin = std::numeric_limits<double>::infinity();

    for (const GridPoint& gp : pts) {
        // Raw iterates 0..depth, the accelerated sequence on top of them.
        std::vector<ModuleElement> raw;
        raw.reserve(static_cast<size_t>(opts.depth) + 1);
        for (int n = 0; n <= opts.depth; ++n)
            raw.push_back(hyers_iterate(as_fn(f), gp.x, n, rc.regime, opts.overflow_cap));

        const ModuleElement fx = f.eval(gp.x);
        const double bound = conclusion_bound(c, gp.x);

        ModuleElement acc_prev = raw[0];
        ModuleElement acc = raw[0];
        double final_step = 0.0;
        for (int n = 1; n <= opts.depth; ++n) {
            const ModuleElement acc_next =
                raw[static_cast<size_t>(n)] +
                Complex(tail, 0.0) * (raw[static_cast<size_t>(n)] - raw[static_cast<size_t>(n - 1)]);
            acc_prev = acc;
            acc = acc_next;
            if (n >= 2) final_step = module_norm(acc - acc_prev);

            ConvergenceRow& row = rep.trace[static_cast<size_t>(n - 1)];
            row.max_cauchy_step = std::max(
                row.max_cauchy_step,
                module_norm(raw[static_cast<size_t>(n)] - raw[static_cast<size_t>(n - 1)]));
            row.max_bound_margin_min = std::min(
                row.max_bound_margin_min, bound - module_norm(fx - raw[static_cast<size_t>(n)]));
        }

        PointRecord pr;
        pr.base = gp.base;
        pr.scale = gp.scale;
        pr.norm = module_norm(gp.x);
        pr.distance = module_norm(fx - acc);
        pr.bound = bound;
        pr.margin = pr.bound - pr.distance;
        pr.cauchy_step = final_step;
        rep.points.push_back(pr);

        rep.max_cauchy_step = std::max(rep.max_cauchy_step, final_step);
        rep.min_margin = std::min(rep.min_margin, pr.margin);
        if (pr.margin < -1e-10) ++rep.bound_violations;
    }

    rep.converged = rep.max_cauchy_step <= opts.tol;

    const StabilizedEvaluator T(f, opts.depth, rc.regime, rc.L);
    Sampler rng(grid.seed() ^ 0xa0761d6478bd642fULL);
    auto pick = [&]() -> const GridPoint& {
        return pts[static_cast<size_t>(rng.next_u64() % pts.size())];
    };

    // Additivity on sums of grid points; T is evaluated afresh at x + y.
    for (int i = 0; i < opts.additivity_pairs; ++i) {
        const GridPoint& a = pick();
        const GridPoint& b = pick();
        const double r = module_norm(T(a.x + b.x) - T(a.x) - T(b.x));
        rep.additivity_residual = std::max(rep.additivity_residual, r);
    }

    // Unimodular panel: homogeneity and the combined mu-additivity form.
    const std::vector<Complex> panel = unimodular_panel();
    for (int i = 0; i < opts.mu_points; ++i) {
        const GridPoint& a = pick();
        const GridPoint& b = pick();
        const ModuleElement Ta = T(a.x);
        const ModuleElement Tb = T(b.x);
        for (const Complex& mu : panel) {
            const double r1 = module_norm(T(mu * a.x) - mu * Ta);
            rep.mu_linearity_residual = std::max(rep.mu_linearity_residual, r1);
            const double r2 = module_norm(T(combine(mu, a.x, b.x)) - mu * Ta - Tb);
            rep.mu_additivity_residual = std::max(rep.mu_additivity_residual, r2);
        }
    }

    // Derivation identity of the limit on small-scale triples, where the
    // triple products keep rounding noise far below the certificate level.
    const std::vector<GridPoint> small = grid.window_points(2);
    auto pick_small = [&]() -> const GridPoint& {
        return small[static_cast<size_t>(rng.next_u64() % small.size())];
    };
    for (int i = 0; i < opts.derivation_triples; ++i) {
        const ModuleElement& u = pick_small().x;
        const ModuleElement& v = pick_small().x;
        const ModuleElement& w = pick_small().x;
        const CMatrix ip = inner_product(u, v);
        const ModuleElement lhs = T(module_action(ip, w));
        const ModuleElement rhs = module_action(inner_product(T(u), v), w) +
                                  module_action(inner_product(u, T(v)), w) +
                                  module_action(ip, T(w));
        rep.derivation_residual = std::max(rep.derivation_residual, module_norm(lhs - rhs));
    }

    // Contraction-rate estimate at the first unit-norm base point.
    {
        int base_idx = 0;
        for (int b = 0; b < static_cast<int>(grid.base_points().size()); ++b) {
            if (std::abs(module_norm(grid.base_points()[static_cast<size_t>(b)]) - 1.0) < 1e-9) {
                base_idx = b;
                break;
            }
        }
        try {
            const RateEstimate re =
                rate_estimate(f, grid.base_points()[static_cast<size_t>(base_idx)], rc.regime,
                              rc.L, 0, std::min(16, opts.depth - 1), opts.depth);
            rep.rate_estimate = re.l_hat;
            rep.rate_defined = re.defined;
        } catch (const RateUndefinedError&) {
            rep.rate_defined = false;
        }
    }

    if (!rep.converged)
        throw NotConvergedError("stabilize: Cauchy step " + std::to_string(rep.max_cauchy_step) +
                                " above tol at depth " + std::to_string(opts.depth));
    return rep;
}

double uniqueness_probe(const MapUnderTest& f, const SampleGrid& grid, const ControlFunction& c,
                        int depth) {
    const RegimeConstants rc = regime_constants(c);
    const MapFn direct = as_fn(f);
    // The J-image of f is a second starting point in the same finite-distance
    // class; both orbits must land on the same fixed point.
    const MapFn jimage = [f, rc](const ModuleElement& x) {
        if (rc.regime == Regime::Doubling) return f.eval(x.scaled_pow2(1)).scaled_pow2(-1);
        return f.eval(x.scaled_pow2(-1)).scaled_pow2(1);
    };

    double worst = 0.0;
    for (const GridPoint& gp : grid.all_points()) {
        const ModuleElement a = stabilized_value(direct, gp.x, depth, rc.regime, rc.L);
        const ModuleElement b = stabilized_value(jimage, gp.x, depth, rc.regime, rc.L);
        worst = std::max(worst, module_norm(a - b));
    }
    return worst;
}

std::array<Complex, 3> three_unimodular(Complex z) {
    const double az = std::abs(z);
    if (az > 3.0 + 1e-12)
        throw OutOfRangeError("three_unimodular: |z| must be at most 3");

    const Complex mu3 = az >= 1.0 ? z / az : Complex(1.0, 0.0);
    const Complex w = z - mu3;
    const double aw = std::abs(w);
    const Complex u = aw == 0.0 ? Complex(1.0, 0.0) : w / aw;
    const double h = std::sqrt(std::max(0.0, 1.0 - aw * aw / 4.0));
    const Complex iuh = Complex(0.0, 1.0) * u * h;
    const Complex half_w = 0.5 * w;
    return {half_w + iuh, half_w - iuh, mu3};
}

ScalarLinearityResult scalar_linearity_check(const StabilizedEvaluator& T, Complex lambda,
                                             const ModuleElement& x) {
    if (lambda == Complex(0.0, 0.0)) {
        const double r = module_norm(T(Complex(0.0, 0.0) * x));
        return ScalarLinearityResult{r, r};
    }
    const double k = std::floor(4.0 * std::abs(lambda)) + 1.0;
    const std::array<Complex, 3> mus = three_unimodular(3.0 * lambda / k);
    const ModuleElement t_lambda = T(lambda * x);
    const ModuleElement chain =
        Complex(k / 3.0, 0.0) * (T(mus[0] * x) + T(mus[1] * x) + T(mus[2] * x));
    return ScalarLinearityResult{module_norm(t_lambda - chain),
                                 module_norm(t_lambda - lambda * T(x))};
}

RateEstimate rate_estimate(const MapUnderTest& f, const ModuleElement& x, Regime regime,
                           double L, int n_lo, int n_hi, int limit_depth) {
    if (n_lo < 0 || n_hi <= n_lo)
        throw ValidationError("rate_estimate: need 0 <= n_lo < n_hi");
    const MapFn fn = as_fn(f);
    const ModuleElement limit = stabilized_value(fn, x, limit_depth, regime, L);

    std::vector<double> errors;
    errors.reserve(static_cast<size_t>(n_hi - n_lo) + 1);
    for (int n = n_lo; n <= n_hi; ++n) {
        const double e = module_norm(hyers_iterate(fn, x, n, regime) - limit);
        if (e <= 1e-13)
            throw RateUndefinedError(
                "rate_estimate: iteration errors fall below the measurable floor");
        errors.push_back(e);
    }
    RateEstimate re;
    re.n_lo = n_lo;
    re.n_hi = n_hi;
    re.l_hat = std::pow(errors.back() / errors.front(), 1.0 / static_cast<double>(n_hi - n_lo));
    re.defined = true;
    return re;
}

}  // namespace stablab
