#include "stablab/control.hpp"

#include <cassert>
#include <cmath>
#include <limits>

#include "stablab/errors.hpp"

namespace stablab {

const char* regime_name(Regime r) { return r == Regime::Doubling ? "doubling" : "halving"; }

ControlFunction ControlFunction::rassias(double alpha, double beta, double gamma, double p) {
    if (!(alpha >= 0.0 && beta >= 0.0 && gamma >= 0.0 && p >= 0.0))
        throw ValidationError("ControlFunction: parameters must be finite and non-negative");
    ControlFunction c;
    c.family = Family::Rassias;
    c.alpha = alpha;
    c.beta = beta;
    c.gamma = gamma;
    c.p = p;
    return c;
}

ControlFunction ControlFunction::constant(double alpha) {
    if (!(alpha >= 0.0)) throw ValidationError("ControlFunction: alpha must be >= 0");
    ControlFunction c;
    c.family = Family::Constant;
    c.alpha = alpha;
    return c;
}

namespace {

/// t^q with 0^0 := 1 (used by the closed forms).
double pow_norm(double t, double q) {
    if (t == 0.0) return q == 0.0 ? 1.0 : 0.0;
    return std::pow(t, q);
}

double phi_from_norms(const ControlFunction& c, const double (&n)[5]) {
    if (c.family == ControlFunction::Family::Constant) return c.alpha;
    double sum = 0.0;
    double prod = 1.0;
    bool any = false;
    for (double t : n) {
        if (t > 0.0) {
            any = true;
            sum += pow_norm(t, c.p);
            prod *= pow_norm(t, c.p / 2.0);
        }
    }
    return c.alpha + c.beta * sum + (any ? c.gamma * prod : 0.0);
}

}  // namespace

double eval_phi(const ControlFunction& c, const ModuleElement& x, const ModuleElement& y,
                const ModuleElement& u, const ModuleElement& v, const ModuleElement& w) {
    const double n[5] = {module_norm(x), module_norm(y), module_norm(u), module_norm(v),
                         module_norm(w)};
    return phi_from_norms(c, n);
}

double eval_psi_norm(const ControlFunction& c, double norm_x) {
    if (c.family == ControlFunction::Family::Constant) return c.alpha;
    const double coeff =
        std::exp2(1.0 - c.p) * c.beta + std::exp2(-c.p) * c.gamma;
    return c.alpha + coeff * pow_norm(norm_x, c.p);
}

double eval_psi(const ControlFunction& c, const ModuleElement& x) {
    return eval_psi_norm(c, module_norm(x));
}

RegimeConstants regime_constants(const ControlFunction& c) {
    if (c.family == ControlFunction::Family::Constant)
        return RegimeConstants{Regime::Doubling, 0.5};
    if (c.p == 1.0)
        throw PEqualsOneError(
            "p = 1 is not covered: neither scaling regime yields a contraction (L would be 1)");
    if (c.p < 1.0) return RegimeConstants{Regime::Doubling, std::exp2(c.p - 1.0)};
    if (c.alpha > 0.0)
        throw AlphaNotAllowedError(
            "p > 1 requires alpha = 0: a constant term breaks the halving-regime "
            "admissibility limit");
    return RegimeConstants{Regime::Halving, std::exp2(1.0 - c.p)};
}

AdmissibilityReport check_admissibility(const ControlFunction& c, const SampleGrid& grid,
                                        int depth) {
    if (depth < 1) throw ValidationError("check_admissibility: depth must be >= 1");

    AdmissibilityReport rep;
    if (c.family == ControlFunction::Family::Constant || c.p < 1.0) {
        rep.regime = Regime::Doubling;
        rep.L = c.family == ControlFunction::Family::Constant ? 0.5 : std::exp2(c.p - 1.0);
    } else if (c.p == 1.0) {
        throw PEqualsOneError("p = 1 is not covered: no contraction regime exists");
    } else {
        rep.regime = Regime::Halving;
        rep.L = std::exp2(1.0 - c.p);
    }

    // Tuples: sliding windows over the canonical points of a bounded window,
    // so the five slots stay at O(1) magnitudes while n does the scaling.
    const std::vector<GridPoint> pts = grid.window_points(2);
    rep.max_ratio.assign(static_cast<size_t>(depth), 0.0);
    for (int n = 1; n <= depth; ++n) {
        const int s = rep.regime == Regime::Doubling ? n : -n;
        const double weight =
            rep.regime == Regime::Doubling ? std::exp2(-n) : std::exp2(n);
        double worst = 0.0;
        for (size_t i = 0; i + 4 < pts.size(); i += 5) {
            double norms[5];
            for (int j = 0; j < 5; ++j)
                norms[j] = std::ldexp(module_norm(pts[i + static_cast<size_t>(j)].x), s);
            worst = std::max(worst, weight * phi_from_norms(c, norms));
        }
        rep.max_ratio[static_cast<size_t>(n - 1)] = worst;
    }

    // psi scaling: psi(x) <= 2 L psi(x/2) (doubling) or psi(x) <= L/2 psi(2x).
    double min_slack = std::numeric_limits<double>::infinity();
    for (const GridPoint& gp : grid.all_points()) {
        const double nx = module_norm(gp.x);
        const double lhs = eval_psi_norm(c, nx);
        const double rhs = rep.regime == Regime::Doubling
                               ? 2.0 * rep.L * eval_psi_norm(c, nx / 2.0)
                               : 0.5 * rep.L * eval_psi_norm(c, 2.0 * nx);
        min_slack = std::min(min_slack, rhs - lhs);
    }
    rep.psi_min_slack = min_slack;
    rep.psi_scaling_ok = min_slack >= -1e-12;
    rep.ratios_decay = rep.max_ratio.back() <= rep.max_ratio.front() + 1e-12;
    rep.admissible = rep.psi_scaling_ok && rep.ratios_decay;
    return rep;
}

double conclusion_bound_norm(const ControlFunction& c, double norm_x) {
    const RegimeConstants rc = regime_constants(c);
    const double psi = eval_psi_norm(c, norm_x);
    const double generic =
        (rc.regime == Regime::Doubling ? rc.L / (1.0 - rc.L) : 1.0 / (1.0 - rc.L)) * psi;

    if (c.family == ControlFunction::Family::Rassias) {
        const double t = pow_norm(norm_x, c.p);
        const double closed_form =
            rc.regime == Regime::Doubling
                ? (c.alpha + c.beta * std::exp2(1.0 - c.p) * t +
                   c.gamma * std::exp2(-c.p) * t) /
                      (std::exp2(1.0 - c.p) - 1.0)
                : (c.beta + c.gamma / 2.0) * t / (std::exp2(c.p - 1.0) - 1.0);
        if (std::abs(generic - closed_form) > 1e-12 * (1.0 + std::abs(generic)))
            throw Error("conclusion_bound: generic and closed forms disagree");
    }
    return generic;
}

double conclusion_bound(const ControlFunction& c, const ModuleElement& x) {
    return conclusion_bound_norm(c, module_norm(x));
}

GavrutaSum gavruta_tilde(const ControlFunction& c, const ModuleElement& x,
                         const ModuleElement& y, int terms) {
    if (terms < 1) throw ValidationError("gavruta_tilde: terms must be >= 1");
    const double nx = module_norm(x);
    const double ny = module_norm(y);

    GavrutaSum out;
    for (int n = 0; n < terms; ++n) {
        const double norms[5] = {std::ldexp(nx, n), std::ldexp(ny, n), 0.0, 0.0, 0.0};
        out.partial += 0.5 * std::exp2(-n) * phi_from_norms(c, norms);
    }

    // Geometric tail in the doubling regime: the alpha part decays like 2^-n,
    // the norm part like 2^(n(p-1)).
    const bool doubling =
        c.family == ControlFunction::Family::Constant || c.p < 1.0;
    if (doubling) {
        const double m = static_cast<double>(terms);
        const double alpha_tail = c.alpha * std::exp2(-m);
        double b = 0.0;
        if (c.family == ControlFunction::Family::Rassias) {
            double sum = 0.0, prod = 1.0;
            bool any = false;
            for (double t : {nx, ny}) {
                if (t > 0.0) {
                    any = true;
                    sum += pow_norm(t, c.p);
                    prod *= pow_norm(t, c.p / 2.0);
                }
            }
            b = c.beta * sum + (any ? c.gamma * prod : 0.0);
        }
        const double r = c.family == ControlFunction::Family::Rassias
                             ? std::exp2(c.p - 1.0)
                             : 0.5;
        const double b_tail = 0.5 * b * std::pow(r, m) / (1.0 - r);
        out.tail_bound = alpha_tail + b_tail;
    }
    out.value = out.partial + out.tail_bound;
    return out;
}

PsiFunction psi_function(const ControlFunction& c) {
    return PsiFunction{[c](const ModuleElement& x) { return eval_psi(c, x); }};
}

}  // namespace stablab
