#pragma once

#include <functional>
#include <vector>

#include "stablab/module_space.hpp"
#include "stablab/sample_grid.hpp"

namespace stablab {

enum class Regime {
    Doubling,  ///< iterate f(2^n x)/2^n; p < 1
    Halving,   ///< iterate 2^n f(2^-n x); p > 1
};

const char* regime_name(Regime r);

/// Admissible control family. The Rassias family is
///   phi(x,y,u,v,w) = alpha + beta * sum ||.||^p + gamma * prod ||.||^(p/2),
/// where slots holding the zero element drop out: they contribute nothing to
/// the beta sum and are skipped in the gamma product (a term with no nonzero
/// slot is zero). Under this convention phi(x/2, x/2, 0, 0, 0) reproduces the
/// closed form of psi exactly at every nonzero x.
struct ControlFunction {
    enum class Family { Rassias, Constant };

    Family family = Family::Constant;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double p = 0.0;

    static ControlFunction rassias(double alpha, double beta, double gamma, double p);
    static ControlFunction constant(double alpha);
};

double eval_phi(const ControlFunction& c, const ModuleElement& x, const ModuleElement& y,
                const ModuleElement& u, const ModuleElement& v, const ModuleElement& w);

/// psi(x) = phi(x/2, x/2, 0, 0, 0). For the Rassias family this is the closed
/// form alpha + (2^(1-p) beta + 2^-p gamma) ||x||^p, with 0^0 := 1 so that
/// p = 0 keeps the constant bound at x = 0.
double eval_psi(const ControlFunction& c, const ModuleElement& x);
/// Same, in terms of the norm alone.
double eval_psi_norm(const ControlFunction& c, double norm_x);

struct RegimeConstants {
    Regime regime;
    double L;  ///< strict contraction constant, in [0, 1)
};

/// p < 1: (Doubling, 2^(p-1)). p > 1 with alpha = 0: (Halving, 2^(1-p)).
/// Throws PEqualsOneError at p = 1 and AlphaNotAllowedError for p > 1 with a
/// constant term. The constant family maps to (Doubling, 1/2).
RegimeConstants regime_constants(const ControlFunction& c);

struct AdmissibilityReport {
    Regime regime;
    double L = 0.0;
    std::vector<double> max_ratio;  ///< scaled-sequence max over tuples, n = 1..depth
    double psi_min_slack = 0.0;     ///< min over grid of the psi-scaling slack
    bool psi_scaling_ok = false;
    bool ratios_decay = false;
    bool admissible = false;
};

/// Empirically evaluates the scaled limit condition and the psi-scaling
/// inequality at grid resolution. Derives the regime from p alone so that
/// inadmissible configurations can be measured rather than rejected.
AdmissibilityReport check_admissibility(const ControlFunction& c, const SampleGrid& grid,
                                        int depth);

/// Pointwise stability bound: L/(1-L) psi(x) in the doubling regime,
/// 1/(1-L) psi(x) in the halving regime. For the Rassias family the value is
/// cross-checked against the equivalent closed power-law form before
/// returning.
double conclusion_bound(const ControlFunction& c, const ModuleElement& x);
double conclusion_bound_norm(const ControlFunction& c, double norm_x);

struct GavrutaSum {
    double partial = 0.0;     ///< sum of the first `terms` terms
    double tail_bound = 0.0;  ///< geometric tail bound (doubling regime only)
    double value = 0.0;       ///< partial + tail_bound
};

/// Partial sum of (1/2) sum_n 2^-n phi(2^n x, 2^n y) with phi restricted to
/// its first two slots.
GavrutaSum gavruta_tilde(const ControlFunction& c, const ModuleElement& x,
                         const ModuleElement& y, int terms);

/// psi as a standalone evaluable, the shape the generalized distance expects.
struct PsiFunction {
    std::function<double(const ModuleElement&)> fn;
    double operator()(const ModuleElement& x) const { return fn(x); }
};

PsiFunction psi_function(const ControlFunction& c);

}  // namespace stablab
