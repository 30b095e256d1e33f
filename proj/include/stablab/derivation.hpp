#pragma once

#include <optional>
#include <vector>

#include "stablab/control.hpp"
#include "stablab/module_space.hpp"
#include "stablab/sample_grid.hpp"

namespace stablab {

/// An exact derivation: a skew-adjoint matrix acting on C^n, or the inner
/// commutator v -> u0 v - v u0 on M_k over itself.
class DerivationSpec {
public:
    enum class Kind { SkewMatrix, InnerCommutator };

    /// D acting on C^n; requires D of dimension n with ||D + D*|| <= 1e-12.
    static DerivationSpec skew_matrix(const CMatrix& d, int n);
    /// v -> u0 v - v u0 on M_k; requires u0 skew-adjoint within 1e-12.
    static DerivationSpec inner_commutator(const CMatrix& u0);

    Kind kind() const { return kind_; }
    const ModuleSpace& space() const { return space_; }
    const CMatrix& op() const { return op_; }

    ModuleElement apply(const ModuleElement& x) const;

private:
    DerivationSpec(Kind kind, ModuleSpace space, CMatrix op)
        : kind_(kind), space_(space), op_(std::move(op)) {}
    Kind kind_;
    ModuleSpace space_;
    CMatrix op_;
};

/// Additive perturbation g with g(0) = 0 pinned:
///   PowerLaw:       g(x) = eps ||x||^p e   (x != 0)
///   CompactSupport: g(x) = eps max(0, 1 - ||x||/R) e   (x != 0)
class PerturbationSpec {
public:
    enum class Kind { None, PowerLaw, CompactSupport };

    static PerturbationSpec none(const ModuleSpace& space);
    static PerturbationSpec power_law(double eps, double p, ModuleElement direction);
    static PerturbationSpec compact_support(double eps, double radius, ModuleElement direction);

    Kind kind() const { return kind_; }
    double eps() const { return eps_; }
    double exponent() const { return p_; }
    double radius() const { return radius_; }
    const ModuleSpace& space() const { return space_; }

    ModuleElement apply(const ModuleElement& x) const;

private:
    PerturbationSpec(Kind kind, ModuleSpace space, double eps, double p, double radius,
                     std::optional<ModuleElement> dir)
        : kind_(kind), space_(space), eps_(eps), p_(p), radius_(radius),
          direction_(std::move(dir)) {}
    Kind kind_;
    ModuleSpace space_;
    double eps_;
    double p_;
    double radius_;
    std::optional<ModuleElement> direction_;  // unit norm
};

/// The map the stability machinery works on: f = d + g.
struct MapUnderTest {
    DerivationSpec base;
    PerturbationSpec perturbation;

    MapUnderTest(DerivationSpec d, PerturbationSpec g);
    const ModuleSpace& space() const { return base.space(); }
    ModuleElement eval(const ModuleElement& x) const;
};

/// || d(<x,y>z) - <d(x),y>z - <x,d(y)>z - <x,y>d(z) ||.
double derivation_residual(const DerivationSpec& d, const ModuleElement& x,
                           const ModuleElement& y, const ModuleElement& z);

/// The combined defect
/// || f(mu x + y) - mu f(x) - f(y)
///    + f(<u,v>w) - <f(u),v>w - <u,f(v)>w - <u,v>f(w) ||,
/// evaluated as the single expression. Throws NotUnimodularError unless
/// ||mu| - 1| <= 1e-12.
double full_defect(const MapUnderTest& f, Complex mu, const ModuleElement& x,
                   const ModuleElement& y, const ModuleElement& u, const ModuleElement& v,
                   const ModuleElement& w);

/// 16 equally spaced unit-circle points plus {1, -1, i, -i}.
std::vector<Complex> unimodular_panel();

struct EnvelopeRow {
    double norm_x, norm_y, norm_u, norm_v, norm_w;
    Complex mu;      ///< the panel point with the worst defect for this tuple
    double defect;   ///< worst defect over the panel
    double phi;
    double margin;   ///< phi - defect
};

struct DefectEnvelope {
    std::vector<EnvelopeRow> rows;
    int violation_count = 0;   ///< rows with margin < -1e-10
    double min_margin = 0.0;
    int tuple_count = 0;
    double derivation_norm_cap = 0.0;
    bool ok() const { return violation_count == 0; }
};

struct EnvelopeOptions {
    int tuples = 160;
    /// The derivation slots u, v, w are sampled with norms at most this cap.
    /// The combined inequality cannot hold at unbounded derivation-slot norms
    /// for a nontrivial perturbation, so the hypothesis is validated on this
    /// bounded region; the limit's properties are certified independently.
    double derivation_norm_cap = 1.0;
};

/// Samples tuples from the grid (x, y over all points; u, v, w capped) and
/// records defect, phi, and margin for each; violations are data, not errors.
DefectEnvelope defect_envelope(const MapUnderTest& f, const SampleGrid& grid,
                               const ControlFunction& c, const EnvelopeOptions& opts = {});

struct WitnessResult {
    CMatrix u0;
    ModuleElement v;
    ModuleElement w;
    double residual;  ///< || d(vw) - v d(w) ||, positive: d is not a module map
};

/// The non-adjointable inner derivation: u0 = 2i xi xi* with xi = e_1 on M_k.
/// Returns v, w certifying that d(v) = u0 v - v u0 is not a module map.
WitnessResult non_adjointable_witness(int k);

}  // namespace stablab
