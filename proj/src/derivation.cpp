#include "stablab/derivation.hpp"

#include <cassert>
#include <cmath>
#include <limits>

#include "stablab/errors.hpp"
#include "stablab/rng.hpp"

namespace stablab {

DerivationSpec DerivationSpec::skew_matrix(const CMatrix& d, int n) {
    if (d.dim() != n)
        throw ActionShapeMismatchError("DerivationSpec: matrix dimension must match the space");
    if ((d + d.adjoint()).max_abs() > 1e-12)
        throw ValidationError("DerivationSpec: matrix is not skew-adjoint within 1e-12");
    return DerivationSpec(Kind::SkewMatrix, ModuleSpace::vectors(n), d);
}

DerivationSpec DerivationSpec::inner_commutator(const CMatrix& u0) {
    if ((u0 + u0.adjoint()).max_abs() > 1e-12)
        throw ValidationError("DerivationSpec: u0 is not skew-adjoint within 1e-12");
    return DerivationSpec(Kind::InnerCommutator, ModuleSpace::algebra(u0.dim()), u0);
}

ModuleElement DerivationSpec::apply(const ModuleElement& x) const {
    if (x.space() != space_)
        throw SpaceMismatchError("DerivationSpec::apply: element from a different space");
    if (kind_ == Kind::SkewMatrix) {
        const int n = space_.dim();
        std::vector<Complex> out(static_cast<size_t>(n));
        for (int r = 0; r < n; ++r) {
            Complex s(0.0, 0.0);
            for (int c = 0; c < n; ++c) s += op_.at(r, c) * x.entry(c);
            out[static_cast<size_t>(r)] = s;
        }
        return ModuleElement(space_, std::move(out));
    }
    const CMatrix v = x.as_matrix();
    return ModuleElement::from_matrix(space_, op_ * v - v * op_);
}

PerturbationSpec PerturbationSpec::none(const ModuleSpace& space) {
    return PerturbationSpec(Kind::None, space, 0.0, 0.0, 0.0, std::nullopt);
}

namespace {

ModuleElement normalized_direction(ModuleElement e) {
    const double n = module_norm(e);
    if (n == 0.0)
        throw ValidationError("PerturbationSpec: direction must be nonzero");
    ModuleElement unit = Complex(1.0 / n, 0.0) * e;
    assert(std::abs(module_norm(unit) - 1.0) <= 1e-12);
    return unit;
}

}  // namespace

PerturbationSpec PerturbationSpec::power_law(double eps, double p, ModuleElement direction) {
    if (!(eps >= 0.0) || !(p >= 0.0))
        throw ValidationError("PerturbationSpec: eps and p must be >= 0");
    const ModuleSpace space = direction.space();
    return PerturbationSpec(Kind::PowerLaw, space, eps, p, 0.0,
                            normalized_direction(std::move(direction)));
}

PerturbationSpec PerturbationSpec::compact_support(double eps, double radius,
                                                   ModuleElement direction) {
    if (!(eps >= 0.0)) throw ValidationError("PerturbationSpec: eps must be >= 0");
    if (!(radius > 0.0)) throw ValidationError("PerturbationSpec: radius must be > 0");
    const ModuleSpace space = direction.space();
    return PerturbationSpec(Kind::CompactSupport, space, eps, 0.0, radius,
                            normalized_direction(std::move(direction)));
}

ModuleElement PerturbationSpec::apply(const ModuleElement& x) const {
    if (x.space() != space_)
        throw SpaceMismatchError("PerturbationSpec::apply: element from a different space");
    if (kind_ == Kind::None || x.is_zero()) return ModuleElement::zero(space_);
    const double nx = module_norm(x);
    double amp = 0.0;
    if (kind_ == Kind::PowerLaw) {
        amp = eps_ * (nx == 0.0 ? (p_ == 0.0 ? 1.0 : 0.0) : std::pow(nx, p_));
    } else {
        amp = eps_ * std::max(0.0, 1.0 - nx / radius_);
    }
    return Complex(amp, 0.0) * (*direction_);
}

MapUnderTest::MapUnderTest(DerivationSpec d, PerturbationSpec g)
    : base(std::move(d)), perturbation(std::move(g)) {
    if (base.space() != perturbation.space())
        throw SpaceMismatchError("MapUnderTest: derivation and perturbation spaces differ");
}

ModuleElement MapUnderTest::eval(const ModuleElement& x) const {
    return base.apply(x) + perturbation.apply(x);
}

double derivation_residual(const DerivationSpec& d, const ModuleElement& x,
                           const ModuleElement& y, const ModuleElement& z) {
    const CMatrix ip = inner_product(x, y);
    const ModuleElement lhs = d.apply(module_action(ip, z));
    const ModuleElement rhs = module_action(inner_product(d.apply(x), y), z) +
                              module_action(inner_product(x, d.apply(y)), z) +
                              module_action(ip, d.apply(z));
    return module_norm(lhs - rhs);
}

double full_defect(const MapUnderTest& f, Complex mu, const ModuleElement& x,
                   const ModuleElement& y, const ModuleElement& u, const ModuleElement& v,
                   const ModuleElement& w) {
    if (std::abs(std::abs(mu) - 1.0) > 1e-12)
        throw NotUnimodularError("full_defect: mu must lie on the unit circle");

    const CMatrix ip_uv = inner_product(u, v);
    const ModuleElement expr = f.eval(combine(mu, x, y)) - mu * f.eval(x) - f.eval(y) +
                               f.eval(module_action(ip_uv, w)) -
                               module_action(inner_product(f.eval(u), v), w) -
                               module_action(inner_product(u, f.eval(v)), w) -
                               module_action(ip_uv, f.eval(w));
    return module_norm(expr);
}

std::vector<Complex> unimodular_panel() {
    std::vector<Complex> panel;
    panel.reserve(20);
    constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
    for (int k = 0; k < 16; ++k) {
        const double t = kTwoPi * k / 16.0;
        panel.emplace_back(std::cos(t), std::sin(t));
    }
    panel.emplace_back(1.0, 0.0);
    panel.emplace_back(-1.0, 0.0);
    panel.emplace_back(0.0, 1.0);
    panel.emplace_back(0.0, -1.0);
    return panel;
}

DefectEnvelope defect_envelope(const MapUnderTest& f, const SampleGrid& grid,
                               const ControlFunction& c, const EnvelopeOptions& opts) {
    if (grid.space() != f.space())
        throw SpaceMismatchError("defect_envelope: grid belongs to a different space");

    const std::vector<GridPoint> all = grid.all_points();
    std::vector<const ModuleElement*> capped;
    capped.push_back(&all.front().x);  // zero
    for (const GridPoint& gp : all)
        if (!gp.is_zero && module_norm(gp.x) <= opts.derivation_norm_cap)
            capped.push_back(&gp.x);

    const std::vector<Complex> panel = unimodular_panel();
    Sampler rng(grid.seed() ^ 0xd1b54a32d192ed03ULL);

    DefectEnvelope env;
    env.tuple_count = opts.tuples;
    env.derivation_norm_cap = opts.derivation_norm_cap;
    env.min_margin = std::numeric_limits<double>::infinity();
    env.rows.reserve(static_cast<size_t>(opts.tuples) + 2);

    auto pick_any = [&]() -> const ModuleElement& {
        return all[static_cast<size_t>(rng.next_u64() % all.size())].x;
    };
    auto pick_capped = [&]() -> const ModuleElement& {
        return *capped[static_cast<size_t>(rng.next_u64() % capped.size())];
    };

    auto add_row = [&](const ModuleElement& x, const ModuleElement& y, const ModuleElement& u,
                       const ModuleElement& v, const ModuleElement& w) {
        EnvelopeRow row;
        row.norm_x = module_norm(x);
        row.norm_y = module_norm(y);
        row.norm_u = module_norm(u);
        row.norm_v = module_norm(v);
        row.norm_w = module_norm(w);
        row.phi = eval_phi(c, x, y, u, v, w);
        row.defect = -1.0;
        for (const Complex& mu : panel) {
            const double d = full_defect(f, mu, x, y, u, v, w);
            if (d > row.defect) {
                row.defect = d;
                row.mu = mu;
            }
        }
        row.margin = row.phi - row.defect;
        env.min_margin = std::min(env.min_margin, row.margin);
        if (row.margin < -1e-10) ++env.violation_count;
        env.rows.push_back(row);
    };

    // Deterministic anchors: the all-zero tuple and a doubling-slice tuple.
    {
        const ModuleElement z = ModuleElement::zero(grid.space());
        add_row(z, z, z, z, z);
        const ModuleElement& b = grid.base_points().front();
        add_row(b, b, z, z, z);
    }
    for (int t = 0; t < opts.tuples; ++t) {
        const ModuleElement& x = pick_any();
        const ModuleElement& y = pick_any();
        const ModuleElement& u = pick_capped();
        const ModuleElement& v = pick_capped();
        const ModuleElement& w = pick_capped();
        add_row(x, y, u, v, w);
    }
    return env;
}

WitnessResult non_adjointable_witness(int k) {
    if (k < 2) throw ValidationError("non_adjointable_witness: k must be >= 2");
    const ModuleSpace space = ModuleSpace::algebra(k);
    CMatrix u0 = CMatrix::unit(k, 0, 0, Complex(0.0, 2.0));  // 2i * xi xi*, xi = e_1
    const DerivationSpec d = DerivationSpec::inner_commutator(u0);

    const ModuleElement v = ModuleElement::basis(space, 0, 1);
    const ModuleElement w = ModuleElement::basis(space, 1, 0);
    const CMatrix prod = v.as_matrix() * w.as_matrix();
    const ModuleElement d_of_prod = d.apply(ModuleElement::from_matrix(space, prod));
    const ModuleElement v_d_w =
        ModuleElement::from_matrix(space, v.as_matrix() * d.apply(w).as_matrix());
    return WitnessResult{u0, v, w, module_norm(d_of_prod - v_d_w)};
}

}  // namespace stablab
