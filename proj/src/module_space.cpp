#include "stablab/module_space.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "stablab/errors.hpp"
#include "stablab/rng.hpp"
#include "stablab/sample_grid.hpp"

namespace stablab {

std::string ModuleSpace::str() const {
    if (kind_ == SpaceKind::VectorOverScalars) return "C^" + std::to_string(dim_);
    return "M_" + std::to_string(dim_) + " over itself";
}

ModuleElement::ModuleElement(ModuleSpace space, std::vector<Complex> entries)
    : space_(space), a_(std::move(entries)) {
    if (static_cast<int>(a_.size()) != space_.payload_size())
        throw SpaceMismatchError("ModuleElement: payload shape does not match space " +
                                 space_.str());
}

ModuleElement ModuleElement::zero(const ModuleSpace& space) {
    return ModuleElement(space,
                         std::vector<Complex>(static_cast<size_t>(space.payload_size())));
}

ModuleElement ModuleElement::basis(const ModuleSpace& space, int i) {
    assert(space.kind() == SpaceKind::VectorOverScalars);
    ModuleElement e = zero(space);
    e.a_[static_cast<size_t>(i)] = Complex(1.0, 0.0);
    return e;
}

ModuleElement ModuleElement::basis(const ModuleSpace& space, int r, int c) {
    assert(space.kind() == SpaceKind::AlgebraOverItself);
    ModuleElement e = zero(space);
    e.a_[static_cast<size_t>(r) * space.dim() + c] = Complex(1.0, 0.0);
    return e;
}

ModuleElement ModuleElement::from_matrix(const ModuleSpace& space, const CMatrix& m) {
    assert(space.kind() == SpaceKind::AlgebraOverItself && m.dim() == space.dim());
    return ModuleElement(space, m.entries());
}

CMatrix ModuleElement::as_matrix() const {
    assert(space_.kind() == SpaceKind::AlgebraOverItself);
    return CMatrix(space_.dim(), a_);
}

double ModuleElement::max_abs() const {
    double m = 0.0;
    for (const auto& v : a_) m = std::max(m, std::abs(v));
    return m;
}

ModuleElement ModuleElement::scaled_pow2(int k) const {
    ModuleElement e = *this;
    for (auto& v : e.a_) v = Complex(std::ldexp(v.real(), k), std::ldexp(v.imag(), k));
    return e;
}

namespace {

void require_same_space(const ModuleElement& x, const ModuleElement& y, const char* who) {
    if (x.space() != y.space())
        throw SpaceMismatchError(std::string(who) + ": elements live in different spaces");
}

}  // namespace

ModuleElement operator+(const ModuleElement& x, const ModuleElement& y) {
    require_same_space(x, y, "operator+");
    std::vector<Complex> v(x.a_.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = x.a_[i] + y.a_[i];
    return ModuleElement(x.space_, std::move(v));
}

ModuleElement operator-(const ModuleElement& x, const ModuleElement& y) {
    require_same_space(x, y, "operator-");
    std::vector<Complex> v(x.a_.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = x.a_[i] - y.a_[i];
    return ModuleElement(x.space_, std::move(v));
}

ModuleElement operator*(Complex s, const ModuleElement& x) {
    std::vector<Complex> v(x.a_.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = s * x.a_[i];
    return ModuleElement(x.space_, std::move(v));
}

ModuleElement combine(Complex lambda, const ModuleElement& x, const ModuleElement& y) {
    require_same_space(x, y, "combine");
    return lambda * x + y;
}

CMatrix inner_product(const ModuleElement& x, const ModuleElement& y) {
    require_same_space(x, y, "inner_product");
    if (x.space().kind() == SpaceKind::VectorOverScalars) {
        Complex s(0.0, 0.0);
        for (int i = 0; i < x.space().dim(); ++i) s += x.entry(i) * std::conj(y.entry(i));
        CMatrix m(1);
        m.at(0, 0) = s;
        return m;
    }
    return x.as_matrix() * y.as_matrix().adjoint();
}

double module_norm(const ModuleElement& x) {
    return std::sqrt(operator_norm(inner_product(x, x)));
}

ModuleElement module_action(const CMatrix& a, const ModuleElement& x) {
    if (x.space().kind() == SpaceKind::VectorOverScalars) {
        if (a.dim() != 1)
            throw ActionShapeMismatchError(
                "module_action: C^n admits only the 1x1 scalar action");
        return a.at(0, 0) * x;
    }
    if (a.dim() != x.space().dim())
        throw ActionShapeMismatchError("module_action: algebra element has wrong dimension");
    return ModuleElement::from_matrix(x.space(), a * x.as_matrix());
}

double AxiomReport::max_residual() const {
    return std::max({positivity_residual, definiteness_residual, linearity_residual,
                     algebra_linearity_residual, involution_residual});
}

AxiomReport verify_axioms(const ModuleSpace& space, const SampleGrid& samples, double tol,
                          int tuple_count, const InnerProductFn& custom_inner) {
    if (samples.space() != space)
        throw SpaceMismatchError("verify_axioms: grid belongs to a different space");

    const InnerProductFn ip = custom_inner
                                  ? custom_inner
                                  : InnerProductFn([](const ModuleElement& a,
                                                      const ModuleElement& b) {
                                        return inner_product(a, b);
                                    });

    const std::vector<GridPoint> pts = samples.all_points();
    Sampler rng(samples.seed() ^ 0x9e3779b97f4a7c15ULL);

    AxiomReport rep;
    rep.tol = tol;
    rep.sample_count = tuple_count;

    auto pick = [&](void) -> const ModuleElement& {
        const size_t i = static_cast<size_t>(rng.next_u64() % pts.size());
        return pts[i].x;
    };

    // Definiteness at the exact zero element.
    {
        const ModuleElement z = ModuleElement::zero(space);
        rep.definiteness_residual =
            std::max(rep.definiteness_residual, std::sqrt(operator_norm(ip(z, z))));
    }

    for (int t = 0; t < tuple_count; ++t) {
        const ModuleElement& x = pick();
        const ModuleElement& y = pick();
        const ModuleElement& z = pick();
        const Complex lambda = 2.0 * rng.unit_disc();
        const CMatrix a = rng.random_matrix(space.algebra_dim());

        const double nx = module_norm(x);
        const double ny = module_norm(y);
        const double nz = module_norm(z);

        // (i) positivity of <x,x>.
        {
            const CMatrix g = ip(x, x);
            const double herm = hermitian_distance(g);
            const std::vector<double> eig = detail::jacobi_eigenvalues(g);
            const double neg = std::max(0.0, -eig.front());
            rep.positivity_residual = std::max(
                rep.positivity_residual, (herm + neg) / (1.0 + operator_norm(g)));
        }
        // (i) definiteness: tiny norm forces tiny payload and conversely.
        {
            const double n = std::sqrt(std::max(0.0, operator_norm(ip(x, x))));
            if (x.max_abs() == 0.0) {
                rep.definiteness_residual = std::max(rep.definiteness_residual, n);
            } else if (n <= 1e-14) {
                rep.definiteness_residual = std::max(rep.definiteness_residual, x.max_abs());
            }
        }
        // (ii) first-slot linearity: <lx+y,z> = l<x,z> + <y,z>.
        {
            const CMatrix lhs = ip(combine(lambda, x, y), z);
            const CMatrix rhs = lambda * ip(x, z) + ip(y, z);
            const double scale = (std::abs(lambda) * nx + ny) * nz;
            rep.linearity_residual = std::max(
                rep.linearity_residual, operator_norm(lhs - rhs) / (1.0 + scale));
        }
        // (iii) algebra linearity: <ax,y> = a<x,y>.
        {
            const CMatrix lhs = ip(module_action(a, x), y);
            const CMatrix rhs = a * ip(x, y);
            const double scale = operator_norm(a) * nx * ny;
            rep.algebra_linearity_residual = std::max(
                rep.algebra_linearity_residual, operator_norm(lhs - rhs) / (1.0 + scale));
        }
        // (iv) involution: <x,y>* = <y,x>.
        {
            const CMatrix lhs = ip(x, y).adjoint();
            const CMatrix rhs = ip(y, x);
            rep.involution_residual = std::max(
                rep.involution_residual, operator_norm(lhs - rhs) / (1.0 + nx * ny));
        }
    }
    return rep;
}

}  // namespace stablab
