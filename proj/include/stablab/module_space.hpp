#pragma once

#include <functional>
#include <string>
#include <vector>

#include "stablab/complex_matrix.hpp"

namespace stablab {

enum class SpaceKind {
    VectorOverScalars,  ///< C^n as a module over C
    AlgebraOverItself,  ///< M_k as a module over M_k, <a,b> = a b*
};

/// Descriptor of a concrete module instance. Immutable.
class ModuleSpace {
public:
    static ModuleSpace vectors(int n) { return ModuleSpace(SpaceKind::VectorOverScalars, n); }
    static ModuleSpace algebra(int k) { return ModuleSpace(SpaceKind::AlgebraOverItself, k); }

    SpaceKind kind() const { return kind_; }
    /// n for the vector kind, k for the algebra kind.
    int dim() const { return dim_; }
    /// Dimension of the coefficient algebra: 1 for C^n, k for M_k.
    int algebra_dim() const { return kind_ == SpaceKind::VectorOverScalars ? 1 : dim_; }
    /// Number of complex entries in an element payload.
    int payload_size() const {
        return kind_ == SpaceKind::VectorOverScalars ? dim_ : dim_ * dim_;
    }

    bool operator==(const ModuleSpace& o) const { return kind_ == o.kind_ && dim_ == o.dim_; }
    bool operator!=(const ModuleSpace& o) const { return !(*this == o); }

    std::string str() const;

private:
    ModuleSpace(SpaceKind kind, int dim) : kind_(kind), dim_(dim) {}
    SpaceKind kind_;
    int dim_;
};

/// Element of a module instance. Payload is a flat complex array: the n
/// vector components, or the k x k matrix entries row-major.
class ModuleElement {
public:
    ModuleElement(ModuleSpace space, std::vector<Complex> entries);

    static ModuleElement zero(const ModuleSpace& space);
    /// i-th standard basis vector (vector kind only).
    static ModuleElement basis(const ModuleSpace& space, int i);
    /// Matrix unit e_{rc} (algebra kind only).
    static ModuleElement basis(const ModuleSpace& space, int r, int c);
    static ModuleElement from_matrix(const ModuleSpace& space, const CMatrix& m);

    const ModuleSpace& space() const { return space_; }
    const std::vector<Complex>& entries() const { return a_; }
    Complex entry(int i) const { return a_[static_cast<size_t>(i)]; }

    /// View of the payload as a k x k matrix (algebra kind only).
    CMatrix as_matrix() const;

    double max_abs() const;
    bool is_zero() const { return max_abs() == 0.0; }

    /// Exact scaling by 2^k.
    ModuleElement scaled_pow2(int k) const;

    friend ModuleElement operator+(const ModuleElement& x, const ModuleElement& y);
    friend ModuleElement operator-(const ModuleElement& x, const ModuleElement& y);
    friend ModuleElement operator*(Complex s, const ModuleElement& x);

private:
    ModuleSpace space_;
    std::vector<Complex> a_;
};

/// lambda * x + y.
ModuleElement combine(Complex lambda, const ModuleElement& x, const ModuleElement& y);

/// The A-valued inner product, linear in the first slot:
/// vectors: [sum_i x_i conj(y_i)] as a 1x1 matrix; algebra: x * adjoint(y).
CMatrix inner_product(const ModuleElement& x, const ModuleElement& y);

/// ||x|| = operator_norm(<x,x>)^(1/2).
double module_norm(const ModuleElement& x);

/// Left action a . x. For the vector kind a must be 1x1 (scalar action).
ModuleElement module_action(const CMatrix& a, const ModuleElement& x);

/// Per-axiom maximum residuals over sampled tuples. Residuals are relative:
/// raw deviation divided by (1 + scale of the terms involved), so they stay
/// meaningful across the dyadic range of sample magnitudes.
struct AxiomReport {
    double positivity_residual = 0.0;
    double definiteness_residual = 0.0;
    double linearity_residual = 0.0;          ///< <lx+y,z> - l<x,z> - <y,z>
    double algebra_linearity_residual = 0.0;  ///< <ax,y> - a<x,y>
    double involution_residual = 0.0;         ///< <x,y>* - <y,x>
    int sample_count = 0;
    double tol = 0.0;

    double max_residual() const;
    bool pass() const { return max_residual() <= tol; }
};

class SampleGrid;  // defined in sample_grid.hpp

using InnerProductFn = std::function<CMatrix(const ModuleElement&, const ModuleElement&)>;

/// Evaluates the module axioms over seeded tuples drawn from the grid.
/// `custom_inner` substitutes the inner product under test (negative controls).
AxiomReport verify_axioms(const ModuleSpace& space, const SampleGrid& samples, double tol,
                          int tuple_count = 200, const InnerProductFn& custom_inner = {});

}  // namespace stablab
