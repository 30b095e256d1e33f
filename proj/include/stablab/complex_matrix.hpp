#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

namespace stablab {

using Complex = std::complex<double>;

/// Square complex matrix, the working representation of an element of the
/// matrix algebra M_k. Row-major, value semantics, dimensions up to 16.
class CMatrix {
public:
    explicit CMatrix(int dim);
    CMatrix(int dim, std::vector<Complex> entries);

    static CMatrix zero(int dim);
    static CMatrix identity(int dim);
    /// Single nonzero entry e_{rc} = v.
    static CMatrix unit(int dim, int r, int c, Complex v = Complex(1.0, 0.0));
    static CMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

    int dim() const { return dim_; }
    const Complex& at(int r, int c) const { return a_[static_cast<size_t>(r) * dim_ + c]; }
    Complex& at(int r, int c) { return a_[static_cast<size_t>(r) * dim_ + c]; }
    const std::vector<Complex>& entries() const { return a_; }

    CMatrix adjoint() const;
    Complex trace() const;
    double max_abs() const;
    double frobenius() const;
    bool all_finite() const;

    friend CMatrix operator+(const CMatrix& a, const CMatrix& b);
    friend CMatrix operator-(const CMatrix& a, const CMatrix& b);
    friend CMatrix operator*(const CMatrix& a, const CMatrix& b);
    friend CMatrix operator*(Complex s, const CMatrix& a);

private:
    int dim_;
    std::vector<Complex> a_;
};

/// Max-entry distance of a from its adjoint; zero exactly for Hermitian input.
double hermitian_distance(const CMatrix& a);

/// All k eigenvalues of a Hermitian matrix, ascending. Cyclic Jacobi rotations
/// with row-major pivot order, sweeping until the off-diagonal Frobenius norm
/// falls below 1e-13 or 100 sweeps elapse.
/// Throws NotHermitianError when the max-entry distance from the adjoint
/// exceeds 1e-12.
std::vector<double> hermitian_eigenvalues(const CMatrix& a);

/// C*-norm: square root of the largest eigenvalue of adjoint(a) * a.
double operator_norm(const CMatrix& a);

/// True iff a is Hermitian within tol and its minimum eigenvalue is >= -tol.
bool is_positive(const CMatrix& a, double tol);

namespace detail {
/// Jacobi kernel on the Hermitian part of `a`; no Hermiticity check.
std::vector<double> jacobi_eigenvalues(const CMatrix& a);
}  // namespace detail

}  // namespace stablab
