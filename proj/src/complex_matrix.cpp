#include "stablab/complex_matrix.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "stablab/errors.hpp"

namespace stablab {

CMatrix::CMatrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim, Complex(0.0, 0.0)) {
    assert(dim >= 1);
}

CMatrix::CMatrix(int dim, std::vector<Complex> entries) : dim_(dim), a_(std::move(entries)) {
    assert(dim >= 1);
    assert(a_.size() == static_cast<size_t>(dim) * dim);
}

CMatrix CMatrix::zero(int dim) { return CMatrix(dim); }

CMatrix CMatrix::identity(int dim) {
    CMatrix m(dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = Complex(1.0, 0.0);
    return m;
}

CMatrix CMatrix::unit(int dim, int r, int c, Complex v) {
    CMatrix m(dim);
    m.at(r, c) = v;
    return m;
}

CMatrix CMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
    const int k = static_cast<int>(rows.size());
    CMatrix m(k);
    int r = 0;
    for (const auto& row : rows) {
        assert(static_cast<int>(row.size()) == k);
        int c = 0;
        for (const auto& v : row) m.at(r, c++) = v;
        ++r;
    }
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix m(dim_);
    for (int r = 0; r < dim_; ++r)
        for (int c = 0; c < dim_; ++c) m.at(c, r) = std::conj(at(r, c));
    return m;
}

Complex CMatrix::trace() const {
    Complex t(0.0, 0.0);
    for (int i = 0; i < dim_; ++i) t += at(i, i);
    return t;
}

double CMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& v : a_) m = std::max(m, std::abs(v));
    return m;
}

double CMatrix::frobenius() const {
    double s = 0.0;
    for (const auto& v : a_) s += std::norm(v);
    return std::sqrt(s);
}

bool CMatrix::all_finite() const {
    for (const auto& v : a_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

CMatrix operator+(const CMatrix& a, const CMatrix& b) {
    assert(a.dim_ == b.dim_);
    CMatrix m(a.dim_);
    for (size_t i = 0; i < m.a_.size(); ++i) m.a_[i] = a.a_[i] + b.a_[i];
    return m;
}

CMatrix operator-(const CMatrix& a, const CMatrix& b) {
    assert(a.dim_ == b.dim_);
    CMatrix m(a.dim_);
    for (size_t i = 0; i < m.a_.size(); ++i) m.a_[i] = a.a_[i] - b.a_[i];
    return m;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    assert(a.dim_ == b.dim_);
    const int k = a.dim_;
    CMatrix m(k);
    for (int r = 0; r < k; ++r) {
        for (int c = 0; c < k; ++c) {
            Complex s(0.0, 0.0);
            for (int j = 0; j < k; ++j) s += a.at(r, j) * b.at(j, c);
            m.at(r, c) = s;
        }
    }
    return m;
}

CMatrix operator*(Complex s, const CMatrix& a) {
    CMatrix m(a.dim_);
    for (size_t i = 0; i < m.a_.size(); ++i) m.a_[i] = s * a.a_[i];
    return m;
}

double hermitian_distance(const CMatrix& a) {
    double m = 0.0;
    for (int r = 0; r < a.dim(); ++r)
        for (int c = 0; c < a.dim(); ++c)
            m = std::max(m, std::abs(a.at(r, c) - std::conj(a.at(c, r))));
    return m;
}

namespace detail {

namespace {

double off_diagonal_frobenius(const CMatrix& h) {
    double s = 0.0;
    for (int r = 0; r < h.dim(); ++r)
        for (int c = 0; c < h.dim(); ++c)
            if (r != c) s += std::norm(h.at(r, c));
    return std::sqrt(s);
}

}  // namespace

std::vector<double> jacobi_eigenvalues(const CMatrix& a) {
    const int k = a.dim();
    // Work on the exact Hermitian part so the rotations stay consistent.
    CMatrix h(k);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c)
            h.at(r, c) = 0.5 * (a.at(r, c) + std::conj(a.at(c, r)));

    constexpr double kOffTol = 1e-13;
    constexpr int kMaxSweeps = 100;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (off_diagonal_frobenius(h) < kOffTol) break;
        for (int p = 0; p < k - 1; ++p) {
            for (int q = p + 1; q < k; ++q) {
                const Complex b = h.at(p, q);
                const double absb = std::abs(b);
                if (absb == 0.0) continue;
                const Complex phase = b / absb;
                const double app = h.at(p, p).real();
                const double aqq = h.at(q, q).real();
                const double tau = (app - aqq) / (2.0 * absb);
                const double sign = tau >= 0.0 ? 1.0 : -1.0;
                // Smaller-magnitude root of t^2 - 2 tau t - 1 = 0.
                const double t = -sign / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const Complex s = (t * c) * phase;

                // Right-multiply by the rotation (columns p, q).
                for (int r = 0; r < k; ++r) {
                    const Complex hp = h.at(r, p);
                    const Complex hq = h.at(r, q);
                    h.at(r, p) = hp * c - hq * std::conj(s);
                    h.at(r, q) = hp * s + hq * c;
                }
                // Left-multiply by its adjoint (rows p, q).
                for (int j = 0; j < k; ++j) {
                    const Complex hp = h.at(p, j);
                    const Complex hq = h.at(q, j);
                    h.at(p, j) = c * hp - s * hq;
                    h.at(q, j) = std::conj(s) * hp + c * hq;
                }
            }
        }
    }

    std::vector<double> eig(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) eig[static_cast<size_t>(i)] = h.at(i, i).real();
    std::sort(eig.begin(), eig.end());
    return eig;
}

}  // namespace detail

std::vector<double> hermitian_eigenvalues(const CMatrix& a) {
    if (hermitian_distance(a) > 1e-12)
        throw NotHermitianError("hermitian_eigenvalues: matrix is not Hermitian within 1e-12");
    return detail::jacobi_eigenvalues(a);
}

double operator_norm(const CMatrix& a) {
    const CMatrix gram = a.adjoint() * a;
    const std::vector<double> eig = detail::jacobi_eigenvalues(gram);
    const double top = eig.empty() ? 0.0 : eig.back();
    return std::sqrt(std::max(0.0, top));
}

bool is_positive(const CMatrix& a, double tol) {
    if (hermitian_distance(a) > tol) return false;
    const std::vector<double> eig = detail::jacobi_eigenvalues(a);
    return eig.front() >= -tol;
}

}  // namespace stablab
