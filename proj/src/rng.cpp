#include "stablab/rng.hpp"

#include "stablab/errors.hpp"

namespace stablab {

Complex Sampler::unit_disc() {
    for (;;) {
        const double re = uniform(-1.0, 1.0);
        const double im = uniform(-1.0, 1.0);
        if (re * re + im * im <= 1.0) return Complex(re, im);
    }
}

Complex Sampler::gaussian_like() {
    double re = 0.0, im = 0.0;
    for (int i = 0; i < 12; ++i) re += uniform01();
    for (int i = 0; i < 12; ++i) im += uniform01();
    return Complex(re - 6.0, im - 6.0);
}

Complex Sampler::unimodular() {
    const double t = uniform01() * 2.0 * 3.14159265358979323846;
    return Complex(std::cos(t), std::sin(t));
}

CMatrix Sampler::random_matrix(int k) {
    CMatrix m(k);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) m.at(r, c) = unit_disc();
    return m;
}

CMatrix Sampler::random_skew(int k) {
    CMatrix a(k);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) a.at(r, c) = gaussian_like();
    return Complex(0.5, 0.0) * (a - a.adjoint());
}

ModuleElement Sampler::raw_element(const ModuleSpace& space) {
    std::vector<Complex> v(static_cast<size_t>(space.payload_size()));
    for (auto& e : v) e = unit_disc();
    return ModuleElement(space, std::move(v));
}

ModuleElement Sampler::element_with_norm(const ModuleSpace& space, double target_norm) {
    for (;;) {
        ModuleElement e = raw_element(space);
        const double n = module_norm(e);
        if (n > 1e-6) return Complex(target_norm / n, 0.0) * e;
    }
}

}  // namespace stablab
