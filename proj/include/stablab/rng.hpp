#pragma once

#include <cstdint>
#include <random>

#include "stablab/complex_matrix.hpp"
#include "stablab/module_space.hpp"

namespace stablab {

/// Deterministic sampler. All randomness in the project flows through this
/// class so that a seed pins every generated value bit for bit; the uniform
/// doubles are built from raw mt19937_64 words rather than the
/// implementation-defined std distributions.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : gen_(seed) {}

    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform on the closed unit disc (rejection sampling).
    Complex unit_disc();

    /// Gaussian-like component: sum of 12 uniforms minus 6, per part.
    Complex gaussian_like();

    /// Uniform on the unit circle.
    Complex unimodular();

    CMatrix random_matrix(int k);

    /// Skew-adjoint k x k matrix D = (A - A*)/2, A with gaussian-like entries.
    CMatrix random_skew(int k);

    /// Element with unit-disc entries, rescaled to the requested norm.
    ModuleElement element_with_norm(const ModuleSpace& space, double target_norm);

    /// Element with unit-disc entries (no normalization).
    ModuleElement raw_element(const ModuleSpace& space);

private:
    std::mt19937_64 gen_;
};

}  // namespace stablab
