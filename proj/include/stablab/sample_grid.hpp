#pragma once

#include <cstdint>
#include <vector>

#include "stablab/module_space.hpp"

namespace stablab {

/// A grid point: 2^scale * base_points[base], or the zero element.
struct GridPoint {
    ModuleElement x;
    int base;     ///< index into base_points, -1 for the zero point
    int scale;    ///< dyadic exponent, 0 for the zero point
    bool is_zero;
};

/// Finite stand-in for the module-wide quantifiers: dyadic orbits
/// {2^k b : k in [-N, N]} of seeded nonzero base points, plus zero.
/// Scaling acts by exact exponent shifts, so doubling and halving never
/// leave the represented set until the depth is exhausted.
class SampleGrid {
public:
    static SampleGrid make(const ModuleSpace& space, int base_count, int scale_depth,
                           std::uint64_t seed);

    const ModuleSpace& space() const { return space_; }
    const std::vector<ModuleElement>& base_points() const { return base_; }
    int scale_depth() const { return depth_; }
    std::uint64_t seed() const { return seed_; }

    /// 2^k * base_points[b]; exact.
    ModuleElement point(int b, int k) const { return base_[static_cast<size_t>(b)].scaled_pow2(k); }

    /// Canonical order: zero first, then base-major with ascending scale.
    std::vector<GridPoint> all_points() const;

    /// Grid points restricted to |scale| <= window (plus zero).
    std::vector<GridPoint> window_points(int window) const;

    bool compatible(const SampleGrid& o) const;

private:
    SampleGrid(ModuleSpace space, std::vector<ModuleElement> base, int depth, std::uint64_t seed)
        : space_(space), base_(std::move(base)), depth_(depth), seed_(seed) {}

    ModuleSpace space_;
    std::vector<ModuleElement> base_;
    int depth_;
    std::uint64_t seed_;
};

}  // namespace stablab
