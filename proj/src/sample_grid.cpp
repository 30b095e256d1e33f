#include "stablab/sample_grid.hpp"

#include "stablab/errors.hpp"
#include "stablab/rng.hpp"

namespace stablab {

SampleGrid SampleGrid::make(const ModuleSpace& space, int base_count, int scale_depth,
                            std::uint64_t seed) {
    if (base_count < 1) throw ValidationError("SampleGrid: base_count must be >= 1");
    if (scale_depth < 1) throw ValidationError("SampleGrid: scale_depth must be >= 1");

    // Norms rotate through {0.25, 1, 4} so the base layer spans the dyadic
    // scales the scaling operators move through.
    static constexpr double kNorms[3] = {0.25, 1.0, 4.0};
    Sampler rng(seed);
    std::vector<ModuleElement> base;
    base.reserve(static_cast<size_t>(base_count));
    for (int i = 0; i < base_count; ++i)
        base.push_back(rng.element_with_norm(space, kNorms[i % 3]));
    return SampleGrid(space, std::move(base), scale_depth, seed);
}

std::vector<GridPoint> SampleGrid::all_points() const { return window_points(depth_); }

std::vector<GridPoint> SampleGrid::window_points(int window) const {
    if (window > depth_) window = depth_;
    std::vector<GridPoint> pts;
    pts.reserve(1 + base_.size() * (2 * static_cast<size_t>(window) + 1));
    pts.push_back(GridPoint{ModuleElement::zero(space_), -1, 0, true});
    for (int b = 0; b < static_cast<int>(base_.size()); ++b)
        for (int k = -window; k <= window; ++k)
            pts.push_back(GridPoint{point(b, k), b, k, false});
    return pts;
}

bool SampleGrid::compatible(const SampleGrid& o) const {
    if (space_ != o.space_ || depth_ != o.depth_ || base_.size() != o.base_.size())
        return false;
    for (size_t i = 0; i < base_.size(); ++i) {
        const auto& a = base_[i].entries();
        const auto& b = o.base_[i].entries();
        if (a != b) return false;
    }
    return true;
}

}  // namespace stablab
