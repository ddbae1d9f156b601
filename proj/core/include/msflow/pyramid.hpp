#pragma once

#include <vector>

#include "msflow/frame.hpp"

namespace msflow {

/// Gaussian multi-scale stack. Level 0 is the input frame; level l is level
/// l-1 smoothed and resampled by `scale`. Pixel x at level l sits at x*scale
/// in level l-1 coordinates.
class Pyramid {
public:
    Pyramid(std::vector<Frame> levels, double scale) : levels_(std::move(levels)), scale_(scale) {}

    [[nodiscard]] int level_count() const { return static_cast<int>(levels_.size()); }
    [[nodiscard]] double scale() const { return scale_; }
    [[nodiscard]] const Frame& level(int l) const { return levels_.at(static_cast<std::size_t>(l)); }
    [[nodiscard]] const std::vector<Frame>& levels() const { return levels_; }

private:
    std::vector<Frame> levels_;
    double scale_;
};

/// Normalized 1-D smoothing kernel for downsampling by `scale`:
/// std = 0.5*sqrt(scale^2 - 1), truncated at 2 std.
std::vector<double> pyramid_kernel(double scale);

/// Separable convolution with reflect-101 borders.
Frame smooth(const Frame& frame, const std::vector<double>& kernel);

/// Bilinear resampling to floor(size/scale), sampling the input at x*scale.
Frame downsample(const Frame& frame, double scale);

/// Builds `levels` levels. Throws DomainError naming the first level whose
/// width or height falls below `min_size` (normally the LK window diameter).
Pyramid build_pyramid(const Frame& frame, int levels, double scale, int min_size = 1);

}  // namespace msflow
