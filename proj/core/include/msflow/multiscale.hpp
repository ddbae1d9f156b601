#pragma once

#include <optional>
#include <vector>

#include "msflow/frame.hpp"

namespace msflow {

/// Wall-clock seconds spent per level and in the cross-level step
/// (projection for serial, fusion for parallel).
struct LevelTimings {
    std::vector<double> level_seconds;
    double merge_seconds = 0.0;
};

/// Execution options shared by the multi-scale estimators.
struct FlowOptions {
    /// Level-0 rectangle of interest. Each level estimates the matching
    /// coarse rectangle plus a small margin, so vectors inside `region` are
    /// identical to a full-frame run.
    std::optional<Rect> region;
    int jobs = 1;
    /// Filled when non-null.
    LevelTimings* timings = nullptr;
};

/// Maps a level-0 rectangle to a level whose pixels are `factor` level-0
/// pixels wide, padded by `margin` and clipped to width x height.
Rect region_at_level(const Rect& region, double factor, int width, int height, int margin = 4);

}  // namespace msflow
