#pragma once

#include <optional>

#include "msflow/lk.hpp"
#include "msflow/multiscale.hpp"
#include "msflow/pyramid.hpp"

namespace msflow {

struct SerialParams {
    int levels = 3;
    double scale = 2.0;
    LKParams lk;
};

void validate(const SerialParams& params);

/// Coarse-to-fine flow: LK at the top level, then at each finer level the
/// estimate is upsampled, multiplied by the scale factor, used as the
/// starting point for LK (the window is sampled at the projected position),
/// and the residual is added. A level-0 pixel is valid only if every level
/// along its chain was valid.
FlowField serial_flow(const Pyramid& prev, const Pyramid& next, const SerialParams& params,
                      const FlowOptions& options = {});
FlowField serial_flow(const Frame& prev, const Frame& next, const SerialParams& params,
                      const FlowOptions& options = {});

/// Mean serial flow over `mask` between the first two frames.
std::optional<Vec2> serial_object_speed(const FrameSequence& seq, const Mask& mask, const SerialParams& params,
                                        const FlowOptions& options = {});

}  // namespace msflow
