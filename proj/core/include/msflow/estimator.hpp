#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "msflow/parallel.hpp"
#include "msflow/serial.hpp"
#include "msflow/synth.hpp"

namespace msflow {

enum class Method { single_level, serial, parallel };

Method parse_method(std::string_view name);
std::string_view to_string(Method method);

/// One flow estimator with everything needed to run it.
struct EstimatorConfig {
    Method method = Method::parallel;
    int levels = 3;        ///< serial/parallel level count
    int level = 0;         ///< pyramid level used by single_level
    double scale = 2.0;
    LKParams lk;
    /// Parallel only; its scale and level count must match the fields above.
    ConfidenceModel model;
    double weight_floor = 1e-6;
};

void validate(const EstimatorConfig& config);

/// Level-0 flow field for a frame pair.
FlowField estimate_flow(const EstimatorConfig& config, const Frame& prev, const Frame& next,
                        const FlowOptions& options = {});

/// Maps a rendered stimulus to an object-speed estimate (nullopt: no estimate).
using SpeedEstimator = std::function<std::optional<Vec2>(const SynthSpec&, const FrameSequence&)>;

/// Mean flow over the frame-0 object mask, estimating only around the object.
SpeedEstimator make_speed_estimator(const EstimatorConfig& config);

/// Returns the stimulus velocity itself.
SpeedEstimator ground_truth_estimator();

}  // namespace msflow
