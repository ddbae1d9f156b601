#include "msflow/estimator.hpp"

#include <cmath>

namespace msflow {

Method parse_method(std::string_view name) {
    if (name == "lk" || name == "single" || name == "single-level") return Method::single_level;
    if (name == "serial") return Method::serial;
    if (name == "parallel") return Method::parallel;
    throw DomainError("unknown method '" + std::string(name) + "' (expected lk, serial or parallel)");
}

std::string_view to_string(Method method) {
    switch (method) {
        case Method::single_level: return "lk";
        case Method::serial: return "serial";
        case Method::parallel: return "parallel";
    }
    return "?";
}

void validate(const EstimatorConfig& config) {
    validate(config.lk);
    if (config.levels < 1) throw DomainError("level count must be >= 1");
    if (!(config.scale > 1.0)) throw DomainError("scale factor must be > 1");
    if (config.level < 0) throw DomainError("single-level index must be >= 0");
    if (config.method == Method::parallel) {
        validate(config.model);
        if (config.model.levels != config.levels || std::abs(config.model.scale - config.scale) > 1e-12) {
            throw DomainError("confidence model (c, L) does not match the estimator (c, L)");
        }
    }
}

FlowField estimate_flow(const EstimatorConfig& config, const Frame& prev, const Frame& next,
                        const FlowOptions& options) {
    validate(config);
    switch (config.method) {
        case Method::single_level: {
            const Pyramid p = build_pyramid(prev, config.level + 1, config.scale, config.lk.window);
            const Pyramid n = build_pyramid(next, config.level + 1, config.scale, config.lk.window);
            return level_flow(p, n, config.level, config.lk, options);
        }
        case Method::serial:
            return serial_flow(prev, next, SerialParams{config.levels, config.scale, config.lk}, options);
        case Method::parallel:
            return parallel_flow(prev, next, ParallelParams{config.model, config.lk, config.weight_floor}, options);
    }
    throw DomainError("unknown method");
}

SpeedEstimator make_speed_estimator(const EstimatorConfig& config) {
    validate(config);
    return [config](const SynthSpec& spec, const FrameSequence& seq) -> std::optional<Vec2> {
        if (seq.size() < 2) throw DomainError("speed estimation needs two frames");
        const Mask mask = object_mask(spec, 0);
        FlowOptions options;
        options.region = mask.bounds();
        return mean_object_speed(estimate_flow(config, seq[0], seq[1], options), mask);
    };
}

SpeedEstimator ground_truth_estimator() {
    return [](const SynthSpec& spec, const FrameSequence&) -> std::optional<Vec2> { return spec.velocity; };
}

}  // namespace msflow
