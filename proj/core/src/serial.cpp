#include "msflow/serial.hpp"

#include <cassert>
#include <chrono>
#include <cmath>

namespace msflow {

void validate(const SerialParams& params) {
    if (params.levels < 1) throw DomainError("serial: level count must be >= 1");
    if (!(params.scale > 1.0)) throw DomainError("serial: scale factor must be > 1");
    validate(params.lk);
}

FlowField serial_flow(const Pyramid& prev, const Pyramid& next, const SerialParams& params,
                      const FlowOptions& options) {
    validate(params);
    if (prev.level_count() < params.levels || next.level_count() < params.levels) {
        throw DomainError("serial: pyramid has fewer levels than requested");
    }

    auto level_options = [&](int l) {
        LKOptions o;
        o.jobs = options.jobs;
        if (options.region) {
            const Frame& f = prev.level(l);
            o.region = region_at_level(*options.region, std::pow(params.scale, l), f.width(), f.height());
        }
        return o;
    };

    using clock = std::chrono::steady_clock;
    auto seconds_since = [](clock::time_point t0) {
        return std::chrono::duration<double>(clock::now() - t0).count();
    };
    if (options.timings != nullptr) *options.timings = LevelTimings{std::vector<double>(params.levels, 0.0), 0.0};

    const int top = params.levels - 1;
    auto t0 = clock::now();
    FlowField flow = lk_flow(prev.level(top), next.level(top), params.lk, level_options(top));
    if (options.timings != nullptr) options.timings->level_seconds[top] = seconds_since(t0);
    for (int l = top - 1; l >= 0; --l) {
        t0 = clock::now();
        const Frame& f = prev.level(l);
        const FlowField upsampled = upsample_flow(flow, params.scale, f.width(), f.height());
        const FlowField projected = scale_vectors(upsampled, params.scale);
#ifndef NDEBUG
        for (int y = 0; y < f.height(); ++y) {
            for (int x = 0; x < f.width(); ++x) {
                assert(projected.at(x, y) == params.scale * upsampled.at(x, y));
            }
        }
#endif
        if (options.timings != nullptr) options.timings->merge_seconds += seconds_since(t0);
        t0 = clock::now();
        LKOptions o = level_options(l);
        o.initial = &projected;
        flow = lk_flow(f, next.level(l), params.lk, o);
        if (options.timings != nullptr) options.timings->level_seconds[l] = seconds_since(t0);
    }
    return flow;
}

FlowField serial_flow(const Frame& prev, const Frame& next, const SerialParams& params, const FlowOptions& options) {
    validate(params);
    const Pyramid p = build_pyramid(prev, params.levels, params.scale, params.lk.window);
    const Pyramid n = build_pyramid(next, params.levels, params.scale, params.lk.window);
    return serial_flow(p, n, params, options);
}

std::optional<Vec2> serial_object_speed(const FrameSequence& seq, const Mask& mask, const SerialParams& params,
                                        const FlowOptions& options) {
    if (seq.size() < 2) throw DomainError("serial_object_speed: need at least two frames");
    return mean_object_speed(serial_flow(seq[0], seq[1], params, options), mask);
}

}  // namespace msflow
