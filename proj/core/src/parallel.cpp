#include "msflow/parallel.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "msflow/parallel_for.hpp"

namespace msflow {

void validate(const ConfidenceModel& model) {
    if (!std::isfinite(model.mu0)) throw DomainError("confidence model: mu0 must be finite");
    if (!(model.sigma0 > 0.0) || !std::isfinite(model.sigma0)) {
        throw DomainError("confidence model: sigma0 must be > 0");
    }
    if (!(model.scale > 1.0)) throw DomainError("confidence model: scale factor must be > 1");
    if (model.levels < 1) throw DomainError("confidence model: level count must be >= 1");
}

double level_mean(const ConfidenceModel& model, int level) {
    return model.mu0 + level * std::log(model.scale);
}

double model_confidence(const ConfidenceModel& model, int level, double speed) {
    if (!(speed > 0.0) || !std::isfinite(speed)) return 0.0;
    const double z = (std::log(speed) - level_mean(model, level)) / model.sigma0;
    return std::exp(-z * z);
}

void validate(const ParallelParams& params) {
    validate(params.model);
    validate(params.lk);
    if (!(params.weight_floor >= 0.0)) throw DomainError("parallel: weight floor must be >= 0");
}

FlowField level_flow(const Pyramid& prev, const Pyramid& next, int level, const LKParams& lk,
                     const FlowOptions& options) {
    const Frame& base = prev.level(0);
    const Frame& f = prev.level(level);
    const double factor = std::pow(prev.scale(), level);
    LKOptions o;
    o.jobs = options.jobs;
    if (options.region) o.region = region_at_level(*options.region, factor, f.width(), f.height());
    const FlowField coarse = lk_flow(f, next.level(level), lk, o);
    if (level == 0) return coarse;
    return scale_vectors(upsample_flow(coarse, factor, base.width(), base.height()), factor);
}

Fusion fuse_levels(const std::vector<FlowField>& levels, const ConfidenceModel& model, double weight_floor) {
    if (levels.empty()) throw DomainError("fuse_levels: no levels");
    const int w = levels.front().width();
    const int h = levels.front().height();
    for (const auto& f : levels) {
        if (f.width() != w || f.height() != h) throw DomainError("fuse_levels: level fields differ in size");
    }

    Fusion out{FlowField(w, h), std::vector<Frame>(levels.size(), Frame(w, h))};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            // Weighted mean written as an offset from the first participating
            // level, so identical level estimates fuse to exactly that value.
            double total = 0.0;
            Vec2 anchor{};
            Vec2 offset{};
            bool anchored = false;
            for (std::size_t l = 0; l < levels.size(); ++l) {
                if (!levels[l].valid(x, y)) continue;
                const Vec2 v = levels[l].at(x, y);
                const double k = model_confidence(model, static_cast<int>(l), v.norm());
                out.weights[l].at(x, y) = k;
                if (k <= 0.0) continue;
                if (!anchored) {
                    anchor = v;
                    anchored = true;
                }
                total += k;
                offset = offset + k * (v - anchor);
            }
            if (total > 0.0 && total >= weight_floor) {
                out.flow.set(x, y, {anchor.u + offset.u / total, anchor.v + offset.v / total}, true);
            }
        }
    }
    return out;
}

FlowField parallel_flow(const Pyramid& prev, const Pyramid& next, const ParallelParams& params,
                        const FlowOptions& options) {
    validate(params);
    const int levels = params.model.levels;
    if (prev.level_count() < levels || next.level_count() < levels) {
        throw DomainError("parallel: pyramid has fewer levels than the model");
    }
    if (std::abs(prev.scale() - params.model.scale) > 1e-12) {
        throw DomainError("parallel: pyramid scale differs from the model scale");
    }

    using clock = std::chrono::steady_clock;
    std::vector<FlowField> per_level(static_cast<std::size_t>(levels));
    std::vector<double> seconds(per_level.size(), 0.0);
    FlowOptions inner = options;
    inner.jobs = levels > 1 ? 1 : options.jobs;
    inner.timings = nullptr;
    parallel_for(per_level.size(), options.jobs, [&](std::size_t l) {
        const auto t0 = clock::now();
        per_level[l] = level_flow(prev, next, static_cast<int>(l), params.lk, inner);
        seconds[l] = std::chrono::duration<double>(clock::now() - t0).count();
    });
    const auto t0 = clock::now();
    FlowField fused = fuse_levels(per_level, params.model, params.weight_floor).flow;
    if (options.timings != nullptr) {
        options.timings->level_seconds = std::move(seconds);
        options.timings->merge_seconds = std::chrono::duration<double>(clock::now() - t0).count();
    }
    return fused;
}

FlowField parallel_flow(const Frame& prev, const Frame& next, const ParallelParams& params,
                        const FlowOptions& options) {
    validate(params);
    const Pyramid p = build_pyramid(prev, params.model.levels, params.model.scale, params.lk.window);
    const Pyramid n = build_pyramid(next, params.model.levels, params.model.scale, params.lk.window);
    return parallel_flow(p, n, params, options);
}

std::optional<Vec2> parallel_object_speed(const FrameSequence& seq, const Mask& mask, const ParallelParams& params,
                                          const FlowOptions& options) {
    if (seq.size() < 2) throw DomainError("parallel_object_speed: need at least two frames");
    return mean_object_speed(parallel_flow(seq[0], seq[1], params, options), mask);
}

}  // namespace msflow
