#pragma once

#include <optional>
#include <vector>

#include "msflow/lk.hpp"
#include "msflow/multiscale.hpp"
#include "msflow/pyramid.hpp"

namespace msflow {

/// Log-space Gaussian confidence shared by all levels: level l peaks at
/// log-speed mu0 + l*ln(scale) with common width sigma0.
struct ConfidenceModel {
    double mu0 = 0.0;      ///< natural log of the level-0 peak speed (px/frame)
    double sigma0 = 1.0;
    double scale = 2.0;
    int levels = 3;
};

void validate(const ConfidenceModel& model);

/// Peak log-speed of level l.
double level_mean(const ConfidenceModel& model, int level);

/// exp(-((ln v - mu_l) / sigma0)^2). Returns 0 for v <= 0 or non-finite v.
double model_confidence(const ConfidenceModel& model, int level, double speed);

struct ParallelParams {
    ConfidenceModel model;
    LKParams lk;
    double weight_floor = 1e-6;
};

void validate(const ParallelParams& params);

/// LK on pyramid level `level` alone, expressed at level-0 resolution
/// (bilinear upsampling over valid pixels) and in level-0 units.
FlowField level_flow(const Pyramid& prev, const Pyramid& next, int level, const LKParams& lk,
                     const FlowOptions& options = {});

struct Fusion {
    FlowField flow;
    /// Per-level weight images (0 where a level did not participate).
    std::vector<Frame> weights;
};

/// Confidence-weighted mean of per-level fields (all level-0 resolution and
/// units). A pixel is invalid when no level is valid or the total weight
/// falls below `weight_floor`.
Fusion fuse_levels(const std::vector<FlowField>& levels, const ConfidenceModel& model, double weight_floor);

/// Independent per-level LK estimates fused by modelled confidence. With
/// options.jobs > 1 the levels run concurrently; the output does not depend
/// on the job count.
FlowField parallel_flow(const Pyramid& prev, const Pyramid& next, const ParallelParams& params,
                        const FlowOptions& options = {});
FlowField parallel_flow(const Frame& prev, const Frame& next, const ParallelParams& params,
                        const FlowOptions& options = {});

std::optional<Vec2> parallel_object_speed(const FrameSequence& seq, const Mask& mask, const ParallelParams& params,
                                          const FlowOptions& options = {});

}  // namespace msflow
