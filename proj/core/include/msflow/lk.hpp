#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "msflow/frame.hpp"

namespace msflow {

struct LKParams {
    int window = 7;               ///< window diameter, odd, >= 3
    double weight_sigma = 1.5;    ///< std of the Gaussian W; the solve weights by W^2
    int iterations = 3;
    double min_eigenvalue = 1e-3; ///< gate on the smaller structure-tensor eigenvalue (intensity^2)
    /// Gate on the weighted mean squared brightness residual after the last
    /// iteration (intensity^2); a non-positive value disables it.
    double max_residual = 0.01;
};

void validate(const LKParams& params);

/// Dense velocity field with a per-pixel validity mask.
class FlowField {
public:
    FlowField() = default;
    FlowField(int width, int height)
        : width_(width), height_(height),
          vectors_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height)), valid_(width, height) {}

    [[nodiscard]] int width() const { return width_; }
    [[nodiscard]] int height() const { return height_; }

    [[nodiscard]] Vec2 at(int x, int y) const { return vectors_[index(x, y)]; }
    [[nodiscard]] bool valid(int x, int y) const { return valid_.at(x, y); }
    void set(int x, int y, Vec2 v, bool ok) {
        vectors_[index(x, y)] = v;
        valid_.set(x, y, ok);
    }

    [[nodiscard]] const Mask& valid_mask() const { return valid_; }
    [[nodiscard]] std::size_t valid_count() const { return valid_.count(); }

    friend bool operator==(const FlowField&, const FlowField&) = default;

private:
    [[nodiscard]] std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<Vec2> vectors_;
    Mask valid_;
};

/// Central differences on the interior, one-sided at the borders.
std::pair<Frame, Frame> spatial_gradient(const Frame& frame);

/// Bilinear sample with coordinates clamped to the image; `outside` is set
/// when (x, y) lies beyond the pixel-centre grid.
double sample_bilinear(const Frame& frame, double x, double y, bool& outside);

struct WarpResult {
    Frame image;
    Mask out_of_bounds;
};

/// output(x,y) = input(x+u, y+v), bilinear, border-clamped.
WarpResult warp(const Frame& frame, Vec2 flow);
WarpResult warp(const Frame& frame, const FlowField& flow);

/// Accumulated weighted normal equations G d = -b for one window.
struct NormalEquations {
    double gxx = 0.0;
    double gxy = 0.0;
    double gyy = 0.0;
    double bx = 0.0;   ///< sum w * Ix * It
    double by = 0.0;   ///< sum w * Iy * It

    [[nodiscard]] double min_eigenvalue() const;
    /// Closed-form 2x2 solve of G d = -b. Caller gates on min_eigenvalue().
    [[nodiscard]] Vec2 solve() const;
};

/// Normalized W^2 weights of a window, row-major, window x window.
std::vector<double> window_weights(const LKParams& params);

struct LKOptions {
    /// Per-pixel starting estimate (same size as the frames). The returned
    /// vectors include it; pixels where it is invalid are returned invalid.
    const FlowField* initial = nullptr;
    /// Only pixels inside this rectangle are estimated; others are invalid.
    std::optional<Rect> region;
    int jobs = 1;
};

/// Lucas-Kanade flow from `prev` to `next`. Each pixel minimizes the
/// W^2-weighted brightness-constancy residual over its window, refined
/// `iterations` times by resampling `next` at the running estimate. A pixel
/// is invalid if its window leaves the frame, the smaller eigenvalue of its
/// structure tensor is below the threshold, a resampled position falls
/// outside the frame, or the final residual exceeds `max_residual`.
FlowField lk_flow(const Frame& prev, const Frame& next, const LKParams& params, const LKOptions& options = {});

/// Mean of valid vectors inside `mask`; nullopt when none is valid.
/// Throws DomainError for an empty mask or mismatched sizes.
std::optional<Vec2> mean_object_speed(const FlowField& flow, const Mask& mask);

/// Resamples `field` onto a width x height grid whose pixel x maps to x/factor
/// in `field`. Bilinear over valid neighbours, renormalized; vectors are not
/// rescaled.
FlowField upsample_flow(const FlowField& field, double factor, int width, int height);

/// Multiplies every vector by `s`; validity unchanged.
FlowField scale_vectors(FlowField field, double s);

}  // namespace msflow
