#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "msflow/error.hpp"

namespace msflow {

struct Vec2 {
    double u = 0.0;
    double v = 0.0;

    [[nodiscard]] double norm() const { return std::hypot(u, v); }

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.u + b.u, a.v + b.v}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.u - b.u, a.v - b.v}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.u, s * a.v}; }
    friend bool operator==(Vec2, Vec2) = default;
};

/// Axis-aligned pixel rectangle, half-open: [x0, x1) x [y0, y1).
struct Rect {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;

    [[nodiscard]] bool empty() const { return x1 <= x0 || y1 <= y0; }
    [[nodiscard]] bool contains(int x, int y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }
};

/// Grayscale raster, row-major, real-valued intensities (nominally in [0,1]).
class Frame {
public:
    Frame() = default;
    Frame(int width, int height, double fill = 0.0)
        : width_(width), height_(height), data_(checked_size(width, height), fill) {}
    Frame(int width, int height, std::vector<double> data) : width_(width), height_(height), data_(std::move(data)) {
        if (data_.size() != checked_size(width, height)) {
            throw DomainError("frame data length does not match width*height");
        }
    }

    [[nodiscard]] int width() const { return width_; }
    [[nodiscard]] int height() const { return height_; }
    [[nodiscard]] std::size_t size() const { return data_.size(); }
    [[nodiscard]] bool empty() const { return data_.empty(); }

    [[nodiscard]] double at(int x, int y) const { return data_[index(x, y)]; }
    double& at(int x, int y) { return data_[index(x, y)]; }

    [[nodiscard]] std::span<const double> pixels() const { return data_; }
    [[nodiscard]] std::span<double> pixels() { return data_; }

    [[nodiscard]] bool same_shape(const Frame& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

    friend bool operator==(const Frame&, const Frame&) = default;

private:
    static std::size_t checked_size(int width, int height) {
        if (width < 0 || height < 0) throw DomainError("frame dimensions must be non-negative");
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }
    [[nodiscard]] std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

using FrameSequence = std::vector<Frame>;

/// Per-pixel boolean set with the same layout as a Frame.
class Mask {
public:
    Mask() = default;
    Mask(int width, int height, bool fill = false)
        : width_(width), height_(height),
          bits_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill ? 1 : 0) {}

    [[nodiscard]] int width() const { return width_; }
    [[nodiscard]] int height() const { return height_; }
    [[nodiscard]] bool at(int x, int y) const { return bits_[index(x, y)] != 0; }
    void set(int x, int y, bool value) { bits_[index(x, y)] = value ? 1 : 0; }

    [[nodiscard]] std::size_t count() const {
        std::size_t n = 0;
        for (auto b : bits_) n += b;
        return n;
    }

    /// Tight bounding box of the set pixels (empty rect if none).
    [[nodiscard]] Rect bounds() const {
        Rect r{width_, height_, 0, 0};
        for (int y = 0; y < height_; ++y) {
            for (int x = 0; x < width_; ++x) {
                if (!at(x, y)) continue;
                r.x0 = std::min(r.x0, x);
                r.y0 = std::min(r.y0, y);
                r.x1 = std::max(r.x1, x + 1);
                r.y1 = std::max(r.y1, y + 1);
            }
        }
        if (r.empty()) return {};
        return r;
    }

    friend bool operator==(const Mask&, const Mask&) = default;

private:
    [[nodiscard]] std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<unsigned char> bits_;
};

}  // namespace msflow
