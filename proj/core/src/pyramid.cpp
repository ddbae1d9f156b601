#include "msflow/pyramid.hpp"

#include <cmath>
#include <string>

namespace msflow {

std::vector<double> pyramid_kernel(double scale) {
    const double sigma = 0.5 * std::sqrt(scale * scale - 1.0);
    const int radius = static_cast<int>(std::ceil(2.0 * sigma));
    std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double w = std::exp(-0.5 * (i * i) / (sigma * sigma));
        k[static_cast<std::size_t>(i + radius)] = w;
        sum += w;
    }
    for (double& w : k) w /= sum;
    return k;
}

namespace {

int reflect101(int i, int n) {
    if (n == 1) return 0;
    while (i < 0 || i >= n) {
        if (i < 0) i = -i;
        if (i >= n) i = 2 * (n - 1) - i;
    }
    return i;
}

}  // namespace

Frame smooth(const Frame& frame, const std::vector<double>& kernel) {
    const int w = frame.width();
    const int h = frame.height();
    const int radius = static_cast<int>(kernel.size() / 2);
    Frame tmp(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                acc += kernel[static_cast<std::size_t>(k + radius)] * frame.at(reflect101(x + k, w), y);
            }
            tmp.at(x, y) = acc;
        }
    }
    Frame out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                acc += kernel[static_cast<std::size_t>(k + radius)] * tmp.at(x, reflect101(y + k, h));
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

Frame downsample(const Frame& frame, double scale) {
    const int w = static_cast<int>(std::floor(frame.width() / scale));
    const int h = static_cast<int>(std::floor(frame.height() / scale));
    Frame out(w, h);
    for (int y = 0; y < h; ++y) {
        const double sy = y * scale;
        const int y0 = std::min(static_cast<int>(sy), frame.height() - 1);
        const int y1 = std::min(y0 + 1, frame.height() - 1);
        const double fy = sy - y0;
        for (int x = 0; x < w; ++x) {
            const double sx = x * scale;
            const int x0 = std::min(static_cast<int>(sx), frame.width() - 1);
            const int x1 = std::min(x0 + 1, frame.width() - 1);
            const double fx = sx - x0;
            const double top = (1.0 - fx) * frame.at(x0, y0) + fx * frame.at(x1, y0);
            const double bottom = (1.0 - fx) * frame.at(x0, y1) + fx * frame.at(x1, y1);
            out.at(x, y) = (1.0 - fy) * top + fy * bottom;
        }
    }
    return out;
}

Pyramid build_pyramid(const Frame& frame, int levels, double scale, int min_size) {
    if (levels < 1) throw DomainError("pyramid needs at least one level");
    if (!(scale > 1.0)) throw DomainError("pyramid scale factor must be > 1");
    if (frame.width() < min_size || frame.height() < min_size) {
        throw DomainError("pyramid level 0 is " + std::to_string(frame.width()) + "x" +
                          std::to_string(frame.height()) + ", smaller than " + std::to_string(min_size));
    }

    std::vector<Frame> out;
    out.reserve(static_cast<std::size_t>(levels));
    out.push_back(frame);
    const auto kernel = pyramid_kernel(scale);
    for (int l = 1; l < levels; ++l) {
        const Frame& prev = out.back();
        const int w = static_cast<int>(std::floor(prev.width() / scale));
        const int h = static_cast<int>(std::floor(prev.height() / scale));
        if (w < min_size || h < min_size) {
            throw DomainError("pyramid level " + std::to_string(l) + " would be " + std::to_string(w) + "x" +
                              std::to_string(h) + ", smaller than " + std::to_string(min_size));
        }
        out.push_back(downsample(smooth(prev, kernel), scale));
    }
    return Pyramid(std::move(out), scale);
}

}  // namespace msflow
