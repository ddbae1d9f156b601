#include "msflow/lk.hpp"

#include <algorithm>
#include <cmath>

#include "msflow/parallel_for.hpp"

namespace msflow {

void validate(const LKParams& params) {
    if (params.window < 3 || params.window % 2 == 0) throw DomainError("LK window must be odd and >= 3");
    if (params.iterations < 1) throw DomainError("LK iterations must be >= 1");
    if (!(params.weight_sigma > 0.0)) throw DomainError("LK weight sigma must be > 0");
    if (!(params.min_eigenvalue >= 0.0)) throw DomainError("LK eigenvalue threshold must be >= 0");
}

std::pair<Frame, Frame> spatial_gradient(const Frame& frame) {
    const int w = frame.width();
    const int h = frame.height();
    if (w < 3 || h < 3) throw DomainError("spatial_gradient needs a frame of at least 3x3");
    Frame gx(w, h);
    Frame gy(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (x == 0) {
                gx.at(x, y) = frame.at(1, y) - frame.at(0, y);
            } else if (x == w - 1) {
                gx.at(x, y) = frame.at(w - 1, y) - frame.at(w - 2, y);
            } else {
                gx.at(x, y) = 0.5 * (frame.at(x + 1, y) - frame.at(x - 1, y));
            }
            if (y == 0) {
                gy.at(x, y) = frame.at(x, 1) - frame.at(x, 0);
            } else if (y == h - 1) {
                gy.at(x, y) = frame.at(x, h - 1) - frame.at(x, h - 2);
            } else {
                gy.at(x, y) = 0.5 * (frame.at(x, y + 1) - frame.at(x, y - 1));
            }
        }
    }
    return {std::move(gx), std::move(gy)};
}

double sample_bilinear(const Frame& frame, double x, double y, bool& outside) {
    const double max_x = frame.width() - 1;
    const double max_y = frame.height() - 1;
    outside = x < 0.0 || y < 0.0 || x > max_x || y > max_y;
    x = std::clamp(x, 0.0, max_x);
    y = std::clamp(y, 0.0, max_y);
    const int x0 = std::min(static_cast<int>(x), frame.width() - 1);
    const int y0 = std::min(static_cast<int>(y), frame.height() - 1);
    const int x1 = std::min(x0 + 1, frame.width() - 1);
    const int y1 = std::min(y0 + 1, frame.height() - 1);
    const double fx = x - x0;
    const double fy = y - y0;
    const double top = frame.at(x0, y0) + fx * (frame.at(x1, y0) - frame.at(x0, y0));
    const double bottom = frame.at(x0, y1) + fx * (frame.at(x1, y1) - frame.at(x0, y1));
    return top + fy * (bottom - top);
}

namespace {

template <typename FlowAt>
WarpResult warp_impl(const Frame& frame, FlowAt flow_at) {
    WarpResult out{Frame(frame.width(), frame.height()), Mask(frame.width(), frame.height())};
    for (int y = 0; y < frame.height(); ++y) {
        for (int x = 0; x < frame.width(); ++x) {
            const Vec2 f = flow_at(x, y);
            bool outside = false;
            out.image.at(x, y) = sample_bilinear(frame, x + f.u, y + f.v, outside);
            out.out_of_bounds.set(x, y, outside);
        }
    }
    return out;
}

}  // namespace

WarpResult warp(const Frame& frame, Vec2 flow) {
    return warp_impl(frame, [flow](int, int) { return flow; });
}

WarpResult warp(const Frame& frame, const FlowField& flow) {
    if (flow.width() != frame.width() || flow.height() != frame.height()) {
        throw DomainError("warp: flow field size differs from frame size");
    }
    return warp_impl(frame, [&flow](int x, int y) { return flow.at(x, y); });
}

double NormalEquations::min_eigenvalue() const {
    const double half_trace = 0.5 * (gxx + gyy);
    const double half_diff = 0.5 * (gxx - gyy);
    return half_trace - std::sqrt(half_diff * half_diff + gxy * gxy);
}

Vec2 NormalEquations::solve() const {
    const double det = gxx * gyy - gxy * gxy;
    return {-(gyy * bx - gxy * by) / det, -(gxx * by - gxy * bx) / det};
}

std::vector<double> window_weights(const LKParams& params) {
    const int r = params.window / 2;
    std::vector<double> w(static_cast<std::size_t>(params.window * params.window));
    const double s2 = params.weight_sigma * params.weight_sigma;
    double sum = 0.0;
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            // W^2 of a Gaussian with std sigma.
            const double v = std::exp(-static_cast<double>(dx * dx + dy * dy) / s2);
            w[static_cast<std::size_t>((dy + r) * params.window + (dx + r))] = v;
            sum += v;
        }
    }
    for (double& v : w) v /= sum;
    return w;
}

FlowField lk_flow(const Frame& prev, const Frame& next, const LKParams& params, const LKOptions& options) {
    validate(params);
    if (!prev.same_shape(next)) throw DomainError("lk_flow: frames differ in size");
    if (prev.width() < params.window || prev.height() < params.window) {
        throw DomainError("lk_flow: frame smaller than the LK window");
    }
    if (options.initial != nullptr &&
        (options.initial->width() != prev.width() || options.initial->height() != prev.height())) {
        throw DomainError("lk_flow: initial flow size differs from frame size");
    }

    const int w = prev.width();
    const int h = prev.height();
    const int r = params.window / 2;
    const auto weights = window_weights(params);
    const auto [gx, gy] = spatial_gradient(prev);

    Rect region{0, 0, w, h};
    if (options.region) {
        region.x0 = std::max(region.x0, options.region->x0);
        region.y0 = std::max(region.y0, options.region->y0);
        region.x1 = std::min(region.x1, options.region->x1);
        region.y1 = std::min(region.y1, options.region->y1);
    }
    // Pixels whose window does not fit inside the frame stay invalid.
    region.x0 = std::max(region.x0, r);
    region.y0 = std::max(region.y0, r);
    region.x1 = std::min(region.x1, w - r);
    region.y1 = std::min(region.y1, h - r);

    FlowField flow(w, h);
    if (region.empty()) return flow;

    parallel_for(static_cast<std::size_t>(region.y1 - region.y0), options.jobs, [&](std::size_t row) {
        const int y = region.y0 + static_cast<int>(row);
        for (int x = region.x0; x < region.x1; ++x) {
            Vec2 v{};
            if (options.initial != nullptr) {
                if (!options.initial->valid(x, y)) continue;
                v = options.initial->at(x, y);
            }

            NormalEquations eq;
            for (int dy = -r, k = 0; dy <= r; ++dy) {
                for (int dx = -r; dx <= r; ++dx, ++k) {
                    const double wk = weights[static_cast<std::size_t>(k)];
                    const double ix = gx.at(x + dx, y + dy);
                    const double iy = gy.at(x + dx, y + dy);
                    eq.gxx += wk * ix * ix;
                    eq.gxy += wk * ix * iy;
                    eq.gyy += wk * iy * iy;
                }
            }
            if (!(eq.min_eigenvalue() >= params.min_eigenvalue) || eq.min_eigenvalue() <= 0.0) continue;

            bool ok = true;
            for (int it = 0; it < params.iterations && ok; ++it) {
                eq.bx = 0.0;
                eq.by = 0.0;
                for (int dy = -r, k = 0; dy <= r && ok; ++dy) {
                    for (int dx = -r; dx <= r; ++dx, ++k) {
                        bool outside = false;
                        const double warped = sample_bilinear(next, x + dx + v.u, y + dy + v.v, outside);
                        if (outside) {
                            ok = false;
                            break;
                        }
                        const double it_k = warped - prev.at(x + dx, y + dy);
                        const double wk = weights[static_cast<std::size_t>(k)];
                        eq.bx += wk * gx.at(x + dx, y + dy) * it_k;
                        eq.by += wk * gy.at(x + dx, y + dy) * it_k;
                    }
                }
                if (ok) v = v + eq.solve();
            }
            if (ok && params.max_residual > 0.0) {
                double residual = 0.0;
                for (int dy = -r, k = 0; dy <= r && ok; ++dy) {
                    for (int dx = -r; dx <= r; ++dx, ++k) {
                        bool outside = false;
                        const double warped = sample_bilinear(next, x + dx + v.u, y + dy + v.v, outside);
                        if (outside) {
                            ok = false;
                            break;
                        }
                        const double e = warped - prev.at(x + dx, y + dy);
                        residual += weights[static_cast<std::size_t>(k)] * e * e;
                    }
                }
                ok = ok && residual <= params.max_residual;
            }
            if (ok && std::isfinite(v.u) && std::isfinite(v.v)) flow.set(x, y, v, true);
        }
    });
    return flow;
}

std::optional<Vec2> mean_object_speed(const FlowField& flow, const Mask& mask) {
    if (mask.width() != flow.width() || mask.height() != flow.height()) {
        throw DomainError("mean_object_speed: mask size differs from flow size");
    }
    if (mask.count() == 0) throw DomainError("mean_object_speed: empty mask");
    double su = 0.0;
    double sv = 0.0;
    std::size_t n = 0;
    for (int y = 0; y < flow.height(); ++y) {
        for (int x = 0; x < flow.width(); ++x) {
            if (!mask.at(x, y) || !flow.valid(x, y)) continue;
            const Vec2 v = flow.at(x, y);
            su += v.u;
            sv += v.v;
            ++n;
        }
    }
    if (n == 0) return std::nullopt;
    return Vec2{su / static_cast<double>(n), sv / static_cast<double>(n)};
}

FlowField upsample_flow(const FlowField& field, double factor, int width, int height) {
    FlowField out(width, height);
    const int fw = field.width();
    const int fh = field.height();
    for (int y = 0; y < height; ++y) {
        const double sy = std::min(y / factor, static_cast<double>(fh - 1));
        const int y0 = static_cast<int>(sy);
        const int y1 = std::min(y0 + 1, fh - 1);
        const double fy = sy - y0;
        for (int x = 0; x < width; ++x) {
            const double sx = std::min(x / factor, static_cast<double>(fw - 1));
            const int x0 = static_cast<int>(sx);
            const int x1 = std::min(x0 + 1, fw - 1);
            const double fx = sx - x0;
            const int xs[4] = {x0, x1, x0, x1};
            const int ys[4] = {y0, y0, y1, y1};
            const double ws[4] = {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy};
            double total = 0.0;
            Vec2 acc{};
            for (int k = 0; k < 4; ++k) {
                if (ws[k] <= 0.0 || !field.valid(xs[k], ys[k])) continue;
                total += ws[k];
                acc = acc + ws[k] * field.at(xs[k], ys[k]);
            }
            if (total > 0.0) out.set(x, y, (1.0 / total) * acc, true);
        }
    }
    return out;
}

FlowField scale_vectors(FlowField field, double s) {
    for (int y = 0; y < field.height(); ++y) {
        for (int x = 0; x < field.width(); ++x) field.set(x, y, s * field.at(x, y), field.valid(x, y));
    }
    return field;
}

}  // namespace msflow
