#include "msflow/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "msflow/seed.hpp"

namespace msflow {

ObjectKind parse_object_kind(std::string_view name) {
    if (name == "square") return ObjectKind::square;
    if (name == "disk") return ObjectKind::disk;
    if (name == "gaussian-blob" || name == "blob") return ObjectKind::gaussian_blob;
    throw DomainError("unknown object kind '" + std::string(name) + "'");
}

std::string_view to_string(ObjectKind kind) {
    switch (kind) {
        case ObjectKind::square: return "square";
        case ObjectKind::disk: return "disk";
        case ObjectKind::gaussian_blob: return "gaussian-blob";
    }
    return "?";
}

Vec2 object_center(const SynthSpec& spec, int t) {
    const Vec2 start = spec.start.value_or(Vec2{
        0.5 * (spec.width - 1) - 0.5 * (spec.frames - 1) * spec.velocity.u,
        0.5 * (spec.height - 1) - 0.5 * (spec.frames - 1) * spec.velocity.v,
    });
    return start + static_cast<double>(t) * spec.velocity;
}

void validate(const SynthSpec& spec) {
    if (spec.width < 1 || spec.height < 1) throw DomainError("image size must be positive");
    if (spec.frames < 1) throw DomainError("frame count must be positive");
    if (!(spec.diameter > 0.0)) throw DomainError("object diameter must be positive");
    if (!(spec.noise_sigma >= 0.0)) throw DomainError("noise sigma must be >= 0");
    if (!std::isfinite(spec.velocity.u) || !std::isfinite(spec.velocity.v)) {
        throw DomainError("velocity must be finite");
    }
    const double r = 0.5 * spec.diameter;
    for (int t = 0; t < spec.frames; ++t) {
        const Vec2 c = object_center(spec, t);
        if (c.u - r < -0.5 || c.v - r < -0.5 || c.u + r > spec.width - 0.5 || c.v + r > spec.height - 0.5) {
            throw DomainError("object leaves the image at frame " + std::to_string(t) + " (centre " +
                              std::to_string(c.u) + "," + std::to_string(c.v) + ")");
        }
    }
}

namespace {

double interval_overlap(double a0, double a1, double b0, double b1) {
    return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Fraction of pixel (x,y) covered by the object, in [0,1] (blob: mean profile value).
double coverage(const SynthSpec& spec, Vec2 c, int x, int y) {
    const double r = 0.5 * spec.diameter;
    switch (spec.kind) {
        case ObjectKind::square:
            return interval_overlap(x - 0.5, x + 0.5, c.u - r, c.u + r) *
                   interval_overlap(y - 0.5, y + 0.5, c.v - r, c.v + r);
        case ObjectKind::gaussian_blob: {
            const double s = 0.25 * spec.diameter;
            const double px = normal_cdf((x + 0.5 - c.u) / s) - normal_cdf((x - 0.5 - c.u) / s);
            const double py = normal_cdf((y + 0.5 - c.v) / s) - normal_cdf((y - 0.5 - c.v) / s);
            return 2.0 * std::numbers::pi * s * s * px * py;
        }
        case ObjectKind::disk: {
            const double dx = std::abs(x - c.u);
            const double dy = std::abs(y - c.v);
            const double near = std::hypot(std::max(0.0, dx - 0.5), std::max(0.0, dy - 0.5));
            const double far = std::hypot(dx + 0.5, dy + 0.5);
            if (far <= r) return 1.0;
            if (near >= r) return 0.0;
            constexpr int n = 16;
            int inside = 0;
            for (int j = 0; j < n; ++j) {
                for (int i = 0; i < n; ++i) {
                    const double sx = x - 0.5 + (i + 0.5) / n - c.u;
                    const double sy = y - 0.5 + (j + 0.5) / n - c.v;
                    inside += (sx * sx + sy * sy <= r * r) ? 1 : 0;
                }
            }
            return static_cast<double>(inside) / (n * n);
        }
    }
    return 0.0;
}

}  // namespace

Frame render_clean(const SynthSpec& spec, int t) {
    Frame frame(spec.width, spec.height, spec.background);
    const Vec2 c = object_center(spec, t);
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            frame.at(x, y) = spec.background + spec.contrast * coverage(spec, c, x, y);
        }
    }
    return frame;
}

FrameSequence generate_sequence(const SynthSpec& spec) {
    validate(spec);
    FrameSequence frames;
    frames.reserve(static_cast<std::size_t>(spec.frames));
    for (int t = 0; t < spec.frames; ++t) {
        Frame frame = render_clean(spec, t);
        if (spec.noise_sigma > 0.0) {
            std::mt19937_64 rng(derive_seed(spec.seed, static_cast<std::uint64_t>(t)));
            std::normal_distribution<double> noise(0.0, spec.noise_sigma);
            for (double& v : frame.pixels()) v += noise(rng);
        }
        for (double& v : frame.pixels()) v = std::clamp(v, 0.0, 1.0);
        frames.push_back(std::move(frame));
    }
    return frames;
}

Mask object_mask(const SynthSpec& spec, int t) {
    Mask mask(spec.width, spec.height);
    const Vec2 c = object_center(spec, t);
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) mask.set(x, y, coverage(spec, c, x, y) >= 0.5);
    }
    return mask;
}

SynthSpec default_stimulus(double speed, Vec2 direction) {
    const double n = direction.norm();
    if (!(n > 0.0)) throw DomainError("stimulus direction must be non-zero");
    SynthSpec spec;
    spec.velocity = (speed / n) * direction;
    return spec;
}

}  // namespace msflow
