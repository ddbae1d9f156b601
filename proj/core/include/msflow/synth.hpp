#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "msflow/frame.hpp"

namespace msflow {

enum class ObjectKind { square, disk, gaussian_blob };

ObjectKind parse_object_kind(std::string_view name);
std::string_view to_string(ObjectKind kind);

/// Stimulus description: one object translating over a flat background.
/// Defaults are the reference stimulus used by calibration and benchmarks.
struct SynthSpec {
    int width = 128;
    int height = 128;
    ObjectKind kind = ObjectKind::square;
    double diameter = 16.0;     ///< side for squares; 4 std for blobs
    double contrast = 0.8;      ///< object intensity minus background
    double background = 0.1;
    Vec2 velocity{0.0, 0.0};    ///< pixels/frame
    int frames = 2;
    double noise_sigma = 0.02;
    std::uint64_t seed = 0;
    /// Object centre in frame 0. When unset the trajectory is centred in the image.
    std::optional<Vec2> start;
};

/// Object centre at frame t (pixel centres sit at integer coordinates).
Vec2 object_center(const SynthSpec& spec, int t);

/// Throws DomainError unless the spec is renderable: positive sizes,
/// noise >= 0, and the object inside the image on every frame.
void validate(const SynthSpec& spec);

/// Noise-free rendering of frame t with antialiased (area coverage) edges.
Frame render_clean(const SynthSpec& spec, int t);

/// Clean frames plus independent N(0, sigma^2) noise per pixel and frame,
/// clamped to [0,1]. Deterministic in (spec, seed).
FrameSequence generate_sequence(const SynthSpec& spec);

/// Pixels whose object coverage at frame t is at least one half.
Mask object_mask(const SynthSpec& spec, int t = 0);

/// Reference stimulus moving at `speed` px/frame along `direction` (normalized internally).
SynthSpec default_stimulus(double speed, Vec2 direction = {1.0, 1.0});

}  // namespace msflow
