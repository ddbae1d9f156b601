#pragma once

#include <filesystem>

#include "msflow/frame.hpp"

namespace msflow {

/// Reads a binary graymap (P5). Samples are scaled to [0,1] by maxval;
/// 16-bit samples are big-endian as the format requires.
Frame load_pgm(const std::filesystem::path& path);

/// Writes a P5 file with maxval 255; each value is clamped to [0,1] and
/// quantized as floor(v*255 + 0.5).
void save_pgm(const Frame& frame, const std::filesystem::path& path);

/// Writes frames as `frame_00000.pgm`, `frame_00001.pgm`, ... into `dir`.
void save_sequence(const FrameSequence& frames, const std::filesystem::path& dir);

/// Reads consecutive `frame_%05d.pgm` files from `dir`, starting at 0.
FrameSequence load_sequence(const std::filesystem::path& dir);

}  // namespace msflow
