#pragma once

#include <filesystem>
#include <iosfwd>

#include "msflow/lk.hpp"

namespace msflow {

// Flow CSV layout:
//   width,height
//   <width>,<height>
//   x,y,u,v,valid
//   one row per pixel, row-major; valid is 0 or 1.
// Vectors are printed with 17 significant digits so reading is lossless.

void write_flow_csv(const FlowField& flow, std::ostream& out);
void write_flow_csv(const FlowField& flow, const std::filesystem::path& path);
FlowField read_flow_csv(std::istream& in);
FlowField read_flow_csv(const std::filesystem::path& path);

}  // namespace msflow
