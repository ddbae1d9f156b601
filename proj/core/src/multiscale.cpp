#include "msflow/multiscale.hpp"

#include <algorithm>
#include <cmath>

namespace msflow {

Rect region_at_level(const Rect& region, double factor, int width, int height, int margin) {
    Rect r{
        static_cast<int>(std::floor(region.x0 / factor)) - margin,
        static_cast<int>(std::floor(region.y0 / factor)) - margin,
        static_cast<int>(std::ceil(region.x1 / factor)) + margin,
        static_cast<int>(std::ceil(region.y1 / factor)) + margin,
    };
    r.x0 = std::max(r.x0, 0);
    r.y0 = std::max(r.y0, 0);
    r.x1 = std::min(r.x1, width);
    r.y1 = std::min(r.y1, height);
    return r;
}

}  // namespace msflow
