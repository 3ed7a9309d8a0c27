// Copyright (c) 2026 The PopEval Toolkit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <random>
#include <string>
#include <vector>

#include "popeval/annotation.hpp"
#include "popeval/geometry.hpp"

namespace popeval::testing {

inline Polygon box(double left, double top, double right, double bottom) {
    return Polygon::rectangle(left, top, right, bottom);
}

inline TextInstance inst(double left, double top, double right, double bottom,
                         std::string transcript) {
    return TextInstance{box(left, top, right, bottom), std::move(transcript), false, std::nullopt};
}

inline TextInstance inst_conf(double left, double top, double right, double bottom,
                              std::string transcript, double confidence) {
    return TextInstance{box(left, top, right, bottom), std::move(transcript), false, confidence};
}

inline TextInstance dont_care(double left, double top, double right, double bottom) {
    return TextInstance{box(left, top, right, bottom), "", true, std::nullopt};
}

// The worked single-word layout: a 7-cell GT box holding "POPEVAL", each
// character cell 10 px wide. Detections cover cell ranges; unequal widths
// keep area recalls distinct where the trace depends on the order.
inline TextInstance popeval_gt() { return inst(0, 0, 70, 10, "POPEVAL"); }

// Oracle: area by counting grid cells whose center lies inside the polygon
// (even-odd rule), at the given pitch. Deliberately independent of the
// production geometry.
inline double raster_area(const std::vector<Point>& poly, double pitch) {
    double min_x = poly[0].x, max_x = poly[0].x, min_y = poly[0].y, max_y = poly[0].y;
    for (const Point& p : poly) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    long long hits = 0;
    for (double y = min_y + pitch / 2; y < max_y; y += pitch) {
        for (double x = min_x + pitch / 2; x < max_x; x += pitch) {
            bool inside = false;
            for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
                if ((poly[i].y > y) != (poly[j].y > y)) {
                    const double x_cross = (poly[j].x - poly[i].x) * (y - poly[i].y) /
                                               (poly[j].y - poly[i].y) +
                                           poly[i].x;
                    if (x < x_cross) inside = !inside;
                }
            }
            if (inside) ++hits;
        }
    }
    return static_cast<double>(hits) * pitch * pitch;
}

}  // namespace popeval::testing
