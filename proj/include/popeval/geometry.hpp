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

#include <vector>

namespace popeval {

/// A point in image pixel coordinates. The origin is the top-left corner
/// of the image and y grows downward.
struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Simple planar polygon with at least 3 vertices.
///
/// Validated on construction: finite coordinates, no self-intersection,
/// nonzero area. Redundant collinear vertices are accepted (character-level
/// annotations may contain them); spikes (a vertex folding back onto the
/// previous edge) are not. The input vertex order is preserved for
/// round-tripping; winding is recorded so derived quantities are
/// orientation independent.
///
/// Throws std::invalid_argument when the vertex list is not a valid
/// simple polygon.
class Polygon {
public:
    explicit Polygon(std::vector<Point> vertices);

    const std::vector<Point>& vertices() const noexcept { return vertices_; }
    std::size_t size() const noexcept { return vertices_.size(); }

    /// |signed shoelace area|.
    double area() const noexcept { return area_; }

    /// Area-weighted centroid (not the vertex mean).
    Point centroid() const noexcept { return centroid_; }

    bool counter_clockwise() const noexcept { return signed_area_ > 0.0; }

    /// Axis-aligned rectangle as a 4-vertex polygon. Requires right > left
    /// and bottom > top.
    static Polygon rectangle(double left, double top, double right, double bottom);

private:
    std::vector<Point> vertices_;
    double signed_area_ = 0.0;
    double area_ = 0.0;
    Point centroid_{};
};

double area(const Polygon& p);
Point centroid(const Polygon& p);

/// Area of the geometric intersection. Non-convex simple polygons are
/// supported; disconnected intersections contribute the sum of their
/// component areas. Symmetric, and never exceeds min(area(a), area(b)).
double intersection_area(const Polygon& a, const Polygon& b);

/// intersection / union, in [0, 1].
double iou(const Polygon& a, const Polygon& b);

/// intersection_area(gt, det) / area(gt).
double area_recall(const Polygon& gt, const Polygon& det);

/// intersection_area(gt, det) / area(det).
double area_precision(const Polygon& gt, const Polygon& det);

/// Euclidean distance of the centroid from the image origin (top-left).
double origin_distance(const Polygon& p);

}  // namespace popeval
