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

#include "popeval/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#define BOOST_ALLOW_DEPRECATED_HEADERS
#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

namespace popeval {

namespace {

namespace bg = boost::geometry;
using BoostPoint = bg::model::d2::point_xy<double>;
using BoostPolygon = bg::model::polygon<BoostPoint, /*ClockWise=*/false, /*Closed=*/true>;

double cross(const Point& o, const Point& a, const Point& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool within_bounds(const Point& p, const Point& a, const Point& b) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

// Closed-segment intersection test, collinear overlap included.
bool segments_intersect(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
    const double d1 = cross(q1, q2, p1);
    const double d2 = cross(q1, q2, p2);
    const double d3 = cross(p1, p2, q1);
    const double d4 = cross(p1, p2, q2);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
        return true;
    }
    if (d1 == 0 && within_bounds(p1, q1, q2)) return true;
    if (d2 == 0 && within_bounds(p2, q1, q2)) return true;
    if (d3 == 0 && within_bounds(q1, p1, p2)) return true;
    if (d4 == 0 && within_bounds(q2, p1, p2)) return true;
    return false;
}

double dot(const Point& a, const Point& b, const Point& c) {
    // (b - a) . (c - b)
    return (b.x - a.x) * (c.x - b.x) + (b.y - a.y) * (c.y - b.y);
}

void validate_simple(const std::vector<Point>& v) {
    const std::size_t n = v.size();
    // A vertex folding straight back along the previous edge makes the
    // boundary retrace itself; collinear continuations are fine.
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = v[(i + n - 1) % n];
        const Point& b = v[i];
        const Point& c = v[(i + 1) % n];
        if (cross(a, b, c) == 0 && dot(a, b, c) < 0) {
            throw std::invalid_argument("polygon has a spike at vertex " + std::to_string(i));
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Point& p1 = v[i];
        const Point& p2 = v[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) continue;
            const Point& q1 = v[j];
            const Point& q2 = v[(j + 1) % n];
            if (segments_intersect(p1, p2, q1, q2)) {
                throw std::invalid_argument("polygon is self-intersecting (edges " +
                                            std::to_string(i) + " and " + std::to_string(j) + ")");
            }
        }
    }
}

BoostPolygon to_boost(const Polygon& p) {
    BoostPolygon out;
    const auto& v = p.vertices();
    out.outer().reserve(v.size() + 1);
    if (p.counter_clockwise()) {
        for (const Point& pt : v) out.outer().emplace_back(pt.x, pt.y);
    } else {
        for (auto it = v.rbegin(); it != v.rend(); ++it) out.outer().emplace_back(it->x, it->y);
    }
    out.outer().emplace_back(out.outer().front());
    return out;
}

}  // namespace

Polygon::Polygon(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() < 3) {
        throw std::invalid_argument("polygon needs at least 3 vertices, got " +
                                    std::to_string(vertices_.size()));
    }
    for (const Point& pt : vertices_) {
        if (!std::isfinite(pt.x) || !std::isfinite(pt.y)) {
            throw std::invalid_argument("polygon has a non-finite coordinate");
        }
    }

    const std::size_t n = vertices_.size();
    double twice_area = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = vertices_[i];
        const Point& b = vertices_[(i + 1) % n];
        const double w = a.x * b.y - b.x * a.y;
        twice_area += w;
        cx += (a.x + b.x) * w;
        cy += (a.y + b.y) * w;
    }
    signed_area_ = 0.5 * twice_area;
    area_ = std::abs(signed_area_);
    if (area_ < 1e-12) {
        throw std::invalid_argument("polygon is degenerate (zero area)");
    }
    centroid_ = {cx / (3.0 * twice_area), cy / (3.0 * twice_area)};

    validate_simple(vertices_);
}

Polygon Polygon::rectangle(double left, double top, double right, double bottom) {
    if (!(right > left) || !(bottom > top)) {
        throw std::invalid_argument("rectangle requires right > left and bottom > top");
    }
    return Polygon({{left, top}, {right, top}, {right, bottom}, {left, bottom}});
}

double area(const Polygon& p) { return p.area(); }

Point centroid(const Polygon& p) { return p.centroid(); }

double intersection_area(const Polygon& a, const Polygon& b) {
    const BoostPolygon ba = to_boost(a);
    const BoostPolygon bb = to_boost(b);
    std::vector<BoostPolygon> pieces;
    boost::geometry::intersection(ba, bb, pieces);
    double total = 0.0;
    for (const BoostPolygon& piece : pieces) total += boost::geometry::area(piece);
    return std::clamp(total, 0.0, std::min(a.area(), b.area()));
}

double iou(const Polygon& a, const Polygon& b) {
    const double inter = intersection_area(a, b);
    return inter / (a.area() + b.area() - inter);
}

double area_recall(const Polygon& gt, const Polygon& det) {
    return intersection_area(gt, det) / gt.area();
}

double area_precision(const Polygon& gt, const Polygon& det) {
    return intersection_area(gt, det) / det.area();
}

double origin_distance(const Polygon& p) {
    const Point c = p.centroid();
    return std::hypot(c.x, c.y);
}

}  // namespace popeval
