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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "popeval/geometry.hpp"
#include "support.hpp"

using namespace popeval;
using popeval::testing::box;
using popeval::testing::raster_area;

namespace {

// Convex polygon as the hull (Andrew monotone chain) of random points in a
// disc. Test-local so the Monte-Carlo check does not lean on production
// code for its fixtures.
std::vector<Point> random_convex(std::mt19937_64& rng, double cx, double cy, double radius) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979323846);
    std::uniform_real_distribution<double> r01(0.0, 1.0);
    std::vector<Point> pts;
    for (int i = 0; i < 10; ++i) {
        const double a = angle(rng);
        const double r = radius * std::sqrt(r01(rng));
        pts.push_back({cx + r * std::cos(a), cy + r * std::sin(a)});
    }
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    const auto turn = [](const Point& o, const Point& a, const Point& b) {
        return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    };
    std::vector<Point> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Point& p : pts) {
        while (k >= 2 && turn(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
        while (k >= lower && turn(hull[k - 2], hull[k - 1], *it) <= 0) --k;
        hull[k++] = *it;
    }
    hull.resize(k - 1);
    return hull;  // counter-clockwise
}

bool inside_convex_ccw(const std::vector<Point>& hull, double x, double y) {
    for (std::size_t i = 0, j = hull.size() - 1; i < hull.size(); j = i++) {
        const Point& a = hull[j];
        const Point& b = hull[i];
        if ((b.x - a.x) * (y - a.y) - (b.y - a.y) * (x - a.x) < 0) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("polygon area") {
    CHECK(box(0, 0, 1, 1).area() == doctest::Approx(1.0));
    // cyclic rotation of the vertex list
    Polygon rotated({{1, 0}, {1, 1}, {0, 1}, {0, 0}});
    CHECK(rotated.area() == doctest::Approx(1.0));
    // frozen from the grid-count oracle at 0.001 px (9.000)
    Polygon quad({{0, 0}, {4, 0}, {4, 2}, {1, 3}});
    CHECK(quad.area() == doctest::Approx(9.000).epsilon(1e-9));
    CHECK(raster_area(quad.vertices(), 0.001) == doctest::Approx(9.000).epsilon(2e-3));
}

TEST_CASE("polygon area is invariant to winding and rotation of the list") {
    std::vector<Point> verts = {{0, 0}, {4, 0}, {4, 2}, {1, 3}};
    const double reference = Polygon(verts).area();
    std::vector<Point> reversed(verts.rbegin(), verts.rend());
    CHECK(Polygon(reversed).area() == doctest::Approx(reference));
    for (std::size_t shift = 1; shift < verts.size(); ++shift) {
        std::vector<Point> shifted = verts;
        std::rotate(shifted.begin(), shifted.begin() + static_cast<long>(shift), shifted.end());
        CHECK(Polygon(shifted).area() == doctest::Approx(reference));
    }
}

TEST_CASE("polygon centroid") {
    const Point c1 = box(0, 0, 1, 1).centroid();
    CHECK(c1.x == doctest::Approx(0.5));
    CHECK(c1.y == doctest::Approx(0.5));
    const Point c2 = box(2, 3, 4, 5).centroid();
    CHECK(c2.x == doctest::Approx(3.0));
    CHECK(c2.y == doctest::Approx(4.0));
    // L-shape; frozen from the rectangle-decomposition oracle:
    // (0,0)-(2,1) area 2 at (1,0.5) plus (0,1)-(1,2) area 1 at (0.5,1.5)
    // gives (5/6, 5/6).
    Polygon ell({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
    CHECK(ell.centroid().x == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
    CHECK(ell.centroid().y == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("centroid ignores redundant collinear vertices") {
    Polygon plain({{0, 0}, {10, 0}, {10, 10}, {0, 10}});
    Polygon redundant({{0, 0}, {5, 0}, {10, 0}, {10, 10}, {0, 10}});
    CHECK(redundant.area() == doctest::Approx(plain.area()));
    CHECK(redundant.centroid().x == doctest::Approx(plain.centroid().x));
    CHECK(redundant.centroid().y == doctest::Approx(plain.centroid().y));
}

TEST_CASE("polygon validation") {
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 1}}), std::invalid_argument);
    // bowtie self-intersection
    CHECK_THROWS_AS(Polygon({{0, 0}, {10, 10}, {10, 0}, {0, 10}}), std::invalid_argument);
    // zero area
    CHECK_THROWS_AS(Polygon({{0, 0}, {5, 5}, {10, 10}}), std::invalid_argument);
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, std::nan("")}, {1, 1}}), std::invalid_argument);
    // spike folding back onto the previous edge
    CHECK_THROWS_AS(Polygon({{0, 0}, {10, 0}, {6, 0}, {10, 10}, {0, 10}}),
                    std::invalid_argument);
}

TEST_CASE("intersection area basics") {
    CHECK(intersection_area(box(0, 0, 1, 1), box(5, 5, 6, 6)) == doctest::Approx(0.0));
    CHECK(intersection_area(box(0, 0, 1, 1), box(0, 0, 1, 1)) == doctest::Approx(1.0));
    // frozen from the grid-count oracle (0.25)
    CHECK(intersection_area(box(0, 0, 1, 1), box(0.5, 0.5, 1.5, 1.5)) == doctest::Approx(0.25));
    // edge-touching boxes do not overlap
    CHECK(intersection_area(box(0, 0, 1, 1), box(1, 0, 2, 1)) == doctest::Approx(0.0));
}

TEST_CASE("intersection area of non-convex polygons") {
    Polygon ell({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
    // clip band y in [0.5, 1.5]: bottom part 1.5 x 0.5 plus top-left 0.5 x 0.5
    CHECK(intersection_area(ell, box(0.5, 0.5, 3, 1.5)) == doctest::Approx(1.0));
}

TEST_CASE("iou") {
    CHECK(iou(box(0, 0, 2, 2), box(0, 0, 2, 2)) == doctest::Approx(1.0));
    CHECK(iou(box(0, 0, 1, 1), box(3, 3, 4, 4)) == doctest::Approx(0.0));
    CHECK(iou(box(0, 0, 1, 1), box(0.5, 0.5, 1.5, 1.5)) == doctest::Approx(0.25 / 1.75));
}

TEST_CASE("area recall and precision") {
    // det fully covers gt
    CHECK(area_recall(box(1, 1, 2, 2), box(0, 0, 3, 3)) == doctest::Approx(1.0));
    CHECK(area_recall(box(0, 0, 1, 1), box(5, 0, 6, 1)) == doctest::Approx(0.0));
    // det covers the left half of the gt square
    CHECK(area_recall(box(0, 0, 10, 10), box(0, 0, 5, 10)) == doctest::Approx(0.5));
    // mirrored with roles swapped
    CHECK(area_precision(box(0, 0, 3, 3), box(1, 1, 2, 2)) == doctest::Approx(1.0));
    CHECK(area_precision(box(0, 0, 1, 1), box(5, 0, 6, 1)) == doctest::Approx(0.0));
    CHECK(area_precision(box(0, 0, 5, 10), box(0, 0, 10, 10)) == doctest::Approx(0.5));
}

TEST_CASE("origin distance") {
    CHECK(origin_distance(box(-1, -1, 1, 1)) == doctest::Approx(0.0));
    CHECK(origin_distance(box(2, 3, 4, 5)) == doctest::Approx(5.0));
    CHECK(origin_distance(box(0, 0, 2, 2)) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("pairwise invariants on random convex polygons") {
    std::mt19937_64 rng(20260810);
    std::uniform_real_distribution<double> center(100.0, 900.0);
    std::uniform_real_distribution<double> offset(-30.0, 30.0);
    std::uniform_real_distribution<double> radius(40.0, 80.0);
    for (int iter = 0; iter < 500; ++iter) {
        const double cx = center(rng);
        const double cy = center(rng);
        const double r = radius(rng);
        Polygon a(random_convex(rng, cx, cy, r));
        Polygon b(random_convex(rng, cx + offset(rng), cy + offset(rng), r));
        const double inter_ab = intersection_area(a, b);
        const double inter_ba = intersection_area(b, a);
        CHECK(inter_ab == doctest::Approx(inter_ba).epsilon(1e-9));
        CHECK(inter_ab >= 0.0);
        CHECK(inter_ab <= std::min(a.area(), b.area()) + 1e-9);
        const double j = iou(a, b);
        CHECK(j >= 0.0);
        CHECK(j <= 1.0);
        CHECK(iou(a, a) == doctest::Approx(1.0));
        // both products equal the intersection area
        CHECK(area_recall(a, b) * a.area() ==
              doctest::Approx(area_precision(a, b) * b.area()).epsilon(1e-9));
    }
}

TEST_CASE("intersection area agrees with Monte-Carlo point sampling" *
          doctest::description("1000 convex pairs, 1e6 samples each")) {
    std::mt19937_64 rng(97);
    std::uniform_real_distribution<double> center(200.0, 800.0);
    std::uniform_real_distribution<double> radius(50.0, 90.0);
    constexpr int kSamples = 1'000'000;

    int checked = 0;
    while (checked < 1000) {
        const double cx = center(rng);
        const double cy = center(rng);
        const double r = radius(rng);
        std::uniform_real_distribution<double> offset(-0.25 * r, 0.25 * r);
        const std::vector<Point> hull_a = random_convex(rng, cx, cy, r);
        const std::vector<Point> hull_b =
            random_convex(rng, cx + offset(rng), cy + offset(rng), r);

        // Sample inside the intersection of the two bounding boxes.
        double lo_x = -1e300, hi_x = 1e300, lo_y = -1e300, hi_y = 1e300;
        for (const auto* hull : {&hull_a, &hull_b}) {
            double min_x = 1e300, max_x = -1e300, min_y = 1e300, max_y = -1e300;
            for (const Point& p : *hull) {
                min_x = std::min(min_x, p.x);
                max_x = std::max(max_x, p.x);
                min_y = std::min(min_y, p.y);
                max_y = std::max(max_y, p.y);
            }
            lo_x = std::max(lo_x, min_x);
            hi_x = std::min(hi_x, max_x);
            lo_y = std::max(lo_y, min_y);
            hi_y = std::min(hi_y, max_y);
        }
        if (hi_x <= lo_x || hi_y <= lo_y) continue;

        std::uniform_real_distribution<double> sx(lo_x, hi_x);
        std::uniform_real_distribution<double> sy(lo_y, hi_y);
        long long hits = 0;
        for (int s = 0; s < kSamples; ++s) {
            const double x = sx(rng);
            const double y = sy(rng);
            if (inside_convex_ccw(hull_a, x, y) && inside_convex_ccw(hull_b, x, y)) ++hits;
        }
        const double box_area = (hi_x - lo_x) * (hi_y - lo_y);
        const double mc = static_cast<double>(hits) / kSamples * box_area;
        // Skip pairs whose overlap is too small for the sampler to certify
        // a 1% bound; the estimate itself decides, not the implementation.
        if (static_cast<double>(hits) / kSamples < 0.2) continue;

        const double impl = intersection_area(Polygon(hull_a), Polygon(hull_b));
        CHECK(std::abs(impl - mc) <= 0.01 * impl);
        ++checked;
    }
}
