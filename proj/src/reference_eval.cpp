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

#include "popeval/reference_eval.hpp"

#include <algorithm>
#include <cmath>

namespace popeval::reference {

namespace {

struct Unit {
    Polygon polygon;
    std::u32string text;
    std::size_t order;  // original input position, for tie-breaking only
};

struct OneToOne {
    std::size_t gt;
    std::size_t det;
};

struct OneToMany {
    std::size_t gt;
    std::vector<std::size_t> dets;
};

double origin_dist(const Unit& u) {
    const Point c = u.polygon.centroid();
    return std::hypot(c.x, c.y);
}

bool closer_to_origin(const Unit& a, const Unit& b) {
    const double da = origin_dist(a);
    const double db = origin_dist(b);
    if (da != db) return da < db;
    const Point ca = a.polygon.centroid();
    const Point cb = b.polygon.centroid();
    if (ca.y != cb.y) return ca.y < cb.y;
    if (ca.x != cb.x) return ca.x < cb.x;
    return a.order < b.order;
}

void inspect_relation(const std::vector<Unit>& gts, const std::vector<Unit>& dets,
                      double epsilon, std::vector<OneToOne>& one_to_one,
                      std::vector<OneToMany>& one_to_many) {
    one_to_one.clear();
    one_to_many.clear();
    for (std::size_t g = 0; g < gts.size(); ++g) {
        std::vector<std::size_t> intersecting;
        for (std::size_t d = 0; d < dets.size(); ++d) {
            if (intersection_area(gts[g].polygon, dets[d].polygon) > epsilon) {
                intersecting.push_back(d);
            }
        }
        if (intersecting.size() == 1) {
            one_to_one.push_back({g, intersecting.front()});
        } else if (intersecting.size() > 1) {
            one_to_many.push_back({g, intersecting});
        }
    }
}

// Walks the detection text left to right, deleting each matched character's
// leftmost occurrence from the GT text. Returns the number of removals.
std::size_t character_removal_process(Unit& gt, Unit& det) {
    std::size_t removed = 0;
    std::u32string leftover;
    for (char32_t det_character : det.text) {
        const std::size_t gt_index = gt.text.find(det_character);
        if (gt_index != std::u32string::npos) {
            gt.text.erase(gt_index, 1);
            ++removed;
        } else {
            leftover.push_back(det_character);
        }
    }
    det.text = leftover;
    return removed;
}

template <typename T>
std::vector<T> without(const std::vector<T>& items, const std::vector<std::size_t>& drop) {
    std::vector<T> kept;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (std::find(drop.begin(), drop.end(), i) == drop.end()) kept.push_back(items[i]);
    }
    return kept;
}

double run_main(std::vector<Unit> gts, std::vector<Unit> dets, const EvalConfig& cfg,
                int& rounds, std::vector<Unit>& survivors) {
    ++rounds;
    std::vector<OneToOne> one_to_one;
    std::vector<OneToMany> one_to_many;
    inspect_relation(gts, dets, cfg.intersection_epsilon, one_to_one, one_to_many);

    if (one_to_one.empty() && one_to_many.empty()) {
        survivors = gts;
        return 0.0;
    }

    double removed = 0.0;
    std::vector<std::size_t> dead_gts;
    std::vector<std::size_t> dead_dets;

    if (!one_to_one.empty()) {
        std::sort(one_to_one.begin(), one_to_one.end(), [&](const OneToOne& a, const OneToOne& b) {
            return closer_to_origin(gts[a.gt], gts[b.gt]);
        });
        for (const OneToOne& pair : one_to_one) {
            removed += static_cast<double>(character_removal_process(gts[pair.gt], dets[pair.det]));
            if (gts[pair.gt].text.empty()) dead_gts.push_back(pair.gt);
            dead_dets.push_back(pair.det);
        }
    } else {
        std::size_t chosen = 0;
        for (std::size_t i = 1; i < one_to_many.size(); ++i) {
            if (closer_to_origin(gts[one_to_many[i].gt], gts[one_to_many[chosen].gt])) chosen = i;
        }
        Unit& gt = gts[one_to_many[chosen].gt];
        const std::vector<std::size_t>& candidates = one_to_many[chosen].dets;

        double best = -1.0;
        for (std::size_t d : candidates) {
            best = std::max(best, area_recall(gt.polygon, dets[d].polygon));
        }
        std::vector<std::size_t> winners;
        for (std::size_t d : candidates) {
            if (area_recall(gt.polygon, dets[d].polygon) >= best - 1e-9) winners.push_back(d);
        }
        std::sort(winners.begin(), winners.end(), [&](std::size_t a, std::size_t b) {
            if (origin_dist(dets[a]) != origin_dist(dets[b]))
                return origin_dist(dets[a]) < origin_dist(dets[b]);
            return dets[a].order < dets[b].order;
        });

        const double weight = 1.0 / static_cast<double>(winners.size());
        for (std::size_t d : winners) {
            removed += weight * static_cast<double>(character_removal_process(gt, dets[d]));
            dead_dets.push_back(d);
        }
        if (gt.text.empty()) dead_gts.push_back(one_to_many[chosen].gt);
    }

    return removed +
           run_main(without(gts, dead_gts), without(dets, dead_dets), cfg, rounds, survivors);
}

}  // namespace

ImageEvalResult evaluate_image(const std::vector<TextInstance>& gts,
                               const std::vector<TextInstance>& dets, const EvalConfig& cfg) {
    cfg.validate();
    const NormalizeConfig norm = cfg.normalization();

    std::vector<Unit> gt_units;
    std::vector<const Polygon*> dontcare;
    for (std::size_t i = 0; i < gts.size(); ++i) {
        if (gts[i].dont_care) {
            dontcare.push_back(&gts[i].polygon);
        } else {
            gt_units.push_back(
                {gts[i].polygon, normalize_codepoints(utf8_decode(gts[i].transcript), norm), i});
        }
    }
    std::vector<Unit> det_units;
    for (std::size_t i = 0; i < dets.size(); ++i) {
        bool suppressed = false;
        for (const Polygon* dc : dontcare) {
            if (area_precision(*dc, dets[i].polygon) > cfg.dontcare_overlap_threshold) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) {
            det_units.push_back(
                {dets[i].polygon, normalize_codepoints(utf8_decode(dets[i].transcript), norm), i});
        }
    }

    ImageEvalResult result;
    for (const Unit& u : gt_units) result.gt_char_total += static_cast<long long>(u.text.size());
    for (const Unit& u : det_units) result.det_char_total += static_cast<long long>(u.text.size());

    std::vector<Unit> survivors;
    result.removed_weight = run_main(std::move(gt_units), std::move(det_units), cfg,
                                     result.rounds, survivors);
    for (const Unit& u : survivors)
        result.remaining_gt_chars += static_cast<long long>(u.text.size());

    const ScoreTriple s = score_from_counts(result.removed_weight,
                                            static_cast<double>(result.gt_char_total),
                                            static_cast<double>(result.det_char_total));
    result.precision = s.precision;
    result.recall = s.recall;
    result.fscore = s.fscore;
    return result;
}

}  // namespace popeval::reference
