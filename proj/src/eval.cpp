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

#include "popeval/eval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "popeval/errors.hpp"

namespace popeval {

namespace {

constexpr double kRecallTieTolerance = 1e-9;

// Ordering of Eq. 3: nearest centroid to the image origin first; exact ties
// fall back to smaller y, smaller x, then input order.
bool gt_order_before(const LiveInstance& a, const LiveInstance& b) {
    if (a.distance_to_origin != b.distance_to_origin)
        return a.distance_to_origin < b.distance_to_origin;
    if (a.center.y != b.center.y) return a.center.y < b.center.y;
    if (a.center.x != b.center.x) return a.center.x < b.center.x;
    return a.input_index < b.input_index;
}

}  // namespace

void EvalConfig::validate() const {
    if (dontcare_overlap_threshold < 0.0 || dontcare_overlap_threshold > 1.0 ||
        !std::isfinite(dontcare_overlap_threshold)) {
        throw ConfigError("dontcare_overlap_threshold must lie in [0,1]");
    }
    if (!(intersection_epsilon >= 0.0) || !std::isfinite(intersection_epsilon)) {
        throw ConfigError("intersection_epsilon must be a finite non-negative number");
    }
}

ScoreTriple score_from_counts(double matched, double gt_total, double det_total) {
    ScoreTriple s;
    s.precision = det_total > 0 ? matched / det_total : (gt_total > 0 ? 0.0 : 1.0);
    s.recall = gt_total > 0 ? matched / gt_total : (det_total > 0 ? 0.0 : 1.0);
    s.fscore = (s.precision > 0.0 && s.recall > 0.0)
                   ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
                   : 0.0;
    return s;
}

std::vector<LiveInstance> make_live(const std::vector<TextInstance>& instances,
                                    const EvalConfig& cfg) {
    const NormalizeConfig norm = cfg.normalization();
    std::vector<LiveInstance> live;
    live.reserve(instances.size());
    for (std::size_t i = 0; i < instances.size(); ++i) {
        LiveInstance li;
        li.source = &instances[i];
        li.input_index = i;
        li.remaining_text = normalize_codepoints(utf8_decode(instances[i].transcript), norm);
        li.center = instances[i].polygon.centroid();
        li.distance_to_origin = std::hypot(li.center.x, li.center.y);
        live.push_back(std::move(li));
    }
    return live;
}

IntersectionMatrix intersection_matrix(const std::vector<LiveInstance>& gts,
                                       const std::vector<LiveInstance>& dets) {
    IntersectionMatrix m(gts.size(), std::vector<double>(dets.size(), 0.0));
    for (std::size_t g = 0; g < gts.size(); ++g) {
        for (std::size_t d = 0; d < dets.size(); ++d) {
            m[g][d] = intersection_area(gts[g].source->polygon, dets[d].source->polygon);
        }
    }
    return m;
}

RelationSets inspect_relations(const std::vector<LiveInstance>& gts,
                               const std::vector<LiveInstance>& dets,
                               const IntersectionMatrix& inter, double epsilon) {
    RelationSets rel;
    for (std::size_t g = 0; g < gts.size(); ++g) {
        if (!gts[g].alive) continue;
        std::vector<std::size_t> overlapping;
        for (std::size_t d = 0; d < dets.size(); ++d) {
            if (dets[d].alive && inter[g][d] > epsilon) overlapping.push_back(d);
        }
        if (overlapping.size() == 1) {
            rel.one_to_one.emplace_back(g, overlapping.front());
        } else if (overlapping.size() > 1) {
            rel.one_to_many.emplace_back(g, std::move(overlapping));
        }
    }
    return rel;
}

std::size_t select_nearest_gt(const std::vector<LiveInstance>& gts,
                              std::span<const std::size_t> candidates) {
    if (candidates.empty()) {
        throw std::invalid_argument("select_nearest_gt requires a nonempty candidate set");
    }
    std::size_t best = candidates.front();
    for (std::size_t idx : candidates.subspan(1)) {
        if (gt_order_before(gts[idx], gts[best])) best = idx;
    }
    return best;
}

std::vector<std::size_t> select_best_dets(const LiveInstance& gt,
                                          const std::vector<LiveInstance>& dets,
                                          std::span<const std::size_t> candidates) {
    const double gt_area = gt.source->polygon.area();
    double best_recall = -1.0;
    std::vector<std::pair<double, std::size_t>> recalls;  // (area recall, det index)
    recalls.reserve(candidates.size());
    for (std::size_t d : candidates) {
        const double r = intersection_area(gt.source->polygon, dets[d].source->polygon) / gt_area;
        recalls.emplace_back(r, d);
        best_recall = std::max(best_recall, r);
    }
    std::vector<std::size_t> selected;
    for (const auto& [r, d] : recalls) {
        if (r >= best_recall - kRecallTieTolerance) selected.push_back(d);
    }
    std::sort(selected.begin(), selected.end(), [&](std::size_t a, std::size_t b) {
        if (dets[a].distance_to_origin != dets[b].distance_to_origin)
            return dets[a].distance_to_origin < dets[b].distance_to_origin;
        return dets[a].input_index < dets[b].input_index;
    });
    return selected;
}

double character_removal(LiveInstance& gt, LiveInstance& det, double weight) {
    std::u32string unmatched;
    unmatched.reserve(det.remaining_text.size());
    std::size_t events = 0;
    for (char32_t c : det.remaining_text) {
        const std::size_t leftmost = gt.remaining_text.find(c);
        if (leftmost != std::u32string::npos) {
            gt.remaining_text.erase(leftmost, 1);
            ++events;
        } else {
            unmatched.push_back(c);
        }
    }
    det.remaining_text = std::move(unmatched);
    if (gt.remaining_text.empty()) gt.alive = false;
    return weight * static_cast<double>(events);
}

std::pair<std::vector<TextInstance>, std::vector<TextInstance>> filter_dontcare(
    const std::vector<TextInstance>& gts, const std::vector<TextInstance>& dets,
    const EvalConfig& cfg) {
    std::vector<TextInstance> kept_gts;
    std::vector<const Polygon*> dontcare;
    for (const TextInstance& g : gts) {
        if (g.dont_care) {
            dontcare.push_back(&g.polygon);
        } else {
            kept_gts.push_back(g);
        }
    }
    std::vector<TextInstance> kept_dets;
    for (const TextInstance& d : dets) {
        const bool suppressed =
            std::any_of(dontcare.begin(), dontcare.end(), [&](const Polygon* dc) {
                return area_precision(*dc, d.polygon) > cfg.dontcare_overlap_threshold;
            });
        if (!suppressed) kept_dets.push_back(d);
    }
    return {std::move(kept_gts), std::move(kept_dets)};
}

ImageEvalResult evaluate_image(const std::vector<TextInstance>& gts,
                               const std::vector<TextInstance>& dets, const EvalConfig& cfg) {
    cfg.validate();
    const auto [live_gt_sources, live_det_sources] = filter_dontcare(gts, dets, cfg);
    std::vector<LiveInstance> live_gts = make_live(live_gt_sources, cfg);
    std::vector<LiveInstance> live_dets = make_live(live_det_sources, cfg);

    ImageEvalResult result;
    for (const LiveInstance& g : live_gts)
        result.gt_char_total += static_cast<long long>(g.remaining_text.size());
    for (const LiveInstance& d : live_dets)
        result.det_char_total += static_cast<long long>(d.remaining_text.size());

    const IntersectionMatrix inter = intersection_matrix(live_gts, live_dets);

    for (;;) {
        ++result.rounds;
        RelationSets rel =
            inspect_relations(live_gts, live_dets, inter, cfg.intersection_epsilon);
        if (rel.one_to_one.empty() && rel.one_to_many.empty()) break;

        if (!rel.one_to_one.empty()) {
            std::sort(rel.one_to_one.begin(), rel.one_to_one.end(),
                      [&](const auto& a, const auto& b) {
                          return gt_order_before(live_gts[a.first], live_gts[b.first]);
                      });
            for (const auto& [g, d] : rel.one_to_one) {
                result.removed_weight += character_removal(live_gts[g], live_dets[d], 1.0);
            }
            for (const auto& [g, d] : rel.one_to_one) live_dets[d].alive = false;
        } else {
            std::vector<std::size_t> group_gts;
            group_gts.reserve(rel.one_to_many.size());
            for (const auto& [g, ds] : rel.one_to_many) group_gts.push_back(g);
            const std::size_t g = select_nearest_gt(live_gts, group_gts);
            const auto group = std::find_if(rel.one_to_many.begin(), rel.one_to_many.end(),
                                            [&](const auto& entry) { return entry.first == g; });
            const std::vector<std::size_t> selected =
                select_best_dets(live_gts[g], live_dets, group->second);
            const double weight = 1.0 / static_cast<double>(selected.size());
            for (std::size_t d : selected) {
                result.removed_weight += character_removal(live_gts[g], live_dets[d], weight);
                live_dets[d].alive = false;
            }
        }
    }

    for (const LiveInstance& g : live_gts)
        result.remaining_gt_chars += static_cast<long long>(g.remaining_text.size());

    const ScoreTriple s = score_from_counts(result.removed_weight,
                                            static_cast<double>(result.gt_char_total),
                                            static_cast<double>(result.det_char_total));
    result.precision = s.precision;
    result.recall = s.recall;
    result.fscore = s.fscore;
    return result;
}

CorpusScores aggregate(std::span<const ImageEvalResult> results) {
    CorpusScores total;
    total.image_count = results.size();
    for (const ImageEvalResult& r : results) {
        total.removed_weight += r.removed_weight;
        total.gt_char_total += r.gt_char_total;
        total.det_char_total += r.det_char_total;
    }
    if (total.image_count > 0) {
        total.scores = score_from_counts(total.removed_weight,
                                         static_cast<double>(total.gt_char_total),
                                         static_cast<double>(total.det_char_total));
    }
    return total;
}

}  // namespace popeval
