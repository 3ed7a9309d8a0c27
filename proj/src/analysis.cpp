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

#include "popeval/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "popeval/baselines.hpp"
#include "popeval/errors.hpp"
#include "popeval/text.hpp"

namespace popeval {

bool detect_permutations(std::u32string_view gt_text, std::u32string_view det_text) {
    if (gt_text == det_text) return false;
    if (gt_text.size() != det_text.size()) return false;
    std::u32string a{gt_text};
    std::u32string b{det_text};
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

bool detect_permutations(std::string_view gt_text_utf8, std::string_view det_text_utf8) {
    return detect_permutations(std::u32string_view(utf8_decode(gt_text_utf8)),
                               std::u32string_view(utf8_decode(det_text_utf8)));
}

SplitMergeCounts count_split_merge(const std::vector<TextInstance>& gts,
                                   const std::vector<TextInstance>& dets, const EvalConfig& cfg,
                                   double area_threshold) {
    const NormalizeConfig norm = cfg.normalization();
    std::vector<std::u32string> gt_texts;
    gt_texts.reserve(gts.size());
    for (const TextInstance& g : gts)
        gt_texts.push_back(normalize_codepoints(utf8_decode(g.transcript), norm));
    std::vector<std::u32string> det_texts;
    det_texts.reserve(dets.size());
    for (const TextInstance& d : dets)
        det_texts.push_back(normalize_codepoints(utf8_decode(d.transcript), norm));

    const auto proper_substring = [](const std::u32string& part, const std::u32string& whole) {
        return !part.empty() && part.size() < whole.size() &&
               whole.find(part) != std::u32string::npos;
    };

    SplitMergeCounts counts;
    counts.total_gts = gts.size();
    counts.total_detections = dets.size();
    for (std::size_t d = 0; d < dets.size(); ++d) {
        for (std::size_t g = 0; g < gts.size(); ++g) {
            if (proper_substring(det_texts[d], gt_texts[g]) &&
                area_precision(gts[g].polygon, dets[d].polygon) > area_threshold) {
                ++counts.split_detections;
                break;
            }
        }
    }
    for (std::size_t g = 0; g < gts.size(); ++g) {
        for (std::size_t d = 0; d < dets.size(); ++d) {
            if (proper_substring(gt_texts[g], det_texts[d]) &&
                area_recall(gts[g].polygon, dets[d].polygon) > area_threshold) {
                ++counts.merged_gts;
                break;
            }
        }
    }
    return counts;
}

PermutationCounts count_permutations(const std::vector<TextInstance>& gts,
                                     const std::vector<TextInstance>& dets,
                                     double iou_threshold) {
    const NormalizeConfig norm{.case_fold = true, .alphanumeric_only = true};
    const Matching matching = match_iou(gts, dets, iou_threshold);
    PermutationCounts counts;
    counts.matched_pairs = matching.pairs.size();
    for (const Matching::Pair& p : matching.pairs) {
        std::u32string a = normalize_codepoints(utf8_decode(gts[p.gt_index].transcript), norm);
        std::u32string b = normalize_codepoints(utf8_decode(dets[p.det_index].transcript), norm);
        if (a.empty() || a.size() != b.size()) continue;
        const bool permuted = detect_permutations(std::u32string_view(a), std::u32string_view(b));
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a == b) {
            ++counts.equal_multiset_pairs;
            if (permuted) ++counts.permutation_pairs;
        }
    }
    return counts;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw std::invalid_argument("pearson requires sequences of equal length");
    }
    if (xs.size() < 2) {
        throw std::invalid_argument("pearson requires at least two points");
    }
    const double n = static_cast<double>(xs.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mean_x += xs[i];
        mean_y += ys[i];
    }
    mean_x /= n;
    mean_y /= n;
    double covariance = 0.0;
    double var_x = 0.0;
    double var_y = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mean_x;
        const double dy = ys[i] - mean_y;
        covariance += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if (var_x == 0.0 || var_y == 0.0) {
        throw CorrelationError("undefined correlation: a sequence has zero variance");
    }
    return covariance / std::sqrt(var_x * var_y);
}

HumanScoreTable average_raters(const std::vector<std::map<std::string, double>>& raters) {
    if (raters.empty()) throw Error("no rater tables supplied");
    HumanScoreTable table;
    for (const auto& [id, score] : raters.front()) table.ratings[id] = score;
    for (std::size_t r = 1; r < raters.size(); ++r) {
        std::vector<std::string> mismatched;
        for (const auto& [id, score] : raters[r]) {
            if (table.ratings.count(id) == 0) mismatched.push_back(id);
        }
        for (const auto& [id, score] : table.ratings) {
            if (raters[r].count(id) == 0) mismatched.push_back(id);
        }
        if (!mismatched.empty()) {
            std::string msg = "rater tables disagree on image ids:";
            for (const std::string& id : mismatched) msg += " " + id;
            throw AlignmentError(msg, std::move(mismatched));
        }
        for (const auto& [id, score] : raters[r]) table.ratings[id] += score;
    }
    for (auto& [id, score] : table.ratings) score /= static_cast<double>(raters.size());
    return table;
}

std::map<std::string, double> correlate_with_human(
    const std::map<std::string, std::map<std::string, double>>& metric_scores,
    const HumanScoreTable& human) {
    std::map<std::string, double> out;
    for (const auto& [metric, scores] : metric_scores) {
        std::vector<std::string> missing;
        for (const auto& [id, value] : scores) {
            if (human.ratings.count(id) == 0) missing.push_back(id);
        }
        for (const auto& [id, rating] : human.ratings) {
            if (scores.count(id) == 0) missing.push_back(id);
        }
        if (!missing.empty()) {
            std::string msg = "metric '" + metric + "' and human scores disagree on image ids:";
            for (const std::string& id : missing) msg += " " + id;
            throw AlignmentError(msg, std::move(missing));
        }
        std::vector<double> xs;
        std::vector<double> ys;
        xs.reserve(scores.size());
        ys.reserve(scores.size());
        for (const auto& [id, value] : scores) {
            xs.push_back(value);
            ys.push_back(human.ratings.at(id));
        }
        out[metric] = pearson(xs, ys);
    }
    return out;
}

}  // namespace popeval
