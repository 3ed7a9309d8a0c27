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

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "popeval/annotation.hpp"
#include "popeval/eval.hpp"

namespace popeval {

/// True iff the two texts have equal character multisets but are not equal.
/// Expects inputs already normalized (the permutation analysis uses
/// alphanumeric-only case-folded texts). Symmetric; false for equal texts,
/// including two empties.
bool detect_permutations(std::u32string_view gt_text, std::u32string_view det_text);
bool detect_permutations(std::string_view gt_text_utf8, std::string_view det_text_utf8);

struct SplitMergeCounts {
    std::size_t split_detections = 0;
    std::size_t merged_gts = 0;
    std::size_t total_detections = 0;
    std::size_t total_gts = 0;

    double split_fraction() const {
        return total_detections == 0
                   ? 0.0
                   : static_cast<double>(split_detections) / static_cast<double>(total_detections);
    }
    double merge_fraction() const {
        return total_gts == 0 ? 0.0
                              : static_cast<double>(merged_gts) / static_cast<double>(total_gts);
    }
};

/// Split: a detection whose normalized transcript is a proper substring of
/// some GT's with area precision against that GT strictly above the
/// threshold. Merge: a GT whose normalized transcript is a proper substring
/// of some detection's with area recall strictly above the threshold.
/// Equal transcripts qualify as neither.
SplitMergeCounts count_split_merge(const std::vector<TextInstance>& gts,
                                   const std::vector<TextInstance>& dets, const EvalConfig& cfg,
                                   double area_threshold = 0.5);

/// Permutation occurrences over IOU-matched pairs. Texts are compared
/// alphanumeric-only and case-folded; the denominator counts matched pairs
/// with equal nonempty character multisets, the numerator those whose
/// arrangements differ.
struct PermutationCounts {
    std::size_t permutation_pairs = 0;
    std::size_t equal_multiset_pairs = 0;
    std::size_t matched_pairs = 0;

    double fraction() const {
        return equal_multiset_pairs == 0 ? 0.0
                                         : static_cast<double>(permutation_pairs) /
                                               static_cast<double>(equal_multiset_pairs);
    }
};

PermutationCounts count_permutations(const std::vector<TextInstance>& gts,
                                     const std::vector<TextInstance>& dets,
                                     double iou_threshold = 0.5);

/// Sample Pearson correlation coefficient. Throws std::invalid_argument on
/// length mismatch or fewer than two points, CorrelationError when either
/// sequence has zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

/// Per-image human ratings; a single rater's table or the per-image mean of
/// several.
struct HumanScoreTable {
    std::map<std::string, double> ratings;
};

/// Averages several raters' tables per image. Every rater must cover the
/// same image set; throws AlignmentError otherwise.
HumanScoreTable average_raters(const std::vector<std::map<std::string, double>>& raters);

/// Pearson r per metric between per-image metric scores and the human
/// ratings, over image-id-aligned vectors. Throws AlignmentError (listing
/// the offending ids) when the tables do not cover the same images.
std::map<std::string, double> correlate_with_human(
    const std::map<std::string, std::map<std::string, double>>& metric_scores,
    const HumanScoreTable& human);

}  // namespace popeval
