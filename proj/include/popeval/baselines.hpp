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

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "popeval/annotation.hpp"
#include "popeval/eval.hpp"

namespace popeval {

/// Unit-cost edit distance (insert / delete / substitute) over Unicode
/// scalar values.
int levenshtein(std::u32string_view a, std::u32string_view b);
int levenshtein(std::string_view a_utf8, std::string_view b_utf8);

/// One-to-one matching by IOU: each GT and each detection appears in at
/// most one pair and every pair's IOU strictly exceeds the threshold.
struct Matching {
    struct Pair {
        std::size_t gt_index;
        std::size_t det_index;
        double iou;
    };
    std::vector<Pair> pairs;
    std::vector<std::size_t> unmatched_gts;
    std::vector<std::size_t> unmatched_dets;
};

/// Greedy GT-major assignment: GTs in input order each take the unused
/// detection of highest IOU above the threshold. Don't-care filtering is
/// the caller's job (see filter_dontcare).
Matching match_iou(const std::vector<TextInstance>& gts, const std::vector<TextInstance>& dets,
                   double threshold = 0.5);

/// Detection-only P/R/F over matched pair counts.
ScoreTriple detection_scores(const std::vector<TextInstance>& gts,
                             const std::vector<TextInstance>& dets, double threshold = 0.5);

class Vocabulary {
public:
    /// One word per line, UTF-8; words stored normalized. Throws Error when
    /// the file holds no words.
    static Vocabulary from_text(std::string_view data, const NormalizeConfig& norm);

    bool contains(const std::string& normalized_word) const {
        return words_.count(normalized_word) > 0;
    }
    std::size_t size() const noexcept { return words_.size(); }

private:
    std::unordered_set<std::string> words_;
};

/// Instance counts behind the exact-match score; poolable across images
/// for micro-averaged corpus figures.
struct ExactMatchCounts {
    std::size_t true_positives = 0;
    std::size_t gt_considered = 0;
    std::size_t det_considered = 0;

    void merge(const ExactMatchCounts& other) {
        true_positives += other.true_positives;
        gt_considered += other.gt_considered;
        det_considered += other.det_considered;
    }
    ScoreTriple scores() const {
        return score_from_counts(static_cast<double>(true_positives),
                                 static_cast<double>(gt_considered),
                                 static_cast<double>(det_considered));
    }
};

ExactMatchCounts exact_match_counts(const std::vector<TextInstance>& gts,
                                    const std::vector<TextInstance>& dets, double threshold,
                                    const Vocabulary* vocab, const EvalConfig& cfg);

/// Exact-transcript end-to-end scores over IOU matching. A matched pair is
/// a true positive iff the normalized transcripts are equal. With a
/// vocabulary, GTs whose word is absent are treated as don't-care: they
/// leave the recall denominator and their matched detection leaves the
/// precision denominator.
ScoreTriple exact_match_e2e(const std::vector<TextInstance>& gts,
                            const std::vector<TextInstance>& dets, double threshold,
                            const Vocabulary* vocab, const EvalConfig& cfg);

/// Normalized-edit-distance contributions of one image: every matched pair
/// adds levenshtein/max(len), every unmatched GT or detection adds 1 (blank
/// hypothesis).
struct NedStats {
    double total_ned = 0.0;
    std::size_t contributions = 0;

    void merge(const NedStats& other) {
        total_ned += other.total_ned;
        contributions += other.contributions;
    }
    /// 1 - mean NED; 1.0 when there is nothing to score.
    double value() const {
        return contributions == 0 ? 1.0 : 1.0 - total_ned / static_cast<double>(contributions);
    }
};

NedStats ned_stats(const std::vector<TextInstance>& gts, const std::vector<TextInstance>& dets,
                   double threshold, const EvalConfig& cfg);

double one_minus_ned(const std::vector<TextInstance>& gts, const std::vector<TextInstance>& dets,
                     double threshold, const EvalConfig& cfg);

/// A confidence-ranked detection outcome; pooled across images for corpus
/// AP.
struct RankedDetection {
    double confidence = 0.0;
    bool correct = false;
};

/// Ranks one image's detections by descending confidence (ties keep input
/// order) and marks each correct iff some unused GT has IOU strictly above
/// the threshold and an equal normalized transcript; the highest-IOU
/// qualifying GT is consumed. Throws ConfigError when a detection lacks
/// confidence.
std::vector<RankedDetection> rank_detections(const std::vector<TextInstance>& gts,
                                             const std::vector<TextInstance>& dets,
                                             double threshold, const EvalConfig& cfg);

/// Area under the precision envelope over recall (all-point interpolation)
/// for a pooled ranked list. `gt_count` is the recall denominator.
double average_precision_from(std::vector<RankedDetection> ranked, std::size_t gt_count);

double average_precision(const std::vector<TextInstance>& gts,
                         const std::vector<TextInstance>& dets, double threshold,
                         const EvalConfig& cfg);

}  // namespace popeval
