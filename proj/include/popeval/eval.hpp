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

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "popeval/annotation.hpp"
#include "popeval/text.hpp"

namespace popeval {

struct EvalConfig {
    /// Transcripts compared case-insensitively (selectable; competition
    /// conventions default to case-insensitive).
    bool case_fold = true;
    std::string dontcare_token = "###";
    /// A detection is suppressed when its area precision against any single
    /// don't-care GT strictly exceeds this.
    double dontcare_overlap_threshold = 0.5;
    /// Polygons are "intersecting" when their intersection area strictly
    /// exceeds this; edge-touching boxes do not intersect.
    double intersection_epsilon = 1e-9;

    NormalizeConfig normalization() const { return NormalizeConfig{.case_fold = case_fold}; }

    /// Throws ConfigError when a field is outside its documented range.
    void validate() const;
};

struct ScoreTriple {
    double precision = 0.0;
    double recall = 0.0;
    double fscore = 0.0;
};

/// Score conventions shared across the toolkit: precision is
/// matched/det_total, defined as 0 when det_total is 0 with gt_total > 0
/// and as 1 when both totals are 0 (perfect-empty); recall symmetric;
/// fscore is the harmonic mean, 0 when either side is 0.
ScoreTriple score_from_counts(double matched, double gt_total, double det_total);

struct ImageEvalResult {
    double removed_weight = 0.0;  // fractional under tie weighting
    long long gt_char_total = 0;
    long long det_char_total = 0;
    double precision = 0.0;
    double recall = 0.0;
    double fscore = 0.0;
    // Diagnostics (not part of the report schema).
    int rounds = 0;
    long long remaining_gt_chars = 0;
};

/// Evaluation-time view of one instance: the normalized transcript shrinks
/// as characters are removed; alive goes false exactly once (GT when its
/// text empties, detection when it retires) and is never reset.
struct LiveInstance {
    const TextInstance* source = nullptr;
    std::size_t input_index = 0;
    std::u32string remaining_text;
    bool alive = true;
    Point center{};
    double distance_to_origin = 0.0;
};

std::vector<LiveInstance> make_live(const std::vector<TextInstance>& instances,
                                    const EvalConfig& cfg);

/// Relations of one inspection round, as indices into the live pools.
/// A GT appears in at most one of the two collections; one_to_many groups
/// have at least two detections.
struct RelationSets {
    std::vector<std::pair<std::size_t, std::size_t>> one_to_one;
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> one_to_many;
};

/// Pairwise intersection areas, indexed [gt][det]; computed once per image
/// since geometry never changes across rounds.
using IntersectionMatrix = std::vector<std::vector<double>>;

IntersectionMatrix intersection_matrix(const std::vector<LiveInstance>& gts,
                                       const std::vector<LiveInstance>& dets);

/// Per live GT: detections whose intersection area strictly exceeds
/// epsilon. Exactly one -> one_to_one, two or more -> one_to_many, none ->
/// the GT is omitted this round.
RelationSets inspect_relations(const std::vector<LiveInstance>& gts,
                               const std::vector<LiveInstance>& dets,
                               const IntersectionMatrix& inter, double epsilon);

/// The candidate whose centroid is nearest the image origin; ties broken by
/// smaller centroid y, then smaller centroid x, then input order. Throws
/// std::invalid_argument on an empty candidate list.
std::size_t select_nearest_gt(const std::vector<LiveInstance>& gts,
                              std::span<const std::size_t> candidates);

/// All candidates achieving the maximal area recall on the GT within an
/// absolute tolerance of 1e-9, ordered by detection centroid distance to
/// origin then input order. Each carries weight 1/n.
std::vector<std::size_t> select_best_dets(const LiveInstance& gt,
                                          const std::vector<LiveInstance>& dets,
                                          std::span<const std::size_t> candidates);

/// One character-removal pass: walk det.remaining_text left to right; every
/// character still present in gt.remaining_text deletes its leftmost
/// occurrence there, disappears from the detection text, and adds `weight`
/// to the returned tally. The GT dies when its text empties.
double character_removal(LiveInstance& gt, LiveInstance& det, double weight);

/// Removes don't-care GTs, and every detection whose area precision against
/// any single don't-care GT strictly exceeds the configured threshold.
std::pair<std::vector<TextInstance>, std::vector<TextInstance>> filter_dontcare(
    const std::vector<TextInstance>& gts, const std::vector<TextInstance>& dets,
    const EvalConfig& cfg);

/// Full character-removal evaluation of one image.
///
/// After don't-care filtering and recording of the character totals, rounds
/// of relation inspection run until no relation remains. A round with
/// one-to-one pairs processes all of them in nearest-GT order — a detection
/// shared by several pairs is consumed across them, so each detection
/// character counts at most once — then retires every participating
/// detection. Otherwise one one-to-many group (nearest GT) is resolved
/// through the best-area-recall detections with reciprocal tie weights.
/// GTs persist across rounds while text remains; detections never return.
ImageEvalResult evaluate_image(const std::vector<TextInstance>& gts,
                               const std::vector<TextInstance>& dets,
                               const EvalConfig& cfg = {});

struct CorpusScores {
    std::size_t image_count = 0;
    double removed_weight = 0.0;
    long long gt_char_total = 0;
    long long det_char_total = 0;
    /// Micro-averaged over summed character counts; empty for an empty
    /// corpus (reported as null).
    std::optional<ScoreTriple> scores;
};

CorpusScores aggregate(std::span<const ImageEvalResult> results);

}  // namespace popeval
