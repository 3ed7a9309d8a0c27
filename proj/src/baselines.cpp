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

#include "popeval/baselines.hpp"

#include <algorithm>
#include <numeric>

#include "popeval/errors.hpp"
#include "popeval/text.hpp"

namespace popeval {

namespace {

std::vector<std::u32string> normalized_texts(const std::vector<TextInstance>& instances,
                                             const EvalConfig& cfg) {
    const NormalizeConfig norm = cfg.normalization();
    std::vector<std::u32string> out;
    out.reserve(instances.size());
    for (const TextInstance& inst : instances) {
        out.push_back(normalize_codepoints(utf8_decode(inst.transcript), norm));
    }
    return out;
}

}  // namespace

int levenshtein(std::u32string_view a, std::u32string_view b) {
    if (a.size() < b.size()) std::swap(a, b);
    std::vector<int> row(b.size() + 1);
    std::iota(row.begin(), row.end(), 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        int diagonal = row[0];
        row[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const int previous = row[j];
            const int substitution = diagonal + (a[i - 1] == b[j - 1] ? 0 : 1);
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, substitution});
            diagonal = previous;
        }
    }
    return row[b.size()];
}

int levenshtein(std::string_view a_utf8, std::string_view b_utf8) {
    return levenshtein(utf8_decode(a_utf8), utf8_decode(b_utf8));
}

Matching match_iou(const std::vector<TextInstance>& gts, const std::vector<TextInstance>& dets,
                   double threshold) {
    Matching m;
    std::vector<bool> det_used(dets.size(), false);
    for (std::size_t g = 0; g < gts.size(); ++g) {
        double best_iou = threshold;  // strictly above
        std::size_t best_det = dets.size();
        for (std::size_t d = 0; d < dets.size(); ++d) {
            if (det_used[d]) continue;
            const double overlap = iou(gts[g].polygon, dets[d].polygon);
            if (overlap > best_iou) {
                best_iou = overlap;
                best_det = d;
            }
        }
        if (best_det < dets.size()) {
            det_used[best_det] = true;
            m.pairs.push_back({g, best_det, best_iou});
        } else {
            m.unmatched_gts.push_back(g);
        }
    }
    for (std::size_t d = 0; d < dets.size(); ++d) {
        if (!det_used[d]) m.unmatched_dets.push_back(d);
    }
    return m;
}

ScoreTriple detection_scores(const std::vector<TextInstance>& gts,
                             const std::vector<TextInstance>& dets, double threshold) {
    const Matching m = match_iou(gts, dets, threshold);
    return score_from_counts(static_cast<double>(m.pairs.size()),
                             static_cast<double>(gts.size()), static_cast<double>(dets.size()));
}

Vocabulary Vocabulary::from_text(std::string_view data, const NormalizeConfig& norm) {
    Vocabulary v;
    if (data.substr(0, 3) == "\xEF\xBB\xBF") data.remove_prefix(3);
    std::size_t pos = 0;
    while (pos <= data.size()) {
        std::size_t nl = data.find('\n', pos);
        std::string_view line = data.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) {
            if (!utf8_valid(line)) throw Error("vocabulary entry is not valid UTF-8");
            std::string w = normalize_transcript(line, norm);
            if (!w.empty()) v.words_.insert(std::move(w));
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    if (v.words_.empty()) throw Error("vocabulary is empty");
    return v;
}

ExactMatchCounts exact_match_counts(const std::vector<TextInstance>& gts,
                                    const std::vector<TextInstance>& dets, double threshold,
                                    const Vocabulary* vocab, const EvalConfig& cfg) {
    const NormalizeConfig norm = cfg.normalization();
    const Matching m = match_iou(gts, dets, threshold);

    std::vector<bool> gt_excluded(gts.size(), false);
    if (vocab != nullptr) {
        for (std::size_t g = 0; g < gts.size(); ++g) {
            gt_excluded[g] = !vocab->contains(normalize_transcript(gts[g].transcript, norm));
        }
    }

    ExactMatchCounts counts;
    std::size_t excluded_dets = 0;
    for (const Matching::Pair& p : m.pairs) {
        if (gt_excluded[p.gt_index]) {
            ++excluded_dets;
            continue;
        }
        if (normalize_transcript(gts[p.gt_index].transcript, norm) ==
            normalize_transcript(dets[p.det_index].transcript, norm)) {
            ++counts.true_positives;
        }
    }
    counts.gt_considered =
        gts.size() -
        static_cast<std::size_t>(std::count(gt_excluded.begin(), gt_excluded.end(), true));
    counts.det_considered = dets.size() - excluded_dets;
    return counts;
}

ScoreTriple exact_match_e2e(const std::vector<TextInstance>& gts,
                            const std::vector<TextInstance>& dets, double threshold,
                            const Vocabulary* vocab, const EvalConfig& cfg) {
    return exact_match_counts(gts, dets, threshold, vocab, cfg).scores();
}

NedStats ned_stats(const std::vector<TextInstance>& gts, const std::vector<TextInstance>& dets,
                   double threshold, const EvalConfig& cfg) {
    const Matching m = match_iou(gts, dets, threshold);
    const auto gt_texts = normalized_texts(gts, cfg);
    const auto det_texts = normalized_texts(dets, cfg);

    NedStats stats;
    for (const Matching::Pair& p : m.pairs) {
        const std::u32string& a = gt_texts[p.gt_index];
        const std::u32string& b = det_texts[p.det_index];
        const std::size_t longest = std::max(a.size(), b.size());
        const double ned =
            longest == 0 ? 0.0
                         : static_cast<double>(levenshtein(a, b)) / static_cast<double>(longest);
        stats.total_ned += ned;
        ++stats.contributions;
    }
    // Blank hypothesis for every unmatched instance on either side.
    stats.total_ned += static_cast<double>(m.unmatched_gts.size() + m.unmatched_dets.size());
    stats.contributions += m.unmatched_gts.size() + m.unmatched_dets.size();
    return stats;
}

double one_minus_ned(const std::vector<TextInstance>& gts, const std::vector<TextInstance>& dets,
                     double threshold, const EvalConfig& cfg) {
    return ned_stats(gts, dets, threshold, cfg).value();
}

std::vector<RankedDetection> rank_detections(const std::vector<TextInstance>& gts,
                                             const std::vector<TextInstance>& dets,
                                             double threshold, const EvalConfig& cfg) {
    for (const TextInstance& d : dets) {
        if (!d.confidence) {
            throw ConfigError("average precision requires a confidence on every detection");
        }
    }
    const auto gt_texts = normalized_texts(gts, cfg);
    const auto det_texts = normalized_texts(dets, cfg);

    std::vector<std::size_t> order(dets.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return *dets[a].confidence > *dets[b].confidence;
    });

    std::vector<bool> gt_used(gts.size(), false);
    std::vector<RankedDetection> ranked;
    ranked.reserve(dets.size());
    for (std::size_t d : order) {
        double best_iou = threshold;
        std::size_t best_gt = gts.size();
        for (std::size_t g = 0; g < gts.size(); ++g) {
            if (gt_used[g] || gt_texts[g] != det_texts[d]) continue;
            const double overlap = iou(gts[g].polygon, dets[d].polygon);
            if (overlap > best_iou) {
                best_iou = overlap;
                best_gt = g;
            }
        }
        RankedDetection entry{*dets[d].confidence, best_gt < gts.size()};
        if (entry.correct) gt_used[best_gt] = true;
        ranked.push_back(entry);
    }
    return ranked;
}

double average_precision_from(std::vector<RankedDetection> ranked, std::size_t gt_count) {
    if (gt_count == 0) return ranked.empty() ? 1.0 : 0.0;
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const RankedDetection& a, const RankedDetection& b) {
                         return a.confidence > b.confidence;
                     });
    std::vector<double> precision(ranked.size());
    std::vector<double> recall(ranked.size());
    std::size_t tp = 0;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        if (ranked[i].correct) ++tp;
        precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
        recall[i] = static_cast<double>(tp) / static_cast<double>(gt_count);
    }
    // Precision envelope from the right, then sum over recall increments.
    for (std::size_t i = ranked.size(); i-- > 1;) {
        precision[i - 1] = std::max(precision[i - 1], precision[i]);
    }
    double ap = 0.0;
    double prev_recall = 0.0;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        if (recall[i] > prev_recall) {
            ap += (recall[i] - prev_recall) * precision[i];
            prev_recall = recall[i];
        }
    }
    return ap;
}

double average_precision(const std::vector<TextInstance>& gts,
                         const std::vector<TextInstance>& dets, double threshold,
                         const EvalConfig& cfg) {
    return average_precision_from(rank_detections(gts, dets, threshold, cfg), gts.size());
}

}  // namespace popeval
