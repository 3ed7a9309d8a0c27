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

#include "popeval/synth.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "popeval/errors.hpp"
#include "popeval/reference_eval.hpp"
#include "popeval/report.hpp"

namespace popeval::synth {

namespace {

namespace fs = std::filesystem;

constexpr int kCharWidth = 10;
constexpr int kCharHeight = 16;
constexpr int kRowStride = 40;
constexpr int kCanvasWidth = 1000;

constexpr const char* kWords[] = {
    "POP",    "EVAL",   "POPEVAL", "Scene",  "TEXT",   "Read",   "World",  "STREET",
    "Coffee", "EXIT",   "Open",    "Closed", "Market", "STATION", "North", "South",
    "Hotel",  "TAXI",   "Bus",     "STOP",   "Pots",   "Park",    "River", "Bridge",
    "Tower",  "GATE",   "Sale",    "Menu",   "Pizza",  "Books",   "Music", "Radio",
    "No21",   "A1",     "Express", "Cafe",
};
constexpr const char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";

struct WordBox {
    std::string word;
    int x = 0;
    int y = 0;
    int width = 0;
    int row = 0;
    bool dont_care = false;
};

int rng_int(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

char rng_letter(std::mt19937_64& rng) {
    return kAlphabet[rng_int(rng, 0, static_cast<int>(sizeof(kAlphabet)) - 2)];
}

Polygon box(int left, int top, int right, int bottom) {
    return Polygon::rectangle(left, top, right, bottom);
}

std::vector<WordBox> layout_words(std::mt19937_64& rng, int word_count, ScenarioKind kind) {
    std::vector<WordBox> words;
    int x = 20;
    int y = 20;
    int row = 0;
    for (int i = 0; i < word_count; ++i) {
        WordBox wb;
        wb.word = kWords[rng_int(rng, 0, static_cast<int>(std::size(kWords)) - 1)];
        wb.width = kCharWidth * static_cast<int>(wb.word.size());
        if (x + wb.width > kCanvasWidth - 40) {
            x = 20;
            y += kRowStride;
            ++row;
        }
        wb.x = x;
        wb.y = y;
        wb.row = row;
        if (kind == ScenarioKind::DontcareOverlap && i % 3 == 1) wb.dont_care = true;
        x += wb.width + rng_int(rng, 12, 28);
        words.push_back(std::move(wb));
    }
    return words;
}

TextInstance word_instance(const WordBox& wb) {
    TextInstance inst{box(wb.x, wb.y, wb.x + wb.width, wb.y + kCharHeight),
                      wb.dont_care ? std::string() : wb.word, wb.dont_care, std::nullopt};
    return inst;
}

// Character-level twin: one single-character quad per character cell;
// don't-care regions stay one word-sized don't-care box.
std::vector<TextInstance> char_twin(const std::vector<WordBox>& words) {
    std::vector<TextInstance> out;
    for (const WordBox& wb : words) {
        if (wb.dont_care) {
            out.push_back(word_instance(wb));
            continue;
        }
        for (std::size_t c = 0; c < wb.word.size(); ++c) {
            const int left = wb.x + kCharWidth * static_cast<int>(c);
            out.push_back(TextInstance{box(left, wb.y, left + kCharWidth, wb.y + kCharHeight),
                                       std::string(1, wb.word[c]), false, std::nullopt});
        }
    }
    return out;
}

TextInstance det(int left, int top, int right, int bottom, std::string transcript) {
    return TextInstance{box(left, top, right, bottom), std::move(transcript), false, std::nullopt};
}

std::string shuffled_differently(std::mt19937_64& rng, const std::string& word) {
    std::string s = word;
    for (int attempt = 0; attempt < 20 && s == word; ++attempt) {
        std::shuffle(s.begin(), s.end(), rng);
    }
    if (s == word) std::reverse(s.begin(), s.end());
    return s;
}

void append_dets_for_word(std::mt19937_64& rng, ScenarioKind kind, const WordBox& wb,
                          bool merged_away, std::vector<TextInstance>& dets) {
    const int len = static_cast<int>(wb.word.size());
    const int right = wb.x + wb.width;
    const int bottom = wb.y + kCharHeight;
    switch (kind) {
        case ScenarioKind::Exact:
            dets.push_back(det(wb.x, wb.y, right, bottom, wb.word));
            break;
        case ScenarioKind::Deletion: {
            std::string t = wb.word;
            const int drop = rng_int(rng, 1, std::min(2, len - 1));
            for (int k = 0; k < drop; ++k) t.erase(rng_int(rng, 0, static_cast<int>(t.size()) - 1), 1);
            dets.push_back(det(wb.x, wb.y, right, bottom, t));
            break;
        }
        case ScenarioKind::Insertion: {
            std::string t = wb.word;
            const int add = rng_int(rng, 1, 2);
            for (int k = 0; k < add; ++k)
                t.insert(t.begin() + rng_int(rng, 0, static_cast<int>(t.size())), rng_letter(rng));
            dets.push_back(det(wb.x, wb.y, right, bottom, t));
            break;
        }
        case ScenarioKind::Substitution: {
            std::string t = wb.word;
            const int swaps = rng_int(rng, 1, std::min(2, len));
            for (int k = 0; k < swaps; ++k) {
                const int pos = rng_int(rng, 0, len - 1);
                char replacement = rng_letter(rng);
                for (int tries = 0; tries < 10 && replacement == t[pos]; ++tries)
                    replacement = rng_letter(rng);
                t[pos] = replacement;
            }
            dets.push_back(det(wb.x, wb.y, right, bottom, t));
            break;
        }
        case ScenarioKind::Split: {
            if (len < 2) {
                dets.push_back(det(wb.x, wb.y, right, bottom, wb.word));
                break;
            }
            const int cut = rng_int(rng, 1, len - 1);
            const int mid = wb.x + kCharWidth * cut;
            dets.push_back(det(wb.x, wb.y, mid, bottom, wb.word.substr(0, cut)));
            dets.push_back(det(mid, wb.y, right, bottom, wb.word.substr(cut)));
            break;
        }
        case ScenarioKind::Permutation:
            dets.push_back(det(wb.x, wb.y, right, bottom, shuffled_differently(rng, wb.word)));
            break;
        case ScenarioKind::DontcareOverlap: {
            if (wb.dont_care) {
                // Fully covered junk detection: suppressed by preprocessing.
                std::string junk;
                for (int k = 0; k < 3; ++k) junk.push_back(rng_letter(rng));
                dets.push_back(det(wb.x + 2, wb.y + 2, right - 2, bottom - 2, junk));
                // Straddling detection at area precision exactly 0.5: kept.
                dets.push_back(det(wb.x - 6, wb.y, wb.x + 6, bottom, "zz"));
            } else {
                dets.push_back(det(wb.x, wb.y, right, bottom, wb.word));
            }
            break;
        }
        case ScenarioKind::Merge:
            if (!merged_away) dets.push_back(det(wb.x, wb.y, right, bottom, wb.word));
            break;
        case ScenarioKind::NoOverlap:
            break;
    }
}

void apply_jitter(std::mt19937_64& rng, double fraction, std::vector<TextInstance>& dets) {
    if (fraction <= 0.0) return;
    std::vector<TextInstance> jittered;
    jittered.reserve(dets.size());
    for (const TextInstance& d : dets) {
        double left = d.polygon.vertices()[0].x;
        double top = d.polygon.vertices()[0].y;
        double right = left;
        double bottom = top;
        for (const Point& p : d.polygon.vertices()) {
            left = std::min(left, p.x);
            top = std::min(top, p.y);
            right = std::max(right, p.x);
            bottom = std::max(bottom, p.y);
        }
        const int dx = std::max(1, static_cast<int>((right - left) * fraction));
        const int dy = std::max(1, static_cast<int>((bottom - top) * fraction));
        int l = static_cast<int>(left) + rng_int(rng, -dx, dx);
        int r = static_cast<int>(right) + rng_int(rng, -dx, dx);
        int t = static_cast<int>(top) + rng_int(rng, -dy, dy);
        int b = static_cast<int>(bottom) + rng_int(rng, -dy, dy);
        if (r <= l) r = l + 2;
        if (b <= t) b = t + 2;
        jittered.push_back(TextInstance{box(l, t, r, b), d.transcript, false, d.confidence});
    }
    dets = std::move(jittered);
}

}  // namespace

ScenarioKind kind_from_name(std::string_view name) {
    for (ScenarioKind k : kAllKinds) {
        if (kind_name(k) == name) return k;
    }
    throw Error("unknown scenario kind '" + std::string(name) + "'");
}

std::string_view kind_name(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::Exact: return "exact";
        case ScenarioKind::Deletion: return "deletion";
        case ScenarioKind::Insertion: return "insertion";
        case ScenarioKind::Substitution: return "substitution";
        case ScenarioKind::Split: return "split";
        case ScenarioKind::Merge: return "merge";
        case ScenarioKind::Permutation: return "permutation";
        case ScenarioKind::DontcareOverlap: return "dontcare_overlap";
        case ScenarioKind::NoOverlap: return "no_overlap";
    }
    return "unknown";
}

Scenario generate(const ScenarioSpec& spec, const EvalConfig& cfg) {
    if (spec.word_count < 1) throw std::invalid_argument("word_count must be at least 1");
    std::mt19937_64 rng(spec.seed);

    const std::vector<WordBox> words = layout_words(rng, spec.word_count, spec.kind);

    Scenario scenario;
    for (const WordBox& wb : words) scenario.gts.push_back(word_instance(wb));
    scenario.char_gts = char_twin(words);

    if (spec.kind == ScenarioKind::Merge) {
        // Merge same-row neighbours pairwise; odd words keep an exact det.
        std::vector<bool> merged(words.size(), false);
        for (std::size_t i = 0; i + 1 < words.size(); ++i) {
            if (merged[i] || merged[i + 1] || words[i].row != words[i + 1].row) continue;
            merged[i] = merged[i + 1] = true;
            scenario.dets.push_back(det(words[i].x, words[i].y,
                                        words[i + 1].x + words[i + 1].width,
                                        words[i].y + kCharHeight,
                                        words[i].word + words[i + 1].word));
        }
        for (std::size_t i = 0; i < words.size(); ++i) {
            append_dets_for_word(rng, spec.kind, words[i], merged[i], scenario.dets);
        }
    } else if (spec.kind == ScenarioKind::NoOverlap) {
        // Correct transcripts placed in an empty band below every row.
        int max_y = 0;
        for (const WordBox& wb : words) max_y = std::max(max_y, wb.y);
        int x = 20;
        const int y = max_y + kRowStride + 60;
        for (const WordBox& wb : words) {
            scenario.dets.push_back(det(x, y, x + wb.width, y + kCharHeight, wb.word));
            x += wb.width + 20;
        }
    } else {
        for (const WordBox& wb : words) {
            append_dets_for_word(rng, spec.kind, wb, false, scenario.dets);
        }
    }

    apply_jitter(rng, spec.det_jitter, scenario.dets);

    scenario.expected = reference::evaluate_image(scenario.gts, scenario.dets, cfg);
    return scenario;
}

void generate_corpus(const fs::path& out_dir, int n, std::uint64_t seed, const EvalConfig& cfg) {
    if (n < 1) throw std::invalid_argument("corpus size must be at least 1");
    const fs::path gt_dir = out_dir / "gt";
    const fs::path det_dir = out_dir / "det";
    std::error_code ec;
    fs::create_directories(gt_dir, ec);
    fs::create_directories(det_dir, ec);
    if (!fs::is_directory(gt_dir) || !fs::is_directory(det_dir)) {
        throw IoError("cannot create fixture directories under '" + out_dir.string() + "'");
    }

    std::map<std::string, ImageEvalResult> expected;
    for (int i = 1; i <= n; ++i) {
        ScenarioSpec spec;
        spec.kind = kAllKinds[(i - 1) % std::size(kAllKinds)];
        spec.seed = seed * 1000003ULL + static_cast<std::uint64_t>(i);
        spec.word_count = 1 + (i % 5);
        const Scenario scenario = generate(spec, cfg);

        const std::string id = "img_" + std::to_string(i);
        ImageAnnotation gt{id, scenario.gts};
        ImageAnnotation dt{id, scenario.dets};
        report::write_text_file(gt_dir / ("gt_" + id + ".txt"),
                                serialize_annotation(gt, AnnotationFormat::Icdar2015, false,
                                                     cfg.dontcare_token));
        report::write_text_file(det_dir / ("res_" + id + ".txt"),
                                serialize_annotation(dt, AnnotationFormat::Icdar2015));
        expected.emplace(id, scenario.expected);
    }

    report::Value rows = report::Value::array();
    for (const auto& [id, r] : expected) {
        report::Value row;
        row["image_id"] = report::Value::text(id);
        row["removed"] = report::Value::fixed(r.removed_weight);
        row["gt_chars"] = report::Value::integer(r.gt_char_total);
        row["det_chars"] = report::Value::integer(r.det_char_total);
        row["precision"] = report::Value::fixed(r.precision);
        row["recall"] = report::Value::fixed(r.recall);
        row["fscore"] = report::Value::fixed(r.fscore);
        rows.push_back(std::move(row));
    }
    report::Value manifest;
    manifest["per_image"] = std::move(rows);
    report::write_report(manifest, out_dir / "expected.json");
}

}  // namespace popeval::synth
