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
#include <random>

#include "popeval/eval.hpp"
#include "popeval/reference_eval.hpp"
#include "popeval/synth.hpp"
#include "support.hpp"

using namespace popeval;
using popeval::testing::box;
using popeval::testing::dont_care;
using popeval::testing::inst;
using popeval::testing::popeval_gt;

namespace {

std::vector<std::size_t> indices(std::size_t n) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    return idx;
}

}  // namespace

TEST_CASE("don't-care filtering") {
    const EvalConfig cfg;
    SUBCASE("detection inside a don't-care region is suppressed") {
        const auto [gts, dets] =
            filter_dontcare({dont_care(0, 0, 100, 100)}, {inst(10, 10, 30, 30, "x")}, cfg);
        CHECK(gts.empty());
        CHECK(dets.empty());
    }
    SUBCASE("area precision 0.3 stays below the 0.5 threshold") {
        // detection 10x10 overlapping the don't-care box by 3x10
        const auto [gts, dets] =
            filter_dontcare({dont_care(0, 0, 10, 10)}, {inst(7, 0, 17, 10, "x")}, cfg);
        CHECK(gts.empty());
        CHECK(dets.size() == 1);
    }
    SUBCASE("no don't-care regions, nothing changes") {
        const auto [gts, dets] =
            filter_dontcare({inst(0, 0, 10, 10, "a")}, {inst(0, 0, 10, 10, "a")}, cfg);
        CHECK(gts.size() == 1);
        CHECK(dets.size() == 1);
    }
}

TEST_CASE("relation inspection") {
    const EvalConfig cfg;
    SUBCASE("single overlapping pair") {
        const std::vector<TextInstance> gt_src = {inst(0, 0, 10, 10, "a")};
        const std::vector<TextInstance> det_src = {inst(2, 0, 12, 10, "a")};
        const auto gts = make_live(gt_src, cfg);
        const auto dets = make_live(det_src, cfg);
        const auto rel = inspect_relations(gts, dets, intersection_matrix(gts, dets),
                                           cfg.intersection_epsilon);
        REQUIRE(rel.one_to_one.size() == 1);
        CHECK(rel.one_to_many.empty());
    }
    SUBCASE("one GT split over two detections forms a group") {
        const std::vector<TextInstance> gt_src = {popeval_gt()};
        const std::vector<TextInstance> det_src = {inst(0, 0, 30, 10, "POP"),
                                                   inst(30, 0, 70, 10, "EVAL")};
        const auto gts = make_live(gt_src, cfg);
        const auto dets = make_live(det_src, cfg);
        const auto rel = inspect_relations(gts, dets, intersection_matrix(gts, dets),
                                           cfg.intersection_epsilon);
        CHECK(rel.one_to_one.empty());
        REQUIRE(rel.one_to_many.size() == 1);
        CHECK(rel.one_to_many[0].second.size() == 2);
    }
    SUBCASE("two GTs over the same detection give two one-to-one pairs") {
        const std::vector<TextInstance> gt_src = {inst(0, 0, 30, 10, "POP"),
                                                  inst(40, 0, 80, 10, "EVAL")};
        const std::vector<TextInstance> det_src = {inst(0, 0, 80, 10, "POPEVAL")};
        const auto gts = make_live(gt_src, cfg);
        const auto dets = make_live(det_src, cfg);
        const auto rel = inspect_relations(gts, dets, intersection_matrix(gts, dets),
                                           cfg.intersection_epsilon);
        CHECK(rel.one_to_one.size() == 2);
        CHECK(rel.one_to_many.empty());
        CHECK(rel.one_to_one[0].second == rel.one_to_one[1].second);
    }
    SUBCASE("edge-touching boxes are not a relation") {
        const std::vector<TextInstance> gt_src = {inst(0, 0, 10, 10, "a")};
        const std::vector<TextInstance> det_src = {inst(10, 0, 20, 10, "a")};
        const auto gts = make_live(gt_src, cfg);
        const auto dets = make_live(det_src, cfg);
        const auto rel = inspect_relations(gts, dets, intersection_matrix(gts, dets),
                                           cfg.intersection_epsilon);
        CHECK(rel.one_to_one.empty());
        CHECK(rel.one_to_many.empty());
    }
}

TEST_CASE("nearest GT selection") {
    const EvalConfig cfg;
    SUBCASE("distance 5 beats distance sqrt(50)") {
        const std::vector<TextInstance> src = {inst(0, 0, 10, 10, "a"),  // centroid (5,5)
                                               inst(2, 3, 4, 5, "b")};   // centroid (3,4)
        const auto gts = make_live(src, cfg);
        CHECK(select_nearest_gt(gts, indices(2)) == 1);
    }
    SUBCASE("single candidate") {
        const std::vector<TextInstance> src = {inst(0, 0, 10, 10, "a")};
        const auto gts = make_live(src, cfg);
        CHECK(select_nearest_gt(gts, indices(1)) == 0);
    }
    SUBCASE("equidistant centroids break on smaller y") {
        const std::vector<TextInstance> src = {inst(-1, 4, 1, 6, "a"),   // centroid (0,5)
                                               inst(4, -1, 6, 1, "b")};  // centroid (5,0)
        const auto gts = make_live(src, cfg);
        CHECK(select_nearest_gt(gts, indices(2)) == 1);
    }
    SUBCASE("empty candidates violate the contract") {
        const auto gts = make_live({}, cfg);
        CHECK_THROWS_AS(select_nearest_gt(gts, {}), std::invalid_argument);
    }
}

TEST_CASE("best detection selection") {
    const EvalConfig cfg;
    const std::vector<TextInstance> gt_src = {inst(0, 0, 10, 10, "abcdefghij")};
    const auto gt = make_live(gt_src, cfg);
    SUBCASE("strict maximum selects one") {
        const std::vector<TextInstance> det_src = {inst(0, 0, 6, 10, "x"),
                                                   inst(0, 0, 3, 10, "y")};  // recalls 0.6, 0.3
        const auto dets = make_live(det_src, cfg);
        const auto best = select_best_dets(gt[0], dets, indices(2));
        REQUIRE(best.size() == 1);
        CHECK(best[0] == 0);
    }
    SUBCASE("exact tie returns both, nearest first") {
        const std::vector<TextInstance> det_src = {inst(5, 0, 10, 10, "x"),
                                                   inst(0, 0, 5, 10, "y")};  // both 0.5
        const auto dets = make_live(det_src, cfg);
        const auto best = select_best_dets(gt[0], dets, indices(2));
        REQUIRE(best.size() == 2);
        CHECK(best[0] == 1);  // left half is closer to the origin
        CHECK(best[1] == 0);
    }
    SUBCASE("single candidate returns itself") {
        const std::vector<TextInstance> det_src = {inst(0, 0, 6, 10, "x")};
        const auto dets = make_live(det_src, cfg);
        CHECK(select_best_dets(gt[0], dets, indices(1)) == std::vector<std::size_t>{0});
    }
}

TEST_CASE("character removal") {
    const EvalConfig cfg;
    SUBCASE("POPEVAL x EVAL removes four") {
        const std::vector<TextInstance> gt_src = {popeval_gt()};
        const std::vector<TextInstance> det_src = {inst(30, 0, 70, 10, "EVAL")};
        auto gts = make_live(gt_src, cfg);
        auto dets = make_live(det_src, cfg);
        CHECK(character_removal(gts[0], dets[0], 1.0) == doctest::Approx(4.0));
        CHECK(gts[0].remaining_text == U"pop");
        CHECK(dets[0].remaining_text.empty());
        CHECK(gts[0].alive);
    }
    SUBCASE("POP x OP consumes the leftmost P") {
        const std::vector<TextInstance> gt_src = {inst(0, 0, 30, 10, "POP")};
        const std::vector<TextInstance> det_src = {inst(10, 0, 30, 10, "OP")};
        auto gts = make_live(gt_src, cfg);
        auto dets = make_live(det_src, cfg);
        CHECK(character_removal(gts[0], dets[0], 1.0) == doctest::Approx(2.0));
        CHECK(gts[0].remaining_text == U"p");
    }
    SUBCASE("disjoint alphabets remove nothing") {
        const std::vector<TextInstance> gt_src = {inst(0, 0, 30, 10, "ABC")};
        const std::vector<TextInstance> det_src = {inst(0, 0, 30, 10, "XYZ")};
        auto gts = make_live(gt_src, cfg);
        auto dets = make_live(det_src, cfg);
        CHECK(character_removal(gts[0], dets[0], 1.0) == doctest::Approx(0.0));
        CHECK(gts[0].remaining_text == U"abc");
        CHECK(dets[0].remaining_text == U"xyz");
    }
    SUBCASE("a GT dies when its text empties") {
        const std::vector<TextInstance> gt_src = {inst(0, 0, 30, 10, "AB")};
        const std::vector<TextInstance> det_src = {inst(0, 0, 30, 10, "BA")};
        auto gts = make_live(gt_src, cfg);
        auto dets = make_live(det_src, cfg);
        CHECK(character_removal(gts[0], dets[0], 1.0) == doctest::Approx(2.0));
        CHECK_FALSE(gts[0].alive);
    }
}

// The four worked split/overlap cases on the seven-cell word. Detection
// widths are chosen so the area recalls are never accidentally tied.
TEST_CASE("golden character-removal cases") {
    const EvalConfig cfg;
    SUBCASE("A: POP + EVAL recover everything") {
        const auto r = evaluate_image({popeval_gt()},
                                      {inst(0, 0, 30, 10, "POP"), inst(30, 0, 70, 10, "EVAL")}, cfg);
        CHECK(r.removed_weight == doctest::Approx(7.0));
        CHECK(r.precision == doctest::Approx(1.0));
        CHECK(r.recall == doctest::Approx(1.0));
    }
    SUBCASE("B: deletion, OP + EVAL") {
        const auto r = evaluate_image({popeval_gt()},
                                      {inst(10, 0, 30, 10, "OP"), inst(30, 0, 70, 10, "EVAL")}, cfg);
        CHECK(r.removed_weight == doctest::Approx(6.0));
        CHECK(r.gt_char_total == 7);
        CHECK(r.det_char_total == 6);
        CHECK(r.precision == doctest::Approx(1.0));
        CHECK(r.recall == doctest::Approx(6.0 / 7.0));
        CHECK(r.remaining_gt_chars == 1);
    }
    SUBCASE("C: insertion, POPE + EVAL") {
        const auto r = evaluate_image({popeval_gt()},
                                      {inst(0, 0, 38, 10, "POPE"), inst(30, 0, 70, 10, "EVAL")}, cfg);
        CHECK(r.removed_weight == doctest::Approx(7.0));
        CHECK(r.recall == doctest::Approx(1.0));
        CHECK(r.precision == doctest::Approx(7.0 / 8.0));
        CHECK(r.remaining_gt_chars == 0);
    }
    SUBCASE("D: complicated, DOP + EW") {
        const auto r = evaluate_image({popeval_gt()},
                                      {inst(0, 0, 30, 10, "DOP"), inst(30, 0, 50, 10, "EW")}, cfg);
        CHECK(r.removed_weight == doctest::Approx(3.0));
        CHECK(r.recall == doctest::Approx(3.0 / 7.0));
        CHECK(r.precision == doctest::Approx(3.0 / 5.0));
        CHECK(r.remaining_gt_chars == 4);
    }
}

TEST_CASE("merged detection is consumed across pairs within a round") {
    const EvalConfig cfg;
    const auto r = evaluate_image({inst(0, 0, 30, 10, "POP"), inst(40, 0, 80, 10, "EVAL")},
                                  {inst(0, 0, 80, 10, "POPEVAL")}, cfg);
    CHECK(r.removed_weight == doctest::Approx(7.0));
    CHECK(r.precision == doctest::Approx(1.0));
    CHECK(r.recall == doctest::Approx(1.0));
}

TEST_CASE("one-to-one pairs win the round over a one-to-many group") {
    const EvalConfig cfg;
    // GT1 "AB" sees only the wide detection; GT2 "CD" sees the wide
    // detection and a small "D" detection. Round 1 must process the
    // (GT1, wide) pair, consume "ab" from it and retire it; round 2 then
    // pairs GT2 with the small detection.
    const std::vector<TextInstance> gts = {inst(0, 0, 20, 10, "AB"), inst(30, 0, 50, 10, "CD")};
    const std::vector<TextInstance> dets = {inst(0, 0, 50, 10, "ABCD"), inst(40, 0, 50, 10, "D")};
    const auto r = evaluate_image(gts, dets, cfg);
    CHECK(r.removed_weight == doctest::Approx(3.0));  // ab in round 1, d in round 2
    CHECK(r.precision == doctest::Approx(3.0 / 5.0));
    CHECK(r.recall == doctest::Approx(3.0 / 4.0));
    CHECK(r.rounds == 3);
    const auto naive = reference::evaluate_image(gts, dets, cfg);
    CHECK(naive.removed_weight == doctest::Approx(r.removed_weight));
    CHECK(naive.rounds == r.rounds);
}

TEST_CASE("reciprocal weighting on tied area recalls") {
    const EvalConfig cfg;
    // Both detections cover exactly half of the GT and each holds half the
    // transcript; each removal event carries weight 1/2.
    const auto r = evaluate_image({inst(0, 0, 40, 10, "ABCD")},
                                  {inst(0, 0, 20, 10, "AB"), inst(20, 0, 40, 10, "CD")}, cfg);
    CHECK(r.removed_weight == doctest::Approx(2.0));
    CHECK(r.gt_char_total == 4);
    CHECK(r.det_char_total == 4);
    CHECK(r.precision == doctest::Approx(0.5));
    CHECK(r.recall == doctest::Approx(0.5));
}

TEST_CASE("score conventions for empty inputs") {
    const EvalConfig cfg;
    SUBCASE("both empty is perfect") {
        const auto r = evaluate_image({}, {}, cfg);
        CHECK(r.precision == doctest::Approx(1.0));
        CHECK(r.recall == doctest::Approx(1.0));
        CHECK(r.fscore == doctest::Approx(1.0));
    }
    SUBCASE("missed everything") {
        const auto r = evaluate_image({inst(0, 0, 10, 10, "abc")}, {}, cfg);
        CHECK(r.precision == doctest::Approx(0.0));
        CHECK(r.recall == doctest::Approx(0.0));
        CHECK(r.fscore == doctest::Approx(0.0));
    }
    SUBCASE("pure false positives") {
        const auto r = evaluate_image({}, {inst(0, 0, 10, 10, "abc")}, cfg);
        CHECK(r.precision == doctest::Approx(0.0));
        CHECK(r.recall == doctest::Approx(0.0));
    }
    SUBCASE("overlap with disjoint alphabets scores zero") {
        const auto r = evaluate_image({inst(0, 0, 10, 10, "ABC")}, {inst(0, 0, 10, 10, "XYZ")}, cfg);
        CHECK(r.removed_weight == doctest::Approx(0.0));
        CHECK(r.fscore == doctest::Approx(0.0));
    }
}

TEST_CASE("case folding is selectable") {
    EvalConfig sensitive;
    sensitive.case_fold = false;
    const auto miss =
        evaluate_image({inst(0, 0, 30, 10, "ABC")}, {inst(0, 0, 30, 10, "abc")}, sensitive);
    CHECK(miss.removed_weight == doctest::Approx(0.0));
    const auto hit = evaluate_image({inst(0, 0, 30, 10, "ABC")}, {inst(0, 0, 30, 10, "abc")}, {});
    CHECK(hit.removed_weight == doctest::Approx(3.0));
}

TEST_CASE("micro aggregation") {
    SUBCASE("singleton equals its image") {
        ImageEvalResult r;
        r.removed_weight = 6;
        r.gt_char_total = 7;
        r.det_char_total = 6;
        const auto total = aggregate(std::vector<ImageEvalResult>{r});
        REQUIRE(total.scores.has_value());
        CHECK(total.scores->precision == doctest::Approx(1.0));
        CHECK(total.scores->recall == doctest::Approx(6.0 / 7.0));
    }
    SUBCASE("two images pool their counts") {
        ImageEvalResult a;
        a.removed_weight = 6;
        a.gt_char_total = 7;
        a.det_char_total = 6;
        ImageEvalResult b;
        b.removed_weight = 0;
        b.gt_char_total = 3;
        b.det_char_total = 0;
        const auto total = aggregate(std::vector<ImageEvalResult>{a, b});
        REQUIRE(total.scores.has_value());
        CHECK(total.scores->recall == doctest::Approx(6.0 / 10.0));
        CHECK(total.scores->precision == doctest::Approx(1.0));
    }
    SUBCASE("empty corpus has null scores") {
        const auto total = aggregate({});
        CHECK(total.image_count == 0);
        CHECK_FALSE(total.scores.has_value());
    }
}

TEST_CASE("identity detections score perfectly") {
    const EvalConfig cfg;
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 50; ++iter) {
        const auto scenario = synth::generate({synth::ScenarioKind::Exact, rng(), 4}, cfg);
        const auto r = evaluate_image(scenario.gts, scenario.gts, cfg);
        CHECK(r.precision == doctest::Approx(1.0));
        CHECK(r.recall == doctest::Approx(1.0));
        CHECK(r.fscore == doctest::Approx(1.0));
    }
}

TEST_CASE("metric bounds and termination over randomized scenarios") {
    const EvalConfig cfg;
    std::mt19937_64 rng(123);
    int iterations = 0;
    for (synth::ScenarioKind kind : synth::kAllKinds) {
        for (int i = 0; i < 60; ++i, ++iterations) {
            const auto scenario =
                synth::generate({kind, rng(), 1 + static_cast<int>(rng() % 5)}, cfg);
            const auto r = evaluate_image(scenario.gts, scenario.dets, cfg);
            CHECK(r.removed_weight >= 0.0);
            CHECK(r.removed_weight <=
                  static_cast<double>(std::min(r.gt_char_total, r.det_char_total)) + 1e-9);
            CHECK(r.precision >= 0.0);
            CHECK(r.precision <= 1.0);
            CHECK(r.recall >= 0.0);
            CHECK(r.recall <= 1.0);
            CHECK(r.fscore >= 0.0);
            CHECK(r.fscore <= 1.0);
            // every round with any relation retires at least one detection
            CHECK(r.rounds <= static_cast<int>(scenario.dets.size()) + 1);
        }
    }
    CHECK(iterations >= 500);
}

TEST_CASE("conservation of GT characters without tie weighting") {
    const EvalConfig cfg;
    std::mt19937_64 rng(321);
    // Split scenarios can tie on area recall; every other kind resolves
    // one-to-one or with a strict maximum.
    const synth::ScenarioKind kinds[] = {
        synth::ScenarioKind::Exact,       synth::ScenarioKind::Deletion,
        synth::ScenarioKind::Insertion,   synth::ScenarioKind::Substitution,
        synth::ScenarioKind::Merge,       synth::ScenarioKind::Permutation,
        synth::ScenarioKind::DontcareOverlap, synth::ScenarioKind::NoOverlap,
    };
    for (synth::ScenarioKind kind : kinds) {
        for (int i = 0; i < 70; ++i) {
            const auto scenario =
                synth::generate({kind, rng(), 1 + static_cast<int>(rng() % 5)}, cfg);
            const auto r = evaluate_image(scenario.gts, scenario.dets, cfg);
            CHECK(r.removed_weight + static_cast<double>(r.remaining_gt_chars) ==
                  doctest::Approx(static_cast<double>(r.gt_char_total)));
        }
    }
}

TEST_CASE("instance order never changes scores") {
    const EvalConfig cfg;
    std::mt19937_64 rng(777);
    int iterations = 0;
    for (synth::ScenarioKind kind : synth::kAllKinds) {
        for (int i = 0; i < 60; ++i, ++iterations) {
            auto scenario = synth::generate({kind, rng(), 1 + static_cast<int>(rng() % 4)}, cfg);
            const auto before = evaluate_image(scenario.gts, scenario.dets, cfg);
            std::shuffle(scenario.gts.begin(), scenario.gts.end(), rng);
            std::shuffle(scenario.dets.begin(), scenario.dets.end(), rng);
            const auto after = evaluate_image(scenario.gts, scenario.dets, cfg);
            CHECK(before.removed_weight == doctest::Approx(after.removed_weight).epsilon(1e-12));
            CHECK(before.precision == doctest::Approx(after.precision).epsilon(1e-12));
            CHECK(before.recall == doctest::Approx(after.recall).epsilon(1e-12));
        }
    }
    CHECK(iterations >= 500);
}

TEST_CASE("upper-casing detections changes nothing under case folding") {
    const EvalConfig cfg;
    std::mt19937_64 rng(999);
    int iterations = 0;
    for (synth::ScenarioKind kind : synth::kAllKinds) {
        for (int i = 0; i < 60; ++i, ++iterations) {
            auto scenario = synth::generate({kind, rng(), 1 + static_cast<int>(rng() % 4)}, cfg);
            const auto before = evaluate_image(scenario.gts, scenario.dets, cfg);
            for (TextInstance& d : scenario.dets) {
                std::transform(d.transcript.begin(), d.transcript.end(), d.transcript.begin(),
                               [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
            }
            const auto after = evaluate_image(scenario.gts, scenario.dets, cfg);
            CHECK(before.removed_weight == doctest::Approx(after.removed_weight));
            CHECK(before.fscore == doctest::Approx(after.fscore));
        }
    }
    CHECK(iterations >= 500);
}

TEST_CASE("appending a stray detection never helps") {
    const EvalConfig cfg;
    std::mt19937_64 rng(424242);
    for (int i = 0; i < 100; ++i) {
        auto scenario = synth::generate(
            {synth::kAllKinds[i % std::size(synth::kAllKinds)], rng(), 1 + static_cast<int>(rng() % 4)},
            cfg);
        const auto before = evaluate_image(scenario.gts, scenario.dets, cfg);
        scenario.dets.push_back(inst(2000, 2000, 2060, 2016, "stray"));
        const auto after = evaluate_image(scenario.gts, scenario.dets, cfg);
        CHECK(after.removed_weight == doctest::Approx(before.removed_weight));
        CHECK(after.recall == doctest::Approx(before.recall));
        CHECK(after.precision <= before.precision + 1e-12);
    }
}

TEST_CASE("word-level and character-level annotations agree on aligned fixtures") {
    const EvalConfig cfg;
    std::mt19937_64 rng(31337);
    for (int i = 0; i < 60; ++i) {
        const auto scenario = synth::generate({synth::ScenarioKind::Exact, rng(), 3}, cfg);
        const auto word = evaluate_image(scenario.gts, scenario.dets, cfg);
        const auto chars = evaluate_image(scenario.char_gts, scenario.dets, cfg);
        CHECK(word.removed_weight == doctest::Approx(chars.removed_weight));
        CHECK(word.fscore == doctest::Approx(chars.fscore));
    }
}

TEST_CASE("production evaluator matches the naive transliteration") {
    const EvalConfig cfg;
    std::mt19937_64 rng(60446);
    for (synth::ScenarioKind kind : synth::kAllKinds) {
        for (int i = 0; i < 60; ++i) {
            const auto scenario =
                synth::generate({kind, rng(), 1 + static_cast<int>(rng() % 5)}, cfg);
            const auto fast = evaluate_image(scenario.gts, scenario.dets, cfg);
            const auto naive = reference::evaluate_image(scenario.gts, scenario.dets, cfg);
            CHECK(fast.removed_weight == doctest::Approx(naive.removed_weight).epsilon(1e-12));
            CHECK(fast.gt_char_total == naive.gt_char_total);
            CHECK(fast.det_char_total == naive.det_char_total);
            CHECK(fast.rounds == naive.rounds);
            CHECK(fast.remaining_gt_chars == naive.remaining_gt_chars);
        }
    }
}
