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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "popeval/annotation.hpp"
#include "popeval/eval.hpp"

namespace popeval::synth {

enum class ScenarioKind {
    Exact,
    Deletion,
    Insertion,
    Substitution,
    Split,
    Merge,
    Permutation,
    DontcareOverlap,
    NoOverlap,
};

inline constexpr ScenarioKind kAllKinds[] = {
    ScenarioKind::Exact,        ScenarioKind::Deletion,   ScenarioKind::Insertion,
    ScenarioKind::Substitution, ScenarioKind::Split,      ScenarioKind::Merge,
    ScenarioKind::Permutation,  ScenarioKind::DontcareOverlap,
    ScenarioKind::NoOverlap,
};

ScenarioKind kind_from_name(std::string_view name);
std::string_view kind_name(ScenarioKind kind);

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::Exact;
    std::uint64_t seed = 0;
    int word_count = 3;
    /// Fraction of the box size by which detection edges are randomly
    /// offset (0 = word-aligned detections).
    double det_jitter = 0.0;
};

/// One generated image: word-level GTs, their character-level twin, the
/// perturbed detections, and the expected evaluation result stamped by the
/// reference evaluator (never by the production one).
struct Scenario {
    std::vector<TextInstance> gts;
    std::vector<TextInstance> char_gts;
    std::vector<TextInstance> dets;
    ImageEvalResult expected;
};

/// Deterministic: identical specs yield identical scenarios. Words are laid
/// out left-to-right on a 1000x1000 canvas with pairwise non-intersecting
/// GT boxes.
Scenario generate(const ScenarioSpec& spec, const EvalConfig& cfg = {});

/// Writes `gt/gt_img_<i>.txt` and `det/res_img_<i>.txt` (ICDAR2015
/// grammar) for n images cycling through all scenario kinds, plus an
/// `expected.json` manifest shaped like the report's per_image section.
/// Throws std::invalid_argument when n < 1.
void generate_corpus(const std::filesystem::path& out_dir, int n, std::uint64_t seed,
                     const EvalConfig& cfg = {});

}  // namespace popeval::synth
