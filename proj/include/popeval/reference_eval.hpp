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

#include "popeval/eval.hpp"

namespace popeval::reference {

/// Deliberately naive evaluator used as the independent route for
/// cross-checking popeval::evaluate_image and for stamping expected values
/// onto generated fixtures.
///
/// It is a plain recursion that copies its instance lists every round and
/// recomputes every overlap from scratch — do not optimize it, and never
/// change it to match the production evaluator; mismatches mean the
/// production side is wrong.
ImageEvalResult evaluate_image(const std::vector<TextInstance>& gts,
                               const std::vector<TextInstance>& dets,
                               const EvalConfig& cfg = {});

}  // namespace popeval::reference
