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

#include <string>
#include <string_view>

namespace popeval {

/// Transcript normalization switches. Applied in a fixed order (fold,
/// strip, filter); the composition is idempotent.
struct NormalizeConfig {
    bool case_fold = false;
    bool strip_surrounding_whitespace = false;
    /// Keep only [0-9A-Za-z]; used by the permutation analysis.
    bool alphanumeric_only = false;
};

bool utf8_valid(std::string_view s);

/// Decodes UTF-8 into Unicode scalar values. Throws popeval::Error on
/// malformed input (validate at parse time; evaluation-time inputs are
/// already known good).
std::u32string utf8_decode(std::string_view s);

std::string utf8_encode(std::u32string_view s);

std::u32string normalize_codepoints(std::u32string text, const NormalizeConfig& cfg);

std::string normalize_transcript(std::string_view text, const NormalizeConfig& cfg);

}  // namespace popeval
