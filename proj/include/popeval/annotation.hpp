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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "popeval/geometry.hpp"

namespace popeval {

/// One annotated or predicted text region.
///
/// Invariants: the transcript is empty only when dont_care is true, and
/// dont_care instances arise only from ground-truth files.
struct TextInstance {
    Polygon polygon;
    std::string transcript;  // raw UTF-8; normalization happens at evaluation time
    bool dont_care = false;
    std::optional<double> confidence;
};

struct ImageAnnotation {
    std::string image_id;
    std::vector<TextInstance> instances;
};

/// Annotations for a set of images, keyed (and hence ordered) by image id.
struct Corpus {
    std::map<std::string, ImageAnnotation> images;
};

enum class AnnotationFormat {
    Icdar2013,  // left, top, right, bottom, "transcript"
    Icdar2015,  // x1,y1,x2,y2,x3,y3,x4,y4,transcript
    CharLevel,  // ICDAR2015 lines whose transcripts are single characters
};

struct ParseOptions {
    std::string dontcare_token = "###";
    /// Detections carry a confidence field before the transcript.
    bool with_confidence = false;
};

// All parsers take the raw file bytes. A UTF-8 byte-order mark is skipped,
// Windows and Unix line endings are both accepted, blank lines are ignored.
// `source` names the input in error messages (typically the file path).
// Malformed lines raise ParseError with the 1-based line number.

ImageAnnotation parse_icdar2015_gt(std::string_view data, std::string_view image_id,
                                   const ParseOptions& opts = {},
                                   std::string_view source = "<gt>");

ImageAnnotation parse_icdar2013_gt(std::string_view data, std::string_view image_id,
                                   const ParseOptions& opts = {},
                                   std::string_view source = "<gt>");

/// ICDAR2015 grammar where every non-don't-care transcript is exactly one
/// character.
ImageAnnotation parse_charlevel_gt(std::string_view data, std::string_view image_id,
                                   const ParseOptions& opts = {},
                                   std::string_view source = "<gt>");

ImageAnnotation parse_gt(std::string_view data, std::string_view image_id,
                         AnnotationFormat format, const ParseOptions& opts = {},
                         std::string_view source = "<gt>");

/// Detection files use the GT geometry grammar plus an optional confidence
/// field before the transcript (enabled via opts.with_confidence). The
/// don't-care token has no special meaning in detections. CharLevel
/// detections are parsed with the ICDAR2015 grammar; model output is
/// word-level regardless of GT granularity.
ImageAnnotation parse_detections(std::string_view data, std::string_view image_id,
                                 AnnotationFormat format, const ParseOptions& opts = {},
                                 std::string_view source = "<det>");

/// Inverse of the parsers, used by the fixture generator and round-trip
/// tests. Coordinates are written as integers (the grammars' precision).
std::string serialize_annotation(const ImageAnnotation& annotation, AnnotationFormat format,
                                 bool with_confidence = false,
                                 std::string_view dontcare_token = "###");

/// Human qualitative ratings: lines of `image_id,score`, score in {1..5}.
std::map<std::string, double> parse_human_scores(std::string_view data,
                                                 std::string_view source = "<human>");

}  // namespace popeval
