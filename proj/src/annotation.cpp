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

#include "popeval/annotation.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "popeval/errors.hpp"
#include "popeval/text.hpp"

namespace popeval {

namespace {

constexpr std::string_view kBom = "\xEF\xBB\xBF";

struct Line {
    std::string_view text;
    int number;  // 1-based
};

std::vector<Line> split_lines(std::string_view data) {
    if (data.substr(0, kBom.size()) == kBom) data.remove_prefix(kBom.size());
    std::vector<Line> lines;
    int number = 0;
    std::size_t pos = 0;
    while (pos <= data.size()) {
        std::size_t nl = data.find('\n', pos);
        std::string_view line = data.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
        ++number;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        bool blank = true;
        for (char c : line) {
            if (c != ' ' && c != '\t') { blank = false; break; }
        }
        if (!blank) lines.push_back({line, number});
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return lines;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

// Splits into at most `max_fields` fields on commas; the last field keeps
// any remaining commas (transcripts may contain them).
std::vector<std::string_view> split_fields(std::string_view line, std::size_t max_fields) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (fields.size() + 1 < max_fields) {
        std::size_t comma = line.find(',', pos);
        if (comma == std::string_view::npos) break;
        fields.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
    fields.push_back(line.substr(pos));
    return fields;
}

long parse_int(std::string_view field, std::string_view source, int line, const char* what) {
    const std::string s{trim(field)};
    if (s.empty()) throw ParseError(std::string(source), line, std::string("empty ") + what);
    char* end = nullptr;
    errno = 0;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (errno != 0 || end != s.c_str() + s.size()) {
        throw ParseError(std::string(source), line,
                         std::string("malformed ") + what + " '" + s + "' (integer expected)");
    }
    return v;
}

double parse_confidence(std::string_view field, std::string_view source, int line) {
    const std::string s{trim(field)};
    if (s.empty()) throw ParseError(std::string(source), line, "empty confidence");
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (errno != 0 || end != s.c_str() + s.size() || !std::isfinite(v)) {
        throw ParseError(std::string(source), line, "malformed confidence '" + s + "'");
    }
    if (v < 0.0 || v > 1.0) {
        throw ParseError(std::string(source), line, "confidence " + s + " outside [0,1]");
    }
    return v;
}

Polygon make_polygon(std::vector<Point> pts, std::string_view source, int line) {
    try {
        return Polygon(std::move(pts));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string(source), line, e.what());
    }
}

void check_transcript(std::string_view transcript, std::string_view source, int line) {
    if (transcript.empty()) {
        throw ParseError(std::string(source), line, "empty transcript on a non-don't-care line");
    }
    if (!utf8_valid(transcript)) {
        throw ParseError(std::string(source), line, "transcript is not valid UTF-8");
    }
}

TextInstance make_quad_instance(const std::vector<std::string_view>& fields,
                                std::string_view transcript, bool allow_dontcare,
                                std::optional<double> confidence, const ParseOptions& opts,
                                std::string_view source, int line) {
    std::vector<Point> pts(4);
    static const char* kNames[8] = {"x1", "y1", "x2", "y2", "x3", "y3", "x4", "y4"};
    for (int i = 0; i < 4; ++i) {
        pts[i].x = static_cast<double>(parse_int(fields[2 * i], source, line, kNames[2 * i]));
        pts[i].y = static_cast<double>(parse_int(fields[2 * i + 1], source, line, kNames[2 * i + 1]));
    }
    TextInstance inst{make_polygon(std::move(pts), source, line), std::string(transcript), false,
                      confidence};
    if (allow_dontcare && transcript == opts.dontcare_token) {
        inst.dont_care = true;
        inst.transcript.clear();
    } else {
        check_transcript(transcript, source, line);
    }
    return inst;
}

ImageAnnotation parse_icdar2015(std::string_view data, std::string_view image_id,
                                const ParseOptions& opts, std::string_view source,
                                bool is_gt, bool char_level) {
    ImageAnnotation out;
    out.image_id = std::string(image_id);
    const bool with_conf = !is_gt && opts.with_confidence;
    const std::size_t n_fields = with_conf ? 10 : 9;
    for (const Line& line : split_lines(data)) {
        auto fields = split_fields(line.text, n_fields);
        if (fields.size() != n_fields) {
            throw ParseError(std::string(source), line.number,
                             "expected " + std::to_string(n_fields) + " comma-separated fields, got " +
                                 std::to_string(fields.size()));
        }
        std::optional<double> conf;
        if (with_conf) conf = parse_confidence(fields[8], source, line.number);
        TextInstance inst = make_quad_instance(fields, fields.back(), is_gt, conf, opts, source,
                                               line.number);
        if (char_level && !inst.dont_care && utf8_decode(inst.transcript).size() != 1) {
            throw ParseError(std::string(source), line.number,
                             "character-level transcript '" + inst.transcript +
                                 "' is not a single character");
        }
        out.instances.push_back(std::move(inst));
    }
    return out;
}

ImageAnnotation parse_icdar2013(std::string_view data, std::string_view image_id,
                                const ParseOptions& opts, std::string_view source, bool is_gt) {
    ImageAnnotation out;
    out.image_id = std::string(image_id);
    const std::size_t n_fields = (!is_gt && opts.with_confidence) ? 6 : 5;
    for (const Line& line : split_lines(data)) {
        auto fields = split_fields(line.text, n_fields);
        if (fields.size() != n_fields) {
            throw ParseError(std::string(source), line.number,
                             "expected " + std::to_string(n_fields) + " comma-separated fields, got " +
                                 std::to_string(fields.size()));
        }
        const long left = parse_int(fields[0], source, line.number, "left");
        const long top = parse_int(fields[1], source, line.number, "top");
        const long right = parse_int(fields[2], source, line.number, "right");
        const long bottom = parse_int(fields[3], source, line.number, "bottom");
        if (right <= left || bottom <= top) {
            throw ParseError(std::string(source), line.number, "inverted or empty box");
        }
        std::optional<double> conf;
        if (n_fields == 6) conf = parse_confidence(fields[4], source, line.number);

        // Only the outer quotes are stripped; inner quoting stays verbatim.
        std::string_view quoted = trim(fields.back());
        if (quoted.size() < 2 || quoted.front() != '"' || quoted.back() != '"') {
            throw ParseError(std::string(source), line.number,
                             "transcript must be enclosed in double quotes");
        }
        std::string_view transcript = quoted.substr(1, quoted.size() - 2);

        TextInstance inst{Polygon::rectangle(static_cast<double>(left), static_cast<double>(top),
                                             static_cast<double>(right), static_cast<double>(bottom)),
                          std::string(transcript), false, conf};
        if (is_gt && transcript == opts.dontcare_token) {
            inst.dont_care = true;
            inst.transcript.clear();
        } else {
            check_transcript(transcript, source, line.number);
        }
        out.instances.push_back(std::move(inst));
    }
    return out;
}

std::string format_confidence(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

ImageAnnotation parse_icdar2015_gt(std::string_view data, std::string_view image_id,
                                   const ParseOptions& opts, std::string_view source) {
    return parse_icdar2015(data, image_id, opts, source, /*is_gt=*/true, /*char_level=*/false);
}

ImageAnnotation parse_charlevel_gt(std::string_view data, std::string_view image_id,
                                   const ParseOptions& opts, std::string_view source) {
    return parse_icdar2015(data, image_id, opts, source, /*is_gt=*/true, /*char_level=*/true);
}

ImageAnnotation parse_icdar2013_gt(std::string_view data, std::string_view image_id,
                                   const ParseOptions& opts, std::string_view source) {
    return parse_icdar2013(data, image_id, opts, source, /*is_gt=*/true);
}

ImageAnnotation parse_gt(std::string_view data, std::string_view image_id, AnnotationFormat format,
                         const ParseOptions& opts, std::string_view source) {
    switch (format) {
        case AnnotationFormat::Icdar2013: return parse_icdar2013_gt(data, image_id, opts, source);
        case AnnotationFormat::Icdar2015: return parse_icdar2015_gt(data, image_id, opts, source);
        case AnnotationFormat::CharLevel: return parse_charlevel_gt(data, image_id, opts, source);
    }
    throw Error("unknown annotation format");
}

ImageAnnotation parse_detections(std::string_view data, std::string_view image_id,
                                 AnnotationFormat format, const ParseOptions& opts,
                                 std::string_view source) {
    if (format == AnnotationFormat::Icdar2013) {
        return parse_icdar2013(data, image_id, opts, source, /*is_gt=*/false);
    }
    return parse_icdar2015(data, image_id, opts, source, /*is_gt=*/false, /*char_level=*/false);
}

std::string serialize_annotation(const ImageAnnotation& annotation, AnnotationFormat format,
                                 bool with_confidence, std::string_view dontcare_token) {
    std::ostringstream out;
    for (const TextInstance& inst : annotation.instances) {
        const auto& v = inst.polygon.vertices();
        const std::string transcript =
            inst.dont_care ? std::string(dontcare_token) : inst.transcript;
        if (format == AnnotationFormat::Icdar2013) {
            double left = v[0].x, top = v[0].y, right = v[0].x, bottom = v[0].y;
            for (const Point& p : v) {
                left = std::min(left, p.x);
                top = std::min(top, p.y);
                right = std::max(right, p.x);
                bottom = std::max(bottom, p.y);
            }
            out << std::lround(left) << ", " << std::lround(top) << ", " << std::lround(right)
                << ", " << std::lround(bottom) << ", ";
            if (with_confidence) {
                if (!inst.confidence) throw Error("instance has no confidence to serialize");
                out << format_confidence(*inst.confidence) << ", ";
            }
            out << '"' << transcript << '"' << '\n';
        } else {
            if (v.size() != 4) throw Error("ICDAR2015 serialization requires quadrilaterals");
            for (const Point& p : v) out << std::lround(p.x) << ',' << std::lround(p.y) << ',';
            if (with_confidence) {
                if (!inst.confidence) throw Error("instance has no confidence to serialize");
                out << format_confidence(*inst.confidence) << ',';
            }
            out << transcript << '\n';
        }
    }
    return out.str();
}

std::map<std::string, double> parse_human_scores(std::string_view data, std::string_view source) {
    std::map<std::string, double> out;
    for (const Line& line : split_lines(data)) {
        const std::size_t comma = line.text.find(',');
        if (comma == std::string_view::npos) {
            throw ParseError(std::string(source), line.number, "expected `image_id,score`");
        }
        const std::string id{trim(line.text.substr(0, comma))};
        if (id.empty()) throw ParseError(std::string(source), line.number, "empty image id");
        const long score = parse_int(line.text.substr(comma + 1), source, line.number, "score");
        if (score < 1 || score > 5) {
            throw ParseError(std::string(source), line.number,
                             "score " + std::to_string(score) + " outside {1..5}");
        }
        if (!out.emplace(id, static_cast<double>(score)).second) {
            throw ParseError(std::string(source), line.number, "duplicate image id '" + id + "'");
        }
    }
    return out;
}

}  // namespace popeval
