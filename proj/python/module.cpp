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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "popeval/analysis.hpp"
#include "popeval/baselines.hpp"
#include "popeval/errors.hpp"
#include "popeval/eval.hpp"
#include "popeval/reference_eval.hpp"
#include "popeval/runner.hpp"
#include "popeval/synth.hpp"

namespace py = pybind11;
using namespace popeval;

namespace {

Polygon polygon_from_points(const std::vector<std::pair<double, double>>& points) {
    std::vector<Point> vertices;
    vertices.reserve(points.size());
    for (const auto& [x, y] : points) vertices.push_back({x, y});
    return Polygon(std::move(vertices));
}

std::vector<std::pair<double, double>> polygon_points(const Polygon& polygon) {
    std::vector<std::pair<double, double>> out;
    out.reserve(polygon.size());
    for (const Point& p : polygon.vertices()) out.emplace_back(p.x, p.y);
    return out;
}

AnnotationFormat format_from_name(const std::string& name) {
    if (name == "icdar2013") return AnnotationFormat::Icdar2013;
    if (name == "icdar2015") return AnnotationFormat::Icdar2015;
    if (name == "charlevel") return AnnotationFormat::CharLevel;
    throw ConfigError("unknown annotation format '" + name + "'");
}

std::optional<Vocabulary> vocabulary_from_words(const std::optional<std::vector<std::string>>& words,
                                                const EvalConfig& cfg) {
    if (!words) return std::nullopt;
    std::string joined;
    for (const std::string& w : *words) {
        joined += w;
        joined += '\n';
    }
    return Vocabulary::from_text(joined, cfg.normalization());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Character-level end-to-end OCR evaluation toolkit";

    py::register_exception<Error>(m, "EvalError", PyExc_RuntimeError);

    py::class_<Polygon>(m, "Polygon")
        .def(py::init(&polygon_from_points), py::arg("vertices"),
             "Simple polygon from a list of (x, y) pairs")
        .def_property_readonly("vertices", &polygon_points)
        .def("area", &Polygon::area)
        .def("centroid",
             [](const Polygon& p) { return std::make_pair(p.centroid().x, p.centroid().y); })
        .def("__repr__", [](const Polygon& p) {
            return "Polygon(" + std::to_string(p.size()) + " vertices, area " +
                   std::to_string(p.area()) + ")";
        });

    m.def("intersection_area", &intersection_area, py::arg("a"), py::arg("b"));
    m.def("iou", &iou, py::arg("a"), py::arg("b"));
    m.def("area_recall", &area_recall, py::arg("gt"), py::arg("det"));
    m.def("area_precision", &area_precision, py::arg("gt"), py::arg("det"));
    m.def("origin_distance", &origin_distance, py::arg("polygon"));

    py::class_<TextInstance>(m, "TextInstance")
        .def(py::init([](const Polygon& polygon, const std::string& transcript, bool dont_care,
                         std::optional<double> confidence) {
                 return TextInstance{polygon, transcript, dont_care, confidence};
             }),
             py::arg("polygon"), py::arg("transcript"), py::arg("dont_care") = false,
             py::arg("confidence") = py::none())
        .def_readonly("polygon", &TextInstance::polygon)
        .def_readwrite("transcript", &TextInstance::transcript)
        .def_readwrite("dont_care", &TextInstance::dont_care)
        .def_readwrite("confidence", &TextInstance::confidence)
        .def("__repr__", [](const TextInstance& t) {
            return "TextInstance('" + t.transcript + "'" + (t.dont_care ? ", dont_care" : "") +
                   ")";
        });

    py::class_<EvalConfig>(m, "EvalConfig")
        .def(py::init([](bool case_fold, const std::string& dontcare_token,
                         double dontcare_overlap_threshold, double intersection_epsilon) {
                 EvalConfig cfg{case_fold, dontcare_token, dontcare_overlap_threshold,
                                intersection_epsilon};
                 cfg.validate();
                 return cfg;
             }),
             py::arg("case_fold") = true, py::arg("dontcare_token") = "###",
             py::arg("dontcare_overlap_threshold") = 0.5,
             py::arg("intersection_epsilon") = 1e-9)
        .def_readwrite("case_fold", &EvalConfig::case_fold)
        .def_readwrite("dontcare_token", &EvalConfig::dontcare_token)
        .def_readwrite("dontcare_overlap_threshold", &EvalConfig::dontcare_overlap_threshold)
        .def_readwrite("intersection_epsilon", &EvalConfig::intersection_epsilon);

    py::class_<ScoreTriple>(m, "ScoreTriple")
        .def_readonly("precision", &ScoreTriple::precision)
        .def_readonly("recall", &ScoreTriple::recall)
        .def_readonly("fscore", &ScoreTriple::fscore)
        .def("__repr__", [](const ScoreTriple& s) {
            return "ScoreTriple(precision=" + std::to_string(s.precision) +
                   ", recall=" + std::to_string(s.recall) + ", fscore=" +
                   std::to_string(s.fscore) + ")";
        });

    py::class_<ImageEvalResult>(m, "ImageEvalResult")
        .def_readonly("removed_weight", &ImageEvalResult::removed_weight)
        .def_readonly("gt_char_total", &ImageEvalResult::gt_char_total)
        .def_readonly("det_char_total", &ImageEvalResult::det_char_total)
        .def_readonly("precision", &ImageEvalResult::precision)
        .def_readonly("recall", &ImageEvalResult::recall)
        .def_readonly("fscore", &ImageEvalResult::fscore)
        .def_readonly("rounds", &ImageEvalResult::rounds)
        .def_readonly("remaining_gt_chars", &ImageEvalResult::remaining_gt_chars)
        .def("__repr__", [](const ImageEvalResult& r) {
            return "ImageEvalResult(removed=" + std::to_string(r.removed_weight) +
                   ", precision=" + std::to_string(r.precision) +
                   ", recall=" + std::to_string(r.recall) + ")";
        });

    m.def("evaluate_image", &evaluate_image, py::arg("gts"), py::arg("dets"),
          py::arg("config") = EvalConfig{},
          "Character-removal evaluation of one image's instances");
    m.def("reference_evaluate_image", &reference::evaluate_image, py::arg("gts"), py::arg("dets"),
          py::arg("config") = EvalConfig{},
          "Naive reference implementation of the same evaluation");
    m.def("filter_dontcare", &filter_dontcare, py::arg("gts"), py::arg("dets"),
          py::arg("config") = EvalConfig{});

    m.def("levenshtein",
          static_cast<int (*)(std::string_view, std::string_view)>(&levenshtein), py::arg("a"),
          py::arg("b"));

    py::class_<Matching::Pair>(m, "MatchingPair")
        .def_readonly("gt_index", &Matching::Pair::gt_index)
        .def_readonly("det_index", &Matching::Pair::det_index)
        .def_readonly("iou", &Matching::Pair::iou);
    py::class_<Matching>(m, "Matching")
        .def_readonly("pairs", &Matching::pairs)
        .def_readonly("unmatched_gts", &Matching::unmatched_gts)
        .def_readonly("unmatched_dets", &Matching::unmatched_dets);
    m.def("match_iou", &match_iou, py::arg("gts"), py::arg("dets"), py::arg("threshold") = 0.5);
    m.def("detection_scores", &detection_scores, py::arg("gts"), py::arg("dets"),
          py::arg("threshold") = 0.5, "Detection-only P/R/F over IOU-matched pair counts");

    m.def(
        "exact_match_e2e",
        [](const std::vector<TextInstance>& gts, const std::vector<TextInstance>& dets,
           double threshold, const std::optional<std::vector<std::string>>& vocabulary,
           const EvalConfig& cfg) {
            const auto vocab = vocabulary_from_words(vocabulary, cfg);
            return exact_match_e2e(gts, dets, threshold, vocab ? &*vocab : nullptr, cfg);
        },
        py::arg("gts"), py::arg("dets"), py::arg("threshold") = 0.5,
        py::arg("vocabulary") = py::none(), py::arg("config") = EvalConfig{});
    m.def("one_minus_ned", &one_minus_ned, py::arg("gts"), py::arg("dets"),
          py::arg("threshold") = 0.5, py::arg("config") = EvalConfig{});
    m.def("average_precision", &average_precision, py::arg("gts"), py::arg("dets"),
          py::arg("threshold") = 0.5, py::arg("config") = EvalConfig{});

    m.def("detect_permutations",
          static_cast<bool (*)(std::string_view, std::string_view)>(&detect_permutations),
          py::arg("gt_text"), py::arg("det_text"));
    py::class_<SplitMergeCounts>(m, "SplitMergeCounts")
        .def_readonly("split_detections", &SplitMergeCounts::split_detections)
        .def_readonly("merged_gts", &SplitMergeCounts::merged_gts)
        .def_readonly("total_detections", &SplitMergeCounts::total_detections)
        .def_readonly("total_gts", &SplitMergeCounts::total_gts)
        .def_property_readonly("split_fraction", &SplitMergeCounts::split_fraction)
        .def_property_readonly("merge_fraction", &SplitMergeCounts::merge_fraction);
    m.def("count_split_merge", &count_split_merge, py::arg("gts"), py::arg("dets"),
          py::arg("config") = EvalConfig{}, py::arg("area_threshold") = 0.5);
    m.def(
        "pearson",
        [](const std::vector<double>& xs, const std::vector<double>& ys) {
            return pearson(xs, ys);
        },
        py::arg("xs"), py::arg("ys"));

    m.def(
        "normalize_transcript",
        [](const std::string& text, bool case_fold, bool strip_surrounding_whitespace,
           bool alphanumeric_only) {
            return normalize_transcript(
                text, {case_fold, strip_surrounding_whitespace, alphanumeric_only});
        },
        py::arg("text"), py::arg("case_fold") = false,
        py::arg("strip_surrounding_whitespace") = false, py::arg("alphanumeric_only") = false);

    py::class_<ImageAnnotation>(m, "ImageAnnotation")
        .def_readonly("image_id", &ImageAnnotation::image_id)
        .def_readonly("instances", &ImageAnnotation::instances);
    m.def(
        "parse_gt",
        [](const std::string& data, const std::string& image_id, const std::string& format,
           const std::string& dontcare_token) {
            ParseOptions opts;
            opts.dontcare_token = dontcare_token;
            return parse_gt(data, image_id, format_from_name(format), opts);
        },
        py::arg("data"), py::arg("image_id") = "image", py::arg("format") = "icdar2015",
        py::arg("dontcare_token") = "###");
    m.def(
        "parse_detections",
        [](const std::string& data, const std::string& image_id, const std::string& format,
           bool with_confidence, const std::string& dontcare_token) {
            ParseOptions opts;
            opts.dontcare_token = dontcare_token;
            opts.with_confidence = with_confidence;
            return parse_detections(data, image_id, format_from_name(format), opts);
        },
        py::arg("data"), py::arg("image_id") = "image", py::arg("format") = "icdar2015",
        py::arg("with_confidence") = false, py::arg("dontcare_token") = "###");
    m.def(
        "serialize_annotation",
        [](const std::vector<TextInstance>& instances, const std::string& format,
           bool with_confidence, const std::string& dontcare_token) {
            return serialize_annotation({"image", instances}, format_from_name(format),
                                        with_confidence, dontcare_token);
        },
        py::arg("instances"), py::arg("format") = "icdar2015", py::arg("with_confidence") = false,
        py::arg("dontcare_token") = "###");

    py::class_<synth::Scenario>(m, "Scenario")
        .def_readonly("gts", &synth::Scenario::gts)
        .def_readonly("char_gts", &synth::Scenario::char_gts)
        .def_readonly("dets", &synth::Scenario::dets)
        .def_readonly("expected", &synth::Scenario::expected);
    m.def(
        "generate_scenario",
        [](const std::string& kind, std::uint64_t seed, int word_count, double det_jitter,
           const EvalConfig& cfg) {
            return synth::generate({synth::kind_from_name(kind), seed, word_count, det_jitter},
                                   cfg);
        },
        py::arg("kind"), py::arg("seed") = 0, py::arg("word_count") = 3,
        py::arg("det_jitter") = 0.0, py::arg("config") = EvalConfig{});
    m.def(
        "generate_corpus",
        [](const std::filesystem::path& out_dir, int n, std::uint64_t seed) {
            synth::generate_corpus(out_dir, n, seed);
        },
        py::arg("out_dir"), py::arg("n"), py::arg("seed") = 0);
    m.attr("scenario_kinds") = []() {
        std::vector<std::string> names;
        for (synth::ScenarioKind k : synth::kAllKinds) names.emplace_back(synth::kind_name(k));
        return names;
    }();

    py::class_<CorpusScores>(m, "CorpusScores")
        .def_readonly("image_count", &CorpusScores::image_count)
        .def_readonly("removed_weight", &CorpusScores::removed_weight)
        .def_readonly("gt_char_total", &CorpusScores::gt_char_total)
        .def_readonly("det_char_total", &CorpusScores::det_char_total)
        .def_readonly("scores", &CorpusScores::scores);
    m.def(
        "evaluate_dirs",
        [](const std::filesystem::path& gt_dir, const std::filesystem::path& det_dir,
           const std::string& format, bool with_confidence, const EvalConfig& cfg, int jobs) {
            CorpusLoadOptions gt_options;
            gt_options.format = format_from_name(format);
            gt_options.parse.dontcare_token = cfg.dontcare_token;
            CorpusLoadOptions det_options = gt_options;
            det_options.parse.with_confidence = with_confidence;
            const JoinedCorpus corpus = load_joined(gt_dir, det_dir, gt_options, det_options);
            const PopEvalCorpusRun run = run_popeval(corpus, cfg, jobs);
            py::dict per_image;
            for (const auto& [id, r] : run.per_image) per_image[py::str(id)] = r;
            py::dict out;
            out["per_image"] = per_image;
            out["aggregate"] = run.totals;
            out["warnings"] = corpus.warnings;
            return out;
        },
        py::arg("gt_dir"), py::arg("det_dir"), py::arg("format") = "icdar2015",
        py::arg("with_confidence") = false, py::arg("config") = EvalConfig{},
        py::arg("jobs") = 1,
        "Load a GT/detection directory pair and run the character-removal metric");

    m.attr("__version__") = "1.0.0";
}
