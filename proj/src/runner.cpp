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

#include "popeval/runner.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "popeval/errors.hpp"
#include "popeval/report.hpp"

namespace popeval {

namespace fs = std::filesystem;

std::string image_id_from_filename(const fs::path& file) {
    std::string stem = file.stem().string();
    for (const char* prefix : {"gt_", "res_"}) {
        if (stem.rfind(prefix, 0) == 0) {
            stem = stem.substr(std::string(prefix).size());
            break;
        }
    }
    return stem;
}

namespace {

Corpus load_directory(const fs::path& dir, const CorpusLoadOptions& options, bool is_gt) {
    if (!fs::is_directory(dir)) {
        throw IoError((is_gt ? std::string("ground-truth") : std::string("detection")) +
                      " directory '" + dir.string() + "' does not exist");
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());

    Corpus corpus;
    for (const fs::path& file : files) {
        const std::string id = image_id_from_filename(file);
        if (id.empty()) throw IoError("cannot derive an image id from '" + file.string() + "'");
        const std::string data = report::read_text_file(file);
        ImageAnnotation ann =
            is_gt ? parse_gt(data, id, options.format, options.parse, file.string())
                  : parse_detections(data, id, options.format, options.parse, file.string());
        if (!corpus.images.emplace(id, std::move(ann)).second) {
            throw IoError("duplicate image id '" + id + "' from '" + file.string() + "'");
        }
    }
    return corpus;
}

}  // namespace

Corpus load_gt_directory(const fs::path& dir, const CorpusLoadOptions& options) {
    return load_directory(dir, options, /*is_gt=*/true);
}

Corpus load_det_directory(const fs::path& dir, const CorpusLoadOptions& options) {
    return load_directory(dir, options, /*is_gt=*/false);
}

JoinedCorpus join_corpora(Corpus gt, Corpus det) {
    for (const auto& [id, ann] : det.images) {
        if (gt.images.count(id) == 0) {
            throw Error("detection image '" + id + "' has no ground-truth counterpart");
        }
    }
    JoinedCorpus joined;
    for (auto& [id, ann] : gt.images) {
        EvalImage image;
        image.image_id = id;
        image.gts = std::move(ann.instances);
        auto it = det.images.find(id);
        if (it != det.images.end()) {
            image.dets = std::move(it->second.instances);
        } else {
            joined.warnings.push_back("image " + id +
                                      ": no detection file; treated as an empty detection set");
        }
        joined.images.push_back(std::move(image));
    }
    return joined;
}

JoinedCorpus load_joined(const fs::path& gt_dir, const fs::path& det_dir,
                         const CorpusLoadOptions& gt_options,
                         const CorpusLoadOptions& det_options) {
    return join_corpora(load_gt_directory(gt_dir, gt_options),
                        load_det_directory(det_dir, det_options));
}

JoinedCorpus load_manifest(const fs::path& manifest_path, const CorpusLoadOptions& gt_options,
                           const CorpusLoadOptions& det_options) {
    const std::string data = report::read_text_file(manifest_path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(data);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(manifest_path.string(), 0, std::string("invalid manifest JSON: ") + e.what());
    }
    if (!doc.is_array()) {
        throw ParseError(manifest_path.string(), 0, "manifest must be a JSON array");
    }
    const fs::path base = manifest_path.parent_path();

    Corpus gt;
    Corpus det;
    for (const auto& entry : doc) {
        if (!entry.is_object() || !entry.contains("image_id") || !entry.contains("gt")) {
            throw ParseError(manifest_path.string(), 0,
                             "manifest entries need 'image_id' and 'gt' fields");
        }
        const std::string id = entry.at("image_id").get<std::string>();
        const fs::path gt_file = base / entry.at("gt").get<std::string>();
        if (!gt.images
                 .emplace(id, parse_gt(report::read_text_file(gt_file), id, gt_options.format,
                                       gt_options.parse, gt_file.string()))
                 .second) {
            throw ParseError(manifest_path.string(), 0, "duplicate image id '" + id + "'");
        }
        if (entry.contains("det")) {
            const fs::path det_file = base / entry.at("det").get<std::string>();
            det.images.emplace(id, parse_detections(report::read_text_file(det_file), id,
                                                    det_options.format, det_options.parse,
                                                    det_file.string()));
        }
    }
    return join_corpora(std::move(gt), std::move(det));
}

PopEvalCorpusRun run_popeval(const JoinedCorpus& corpus, const EvalConfig& cfg, int jobs) {
    std::vector<ImageEvalResult> results(corpus.images.size());
    parallel_for(corpus.images.size(), jobs, [&](std::size_t i) {
        results[i] = evaluate_image(corpus.images[i].gts, corpus.images[i].dets, cfg);
    });
    PopEvalCorpusRun run;
    run.per_image.reserve(results.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
        run.per_image.emplace_back(corpus.images[i].image_id, results[i]);
    }
    run.totals = aggregate(results);
    return run;
}

}  // namespace popeval
