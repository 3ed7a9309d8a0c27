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

#include <atomic>
#include <exception>
#include <filesystem>
#include <mutex>
#include <thread>
#include <vector>

#include "popeval/annotation.hpp"
#include "popeval/eval.hpp"

namespace popeval {

struct CorpusLoadOptions {
    AnnotationFormat format = AnnotationFormat::Icdar2015;
    ParseOptions parse;
};

/// `gt_img_12.txt` and `res_img_12.txt` both map to image id `img_12`.
std::string image_id_from_filename(const std::filesystem::path& file);

/// Loads every `*.txt` file of a directory. Throws IoError when the
/// directory does not exist, ParseError on malformed files.
Corpus load_gt_directory(const std::filesystem::path& dir, const CorpusLoadOptions& options);
Corpus load_det_directory(const std::filesystem::path& dir, const CorpusLoadOptions& options);

struct EvalImage {
    std::string image_id;
    std::vector<TextInstance> gts;
    std::vector<TextInstance> dets;
};

struct JoinedCorpus {
    std::vector<EvalImage> images;  // in image-id order
    std::vector<std::string> warnings;
};

/// Joins on image id. A detection image without a GT counterpart is an
/// error; a GT image without detections gets an empty detection set and a
/// warning.
JoinedCorpus join_corpora(Corpus gt, Corpus det);

JoinedCorpus load_joined(const std::filesystem::path& gt_dir,
                         const std::filesystem::path& det_dir,
                         const CorpusLoadOptions& gt_options,
                         const CorpusLoadOptions& det_options);

/// Manifest override for nonstandard file naming: a JSON array of
/// {"image_id", "gt", "det"} objects with paths relative to the manifest
/// file ("det" may be omitted for an empty detection set).
JoinedCorpus load_manifest(const std::filesystem::path& manifest_path,
                           const CorpusLoadOptions& gt_options,
                           const CorpusLoadOptions& det_options);

/// Index-parallel loop; results must be written to preallocated slots so
/// output is identical for every job count. The first worker exception is
/// rethrown on the caller thread.
template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
    if (jobs < 1) jobs = 1;
    if (jobs == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int n_threads = static_cast<int>(std::min<std::size_t>(count, static_cast<std::size_t>(jobs)));
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

struct PopEvalCorpusRun {
    std::vector<std::pair<std::string, ImageEvalResult>> per_image;  // image-id order
    CorpusScores totals;
};

/// Parallel map over images followed by the micro-average reduction;
/// results are identical for every job count.
PopEvalCorpusRun run_popeval(const JoinedCorpus& corpus, const EvalConfig& cfg, int jobs = 1);

}  // namespace popeval
