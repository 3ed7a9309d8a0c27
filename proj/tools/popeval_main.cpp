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

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "popeval/analysis.hpp"
#include "popeval/baselines.hpp"
#include "popeval/errors.hpp"
#include "popeval/eval.hpp"
#include "popeval/report.hpp"
#include "popeval/runner.hpp"
#include "popeval/synth.hpp"

namespace fs = std::filesystem;
using popeval::report::Value;

namespace {

// Exit codes are a stable contract: 0 success, 1 usage, 2 data.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct CommonOptions {
    std::string gt_dir;
    std::string det_dir;
    std::string manifest;
    std::string format = "icdar2015";
    std::string out = "report.json";
    std::string dontcare_token = "###";
    std::string vocab_path;
    double dontcare_threshold = 0.5;
    double iou_threshold = 0.5;
    double epsilon = 1e-9;
    bool case_sensitive = false;
    bool with_confidence = false;
    int jobs = 1;
};

void add_common_options(CLI::App* cmd, CommonOptions& opts, bool gt_required) {
    auto* gt = cmd->add_option("--gt", opts.gt_dir, "Directory of ground-truth files");
    auto* manifest =
        cmd->add_option("--manifest", opts.manifest, "JSON manifest replacing --gt/--det");
    if (gt_required) gt->excludes(manifest);
    cmd->add_option("--det", opts.det_dir, "Directory of detection files");
    cmd->add_option("--format", opts.format, "Annotation format")
        ->check(CLI::IsMember({"icdar2013", "icdar2015", "charlevel"}))
        ->capture_default_str();
    cmd->add_option("--out", opts.out, "Report destination path")->capture_default_str();
    cmd->add_flag("--case-sensitive", opts.case_sensitive,
                  "Compare transcripts without case folding");
    cmd->add_option("--dontcare-token", opts.dontcare_token, "Don't-care transcript token")
        ->capture_default_str();
    cmd->add_option("--dontcare-threshold", opts.dontcare_threshold,
                    "Area-precision threshold suppressing detections on don't-care regions")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--iou-threshold", opts.iou_threshold,
                    "IOU threshold for the matching-based metrics")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--epsilon", opts.epsilon,
                    "Minimum intersection area treated as an overlap (px^2)")
        ->capture_default_str();
    cmd->add_option("--vocab", opts.vocab_path, "Vocabulary file (one word per line)");
    cmd->add_flag("--confidence", opts.with_confidence,
                  "Detection lines carry a confidence before the transcript");
    cmd->add_option("--jobs", opts.jobs, "Worker threads (output is identical for any value)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

popeval::AnnotationFormat format_from_name(const std::string& name) {
    if (name == "icdar2013") return popeval::AnnotationFormat::Icdar2013;
    if (name == "charlevel") return popeval::AnnotationFormat::CharLevel;
    return popeval::AnnotationFormat::Icdar2015;
}

popeval::EvalConfig eval_config(const CommonOptions& opts) {
    popeval::EvalConfig cfg;
    cfg.case_fold = !opts.case_sensitive;
    cfg.dontcare_token = opts.dontcare_token;
    cfg.dontcare_overlap_threshold = opts.dontcare_threshold;
    cfg.intersection_epsilon = opts.epsilon;
    cfg.validate();
    return cfg;
}

popeval::JoinedCorpus load_corpus(const CommonOptions& opts) {
    popeval::CorpusLoadOptions gt_options;
    gt_options.format = format_from_name(opts.format);
    gt_options.parse.dontcare_token = opts.dontcare_token;
    popeval::CorpusLoadOptions det_options = gt_options;
    det_options.parse.with_confidence = opts.with_confidence;
    if (!opts.manifest.empty()) {
        return popeval::load_manifest(opts.manifest, gt_options, det_options);
    }
    if (opts.gt_dir.empty()) {
        throw popeval::ConfigError("either --gt or --manifest is required");
    }
    if (opts.det_dir.empty()) {
        throw popeval::ConfigError("--det is required when --gt is used");
    }
    return popeval::load_joined(opts.gt_dir, opts.det_dir, gt_options, det_options);
}

std::optional<popeval::Vocabulary> load_vocabulary(const CommonOptions& opts,
                                                   const popeval::EvalConfig& cfg) {
    if (opts.vocab_path.empty()) return std::nullopt;
    return popeval::Vocabulary::from_text(popeval::report::read_text_file(opts.vocab_path),
                                          cfg.normalization());
}

Value config_section(const CommonOptions& opts, const std::string& extra_key = "",
                     Value extra = Value::null()) {
    Value config;
    config["case_fold"] = Value::boolean(!opts.case_sensitive);
    config["dontcare_threshold"] = Value::fixed(opts.dontcare_threshold);
    config["dontcare_token"] = Value::text(opts.dontcare_token);
    config["format"] = Value::text(opts.format);
    config["intersection_epsilon"] = Value::number(opts.epsilon);
    config["iou_threshold"] = Value::fixed(opts.iou_threshold);
    config["vocabulary"] = Value::boolean(!opts.vocab_path.empty());
    if (!extra_key.empty()) config[extra_key] = std::move(extra);
    return config;
}

Value warnings_section(const std::vector<std::string>& warnings) {
    Value array = Value::array();
    for (const std::string& w : warnings) array.push_back(Value::text(w));
    return array;
}

void emit_warnings(const std::vector<std::string>& warnings) {
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

std::string triple_summary(const popeval::ScoreTriple& s) {
    using popeval::report::fixed6;
    return "precision=" + fixed6(s.precision) + " recall=" + fixed6(s.recall) +
           " fscore=" + fixed6(s.fscore);
}

// Per-image scalar used by `compare` and the per_image rows of `eval`.
struct MetricOutcome {
    std::map<std::string, double> per_image;  // image id -> scalar
    std::string summary;                      // one line for stdout
    Value aggregate;
};

MetricOutcome run_metric(const std::string& metric, const popeval::JoinedCorpus& corpus,
                         const popeval::EvalConfig& cfg, const CommonOptions& opts,
                         const popeval::Vocabulary* vocab, Value* per_image_rows) {
    MetricOutcome outcome;
    const std::size_t n = corpus.images.size();

    if (metric == "popeval") {
        const popeval::PopEvalCorpusRun run = popeval::run_popeval(corpus, cfg, opts.jobs);
        for (const auto& [id, r] : run.per_image) {
            outcome.per_image[id] = r.fscore;
            if (per_image_rows != nullptr) {
                Value row;
                row["image_id"] = Value::text(id);
                row["removed"] = Value::fixed(r.removed_weight);
                row["gt_chars"] = Value::integer(r.gt_char_total);
                row["det_chars"] = Value::integer(r.det_char_total);
                row["precision"] = Value::fixed(r.precision);
                row["recall"] = Value::fixed(r.recall);
                row["fscore"] = Value::fixed(r.fscore);
                per_image_rows->push_back(std::move(row));
            }
        }
        outcome.aggregate["removed"] = Value::fixed(run.totals.removed_weight);
        outcome.aggregate["gt_chars"] = Value::integer(run.totals.gt_char_total);
        outcome.aggregate["det_chars"] = Value::integer(run.totals.det_char_total);
        if (run.totals.scores) {
            outcome.aggregate["precision"] = Value::fixed(run.totals.scores->precision);
            outcome.aggregate["recall"] = Value::fixed(run.totals.scores->recall);
            outcome.aggregate["fscore"] = Value::fixed(run.totals.scores->fscore);
            outcome.summary = triple_summary(*run.totals.scores);
        } else {
            outcome.aggregate["precision"] = Value::null();
            outcome.aggregate["recall"] = Value::null();
            outcome.aggregate["fscore"] = Value::null();
            outcome.summary = "precision=null recall=null fscore=null";
        }
        return outcome;
    }

    // The remaining metrics share per-image don't-care filtering.
    std::vector<std::pair<std::vector<popeval::TextInstance>, std::vector<popeval::TextInstance>>>
        filtered(n);
    popeval::parallel_for(n, opts.jobs, [&](std::size_t i) {
        filtered[i] =
            popeval::filter_dontcare(corpus.images[i].gts, corpus.images[i].dets, cfg);
    });

    if (metric == "iou") {
        std::vector<popeval::Matching> matchings(n);
        popeval::parallel_for(n, opts.jobs, [&](std::size_t i) {
            matchings[i] = popeval::match_iou(filtered[i].first, filtered[i].second,
                                              opts.iou_threshold);
        });
        std::size_t matched = 0, total_gts = 0, total_dets = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto scores = popeval::score_from_counts(
                static_cast<double>(matchings[i].pairs.size()),
                static_cast<double>(filtered[i].first.size()),
                static_cast<double>(filtered[i].second.size()));
            const std::string& id = corpus.images[i].image_id;
            outcome.per_image[id] = scores.fscore;
            if (per_image_rows != nullptr) {
                Value row;
                row["image_id"] = Value::text(id);
                row["matched"] = Value::integer(static_cast<long long>(matchings[i].pairs.size()));
                row["precision"] = Value::fixed(scores.precision);
                row["recall"] = Value::fixed(scores.recall);
                row["fscore"] = Value::fixed(scores.fscore);
                per_image_rows->push_back(std::move(row));
            }
            matched += matchings[i].pairs.size();
            total_gts += filtered[i].first.size();
            total_dets += filtered[i].second.size();
        }
        const auto total = popeval::score_from_counts(static_cast<double>(matched),
                                                      static_cast<double>(total_gts),
                                                      static_cast<double>(total_dets));
        outcome.aggregate["matched"] = Value::integer(static_cast<long long>(matched));
        outcome.aggregate["precision"] = Value::fixed(total.precision);
        outcome.aggregate["recall"] = Value::fixed(total.recall);
        outcome.aggregate["fscore"] = Value::fixed(total.fscore);
        outcome.summary = triple_summary(total);
        return outcome;
    }

    if (metric == "exact") {
        std::vector<popeval::ExactMatchCounts> counts(n);
        popeval::parallel_for(n, opts.jobs, [&](std::size_t i) {
            counts[i] = popeval::exact_match_counts(filtered[i].first, filtered[i].second,
                                                    opts.iou_threshold, vocab, cfg);
        });
        popeval::ExactMatchCounts total;
        for (std::size_t i = 0; i < n; ++i) {
            const auto scores = counts[i].scores();
            const std::string& id = corpus.images[i].image_id;
            outcome.per_image[id] = scores.fscore;
            if (per_image_rows != nullptr) {
                Value row;
                row["image_id"] = Value::text(id);
                row["true_positives"] =
                    Value::integer(static_cast<long long>(counts[i].true_positives));
                row["precision"] = Value::fixed(scores.precision);
                row["recall"] = Value::fixed(scores.recall);
                row["fscore"] = Value::fixed(scores.fscore);
                per_image_rows->push_back(std::move(row));
            }
            total.merge(counts[i]);
        }
        const auto scores = total.scores();
        outcome.aggregate["true_positives"] =
            Value::integer(static_cast<long long>(total.true_positives));
        outcome.aggregate["precision"] = Value::fixed(scores.precision);
        outcome.aggregate["recall"] = Value::fixed(scores.recall);
        outcome.aggregate["fscore"] = Value::fixed(scores.fscore);
        outcome.summary = triple_summary(scores);
        return outcome;
    }

    if (metric == "1-ned") {
        std::vector<popeval::NedStats> stats(n);
        popeval::parallel_for(n, opts.jobs, [&](std::size_t i) {
            stats[i] = popeval::ned_stats(filtered[i].first, filtered[i].second,
                                          opts.iou_threshold, cfg);
        });
        popeval::NedStats total;
        for (std::size_t i = 0; i < n; ++i) {
            const std::string& id = corpus.images[i].image_id;
            outcome.per_image[id] = stats[i].value();
            if (per_image_rows != nullptr) {
                Value row;
                row["image_id"] = Value::text(id);
                row["contributions"] =
                    Value::integer(static_cast<long long>(stats[i].contributions));
                row["value"] = Value::fixed(stats[i].value());
                per_image_rows->push_back(std::move(row));
            }
            total.merge(stats[i]);
        }
        outcome.aggregate["contributions"] =
            Value::integer(static_cast<long long>(total.contributions));
        outcome.aggregate["value"] = Value::fixed(total.value());
        outcome.summary = "1-ned=" + popeval::report::fixed6(total.value());
        return outcome;
    }

    if (metric == "ap") {
        std::vector<std::vector<popeval::RankedDetection>> ranked(n);
        popeval::parallel_for(n, opts.jobs, [&](std::size_t i) {
            ranked[i] = popeval::rank_detections(filtered[i].first, filtered[i].second,
                                                 opts.iou_threshold, cfg);
        });
        std::vector<popeval::RankedDetection> pooled;
        std::size_t total_gts = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::string& id = corpus.images[i].image_id;
            const double image_ap =
                popeval::average_precision_from(ranked[i], filtered[i].first.size());
            outcome.per_image[id] = image_ap;
            if (per_image_rows != nullptr) {
                Value row;
                row["image_id"] = Value::text(id);
                row["value"] = Value::fixed(image_ap);
                per_image_rows->push_back(std::move(row));
            }
            pooled.insert(pooled.end(), ranked[i].begin(), ranked[i].end());
            total_gts += filtered[i].first.size();
        }
        const double ap = popeval::average_precision_from(std::move(pooled), total_gts);
        outcome.aggregate["value"] = Value::fixed(ap);
        outcome.summary = "ap=" + popeval::report::fixed6(ap);
        return outcome;
    }

    throw popeval::ConfigError("unknown metric '" + metric + "'");
}

int cmd_eval(const CommonOptions& opts, const std::string& metric) {
    const popeval::EvalConfig cfg = eval_config(opts);
    const popeval::JoinedCorpus corpus = load_corpus(opts);
    const auto vocab = load_vocabulary(opts, cfg);

    Value rows = Value::array();
    const MetricOutcome outcome =
        run_metric(metric, corpus, cfg, opts, vocab ? &*vocab : nullptr, &rows);

    Value doc;
    doc["config"] = config_section(opts, "metric", Value::text(metric));
    doc["per_image"] = std::move(rows);
    doc["aggregate"] = outcome.aggregate;
    doc["warnings"] = warnings_section(corpus.warnings);
    popeval::report::write_report(doc, opts.out);

    emit_warnings(corpus.warnings);
    std::cout << outcome.summary << "\n";
    return kExitOk;
}

int cmd_compare(const CommonOptions& opts, const std::vector<std::string>& metrics,
                const std::vector<std::string>& human_paths) {
    const popeval::EvalConfig cfg = eval_config(opts);
    const popeval::JoinedCorpus corpus = load_corpus(opts);
    const auto vocab = load_vocabulary(opts, cfg);

    std::vector<std::map<std::string, double>> raters;
    for (const std::string& path : human_paths) {
        raters.push_back(
            popeval::parse_human_scores(popeval::report::read_text_file(path), path));
    }
    const popeval::HumanScoreTable human = popeval::average_raters(raters);

    std::map<std::string, std::map<std::string, double>> metric_scores;
    for (const std::string& metric : metrics) {
        metric_scores[metric] =
            run_metric(metric, corpus, cfg, opts, vocab ? &*vocab : nullptr, nullptr).per_image;
    }
    const std::map<std::string, double> correlations =
        popeval::correlate_with_human(metric_scores, human);

    Value rows = Value::array();
    for (const auto& image : corpus.images) {
        Value row;
        row["image_id"] = Value::text(image.image_id);
        row["human"] = Value::fixed(human.ratings.at(image.image_id));
        for (const std::string& metric : metrics) {
            row[metric] = Value::fixed(metric_scores.at(metric).at(image.image_id));
        }
        rows.push_back(std::move(row));
    }

    Value metric_list = Value::array();
    for (const std::string& metric : metrics) metric_list.push_back(Value::text(metric));

    Value doc;
    doc["config"] = config_section(opts, "metrics", std::move(metric_list));
    doc["per_image"] = std::move(rows);
    Value correlation;
    std::string summary = "pearson";
    for (const auto& [metric, r] : correlations) {
        correlation[metric] = Value::fixed(r);
        summary += " " + metric + "=" + popeval::report::fixed6(r);
    }
    doc["correlation"] = std::move(correlation);
    doc["warnings"] = warnings_section(corpus.warnings);
    popeval::report::write_report(doc, opts.out);

    emit_warnings(corpus.warnings);
    std::cout << summary << "\n";
    return kExitOk;
}

int cmd_analyze(const CommonOptions& opts) {
    const popeval::EvalConfig cfg = eval_config(opts);
    const popeval::JoinedCorpus corpus = load_corpus(opts);
    const std::size_t n = corpus.images.size();

    std::vector<popeval::SplitMergeCounts> split_merge(n);
    std::vector<popeval::PermutationCounts> permutations(n);
    popeval::parallel_for(n, opts.jobs, [&](std::size_t i) {
        const auto [gts, dets] =
            popeval::filter_dontcare(corpus.images[i].gts, corpus.images[i].dets, cfg);
        split_merge[i] = popeval::count_split_merge(gts, dets, cfg);
        permutations[i] = popeval::count_permutations(gts, dets, opts.iou_threshold);
    });

    popeval::SplitMergeCounts totals;
    popeval::PermutationCounts permutation_totals;
    for (std::size_t i = 0; i < n; ++i) {
        totals.split_detections += split_merge[i].split_detections;
        totals.merged_gts += split_merge[i].merged_gts;
        totals.total_detections += split_merge[i].total_detections;
        totals.total_gts += split_merge[i].total_gts;
        permutation_totals.permutation_pairs += permutations[i].permutation_pairs;
        permutation_totals.equal_multiset_pairs += permutations[i].equal_multiset_pairs;
        permutation_totals.matched_pairs += permutations[i].matched_pairs;
    }

    Value analysis;
    analysis["split_detections"] = Value::integer(static_cast<long long>(totals.split_detections));
    analysis["merged_gts"] = Value::integer(static_cast<long long>(totals.merged_gts));
    analysis["total_detections"] = Value::integer(static_cast<long long>(totals.total_detections));
    analysis["total_gts"] = Value::integer(static_cast<long long>(totals.total_gts));
    analysis["split_fraction"] = Value::fixed(totals.split_fraction());
    analysis["merge_fraction"] = Value::fixed(totals.merge_fraction());
    analysis["matched_pairs"] =
        Value::integer(static_cast<long long>(permutation_totals.matched_pairs));
    analysis["equal_multiset_pairs"] =
        Value::integer(static_cast<long long>(permutation_totals.equal_multiset_pairs));
    analysis["permutation_pairs"] =
        Value::integer(static_cast<long long>(permutation_totals.permutation_pairs));
    analysis["permutation_fraction"] = Value::fixed(permutation_totals.fraction());

    Value doc;
    doc["analysis"] = analysis;
    doc["config"] = config_section(opts);
    doc["warnings"] = warnings_section(corpus.warnings);
    popeval::report::write_report(doc, opts.out);

    emit_warnings(corpus.warnings);
    using popeval::report::fixed6;
    std::cout << "split=" << fixed6(totals.split_fraction())
              << " merge=" << fixed6(totals.merge_fraction())
              << " permutation=" << fixed6(permutation_totals.fraction()) << "\n";
    return kExitOk;
}

int cmd_synth(const std::string& out_dir, int count, std::uint64_t seed,
              const std::string& dontcare_token) {
    popeval::EvalConfig cfg;
    cfg.dontcare_token = dontcare_token;
    popeval::synth::generate_corpus(out_dir, count, seed, cfg);
    std::cout << "wrote " << count << " fixture images under " << out_dir << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Character-level end-to-end OCR evaluation toolkit"};
    app.require_subcommand(1);

    CommonOptions eval_opts;
    std::string metric = "popeval";
    CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a corpus with one metric");
    add_common_options(eval_cmd, eval_opts, false);
    eval_cmd->add_option("--metric", metric, "Metric to compute")
        ->check(CLI::IsMember({"popeval", "iou", "exact", "1-ned", "ap"}))
        ->capture_default_str();

    CommonOptions compare_opts;
    std::vector<std::string> compare_metrics = {"popeval", "exact", "1-ned"};
    std::vector<std::string> human_paths;
    CLI::App* compare_cmd =
        app.add_subcommand("compare", "Correlate metric scores with human ratings");
    add_common_options(compare_cmd, compare_opts, false);
    compare_cmd
        ->add_option("--metrics", compare_metrics,
                     "Metrics to compare (popeval, iou, exact, 1-ned, ap)")
        ->delimiter(',')
        ->check(CLI::IsMember({"popeval", "iou", "exact", "1-ned", "ap"}))
        ->capture_default_str();
    compare_cmd
        ->add_option("--human", human_paths,
                     "Human score CSV (repeat for several raters; averaged per image)")
        ->required();

    CommonOptions analyze_opts;
    CLI::App* analyze_cmd =
        app.add_subcommand("analyze", "Split/merge and permutation diagnostics");
    add_common_options(analyze_cmd, analyze_opts, false);

    std::string synth_out;
    int synth_count = 0;
    std::uint64_t synth_seed = 0;
    std::string synth_token = "###";
    CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a fixture corpus");
    synth_cmd->add_option("--out", synth_out, "Output directory")->required();
    synth_cmd->add_option("--n", synth_count, "Number of images")
        ->required()
        ->check(CLI::Range(1, 1 << 30));
    synth_cmd->add_option("--seed", synth_seed, "Generator seed")->capture_default_str();
    synth_cmd->add_option("--dontcare-token", synth_token, "Don't-care transcript token")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (eval_cmd->parsed()) return cmd_eval(eval_opts, metric);
        if (compare_cmd->parsed()) return cmd_compare(compare_opts, compare_metrics, human_paths);
        if (analyze_cmd->parsed()) return cmd_analyze(analyze_opts);
        if (synth_cmd->parsed()) return cmd_synth(synth_out, synth_count, synth_seed, synth_token);
    } catch (const popeval::ConfigError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const popeval::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitOk;
}
