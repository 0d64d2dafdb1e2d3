/*
 * Copyright 2026 The ctxwin Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ctxwin/corpus.hpp"
#include "ctxwin/eval.hpp"
#include "ctxwin/model_io.hpp"
#include "ctxwin/sweep.hpp"
#include "ctxwin/trainer.hpp"
#include "ctxwin/windowing.hpp"

namespace {

struct CorpusArgs {
    std::string corpus_path;
    std::string stop_list_path;
    bool strip_punct = false;
    std::uint64_t min_count = 5;
};

struct WindowArgs {
    int window = 5;
    std::string scheme = "linear";
    std::string position = "symmetric";
    bool cross_sentential = false;
};

void add_corpus_options(CLI::App* cmd, CorpusArgs& args) {
    cmd->add_option("--corpus", args.corpus_path, "tokenized corpus, one sentence per line")
        ->required();
    cmd->add_option("--stop-list", args.stop_list_path, "stop word file, one token per line");
    cmd->add_option("--strip-punct", args.strip_punct, "remove punctuation tokens");
    cmd->add_option("--min-count", args.min_count, "frequency cutoff for the vocabulary");
}

void add_window_options(CLI::App* cmd, WindowArgs& args) {
    cmd->add_option("--window", args.window, "maximum window size L");
    cmd->add_option("--scheme", args.scheme, "distance weighting: linear|sqrt")
        ->check(CLI::IsMember({"linear", "sqrt"}));
    cmd->add_option("--position", args.position, "window position: left|right|symmetric")
        ->check(CLI::IsMember({"left", "right", "symmetric"}));
    cmd->add_option("--cross-sentential", args.cross_sentential,
                    "let windows cross sentence boundaries");
}

ctxwin::WindowPolicy make_policy(const WindowArgs& args) {
    return ctxwin::WindowPolicy{args.window, ctxwin::parse_scheme(args.scheme),
                                ctxwin::parse_position(args.position), args.cross_sentential};
}

// Two passes over the corpus file: count, then map to ids.
std::pair<ctxwin::Vocabulary, ctxwin::Corpus> load_inputs(const CorpusArgs& args) {
    ctxwin::LoadOptions options;
    ctxwin::StopList stop_list;
    if (!args.stop_list_path.empty()) {
        stop_list = ctxwin::StopList::load_file(args.stop_list_path);
        options.stop_list = &stop_list;
    }
    options.strip_punct = args.strip_punct;
    ctxwin::Vocabulary vocab =
        ctxwin::build_vocabulary_file(args.corpus_path, args.min_count, options);
    ctxwin::Corpus corpus = ctxwin::load_corpus_file(args.corpus_path, vocab, options);
    return {std::move(vocab), std::move(corpus)};
}

int cmd_train(const CorpusArgs& corpus_args, const WindowArgs& window_args,
              const ctxwin::TrainConfig& config, const std::string& output, bool quiet) {
    auto [vocab, corpus] = load_inputs(corpus_args);
    if (!quiet)
        std::fprintf(stderr, "vocabulary %zu words, corpus %zu tokens in %zu sentences\n",
                     vocab.size(), corpus.total_tokens(), corpus.sentence_count());
    ctxwin::NegativeSampler sampler(vocab);
    ctxwin::TrainStats stats;
    const ctxwin::EmbeddingModel model =
        ctxwin::train(corpus, make_policy(window_args), config, sampler, &stats, !quiet);
    if (!quiet)
        std::fprintf(stderr, "trained on %llu pairs in %.1f s (mean loss %.4f)\n",
                     static_cast<unsigned long long>(stats.pairs_emitted), stats.seconds,
                     stats.mean_loss);
    ctxwin::save_model_file(model, vocab, output);
    return 0;
}

int cmd_pairs(const CorpusArgs& corpus_args, const WindowArgs& window_args,
              std::uint64_t seed, bool accept_all, std::uint64_t limit) {
    auto [vocab, corpus] = load_inputs(corpus_args);
    ctxwin::Rng rng(seed);
    std::uint64_t emitted = 0;
    std::string line;
    ctxwin::for_each_pair(corpus, make_policy(window_args), rng, accept_all,
                          [&](const ctxwin::ContextPair& pair) {
                              if (limit != 0 && emitted >= limit) return;
                              ++emitted;
                              line = vocab.word(pair.focus);
                              line += '\t';
                              line += vocab.word(pair.context);
                              line += '\t';
                              line += std::to_string(pair.distance);
                              line += '\n';
                              std::fputs(line.c_str(), stdout);
                          });
    return 0;
}

int cmd_eval(const std::string& model_path, const std::string& simlex_path,
             const std::string& analogy_path, bool semantic_only, bool lowercase,
             bool sections) {
    const ctxwin::LoadedModel loaded = ctxwin::load_model_file(model_path);

    double rho = std::nan(""), sim_cov = std::nan("");
    double acc = std::nan(""), ana_cov = std::nan("");
    ctxwin::AnalogyResult analogy;
    if (!simlex_path.empty()) {
        const auto dataset = ctxwin::load_similarity_file(simlex_path, lowercase);
        const auto sim = ctxwin::eval_similarity(loaded.model, loaded.vocab, dataset);
        rho = sim.rho;
        sim_cov = sim.coverage;
    }
    if (!analogy_path.empty()) {
        const auto dataset = ctxwin::load_analogy_file(analogy_path, semantic_only, lowercase);
        analogy = ctxwin::eval_analogy(loaded.model, loaded.vocab, dataset);
        acc = analogy.overall;
        ana_cov = analogy.coverage;
    }
    std::printf("%.6f\t%.4f\t%.6f\t%.4f\n", rho, sim_cov, acc, ana_cov);
    if (sections)
        for (const auto& sec : analogy.by_section)
            std::printf("# %s\t%.6f\t%zu/%zu\n", sec.name.c_str(), sec.accuracy, sec.correct,
                        sec.answered);
    return 0;
}

int cmd_sweep(const std::string& raw_path, const std::string& filtered_path,
              const std::string& grid_path, const std::string& simlex_path,
              const std::string& analogy_path, const std::string& out_path, int jobs,
              std::uint64_t seed, bool semantic_only, bool lowercase) {
    const ctxwin::GridSpec spec =
        grid_path.empty() ? ctxwin::GridSpec{} : ctxwin::parse_grid_file(grid_path);

    std::fprintf(stderr, "loading corpora...\n");
    const ctxwin::Vocabulary raw_vocab =
        ctxwin::build_vocabulary_file(raw_path, spec.min_count);
    const ctxwin::Corpus raw_corpus = ctxwin::load_corpus_file(raw_path, raw_vocab);
    const ctxwin::Vocabulary filtered_vocab =
        ctxwin::build_vocabulary_file(filtered_path, spec.min_count);
    const ctxwin::Corpus filtered_corpus =
        ctxwin::load_corpus_file(filtered_path, filtered_vocab);
    const ctxwin::SimilarityDataset simlex =
        ctxwin::load_similarity_file(simlex_path, lowercase);
    const ctxwin::AnalogyDataset analogies =
        ctxwin::load_analogy_file(analogy_path, semantic_only, lowercase);

    ctxwin::SweepInputs inputs;
    inputs.raw_corpus = &raw_corpus;
    inputs.raw_vocab = &raw_vocab;
    inputs.filtered_corpus = &filtered_corpus;
    inputs.filtered_vocab = &filtered_vocab;
    inputs.simlex = &simlex;
    inputs.analogies = &analogies;

    const auto rows = ctxwin::run_sweep(inputs, spec, out_path, jobs, seed, /*verbose=*/true);
    std::size_t ok = 0;
    for (const auto& row : rows) ok += row.ok() ? 1 : 0;
    std::fprintf(stderr, "sweep complete: %zu rows (%zu ok) in %s\n", rows.size(), ok,
                 out_path.c_str());
    return 0;
}

int cmd_report(const std::string& results_path, const std::string& group_by) {
    const auto rows = ctxwin::read_results_file(results_path);
    const auto table = ctxwin::aggregate(rows, group_by);
    std::printf("%s\tmean_simlex_rho\tmean_analogy_acc\tcells\n", group_by.c_str());
    for (const auto& row : table)
        std::printf("%s\t%.4f\t%.4f\t%zu\n", row.value.c_str(), row.mean_rho,
                    row.mean_accuracy, row.cells);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"context-window engine, SGNS trainer and evaluation harness"};
    app.require_subcommand(1);

    // train
    CorpusArgs train_corpus;
    WindowArgs train_window;
    ctxwin::TrainConfig config;
    bool min_lr_given = false;
    std::string output;
    bool quiet = false;
    auto* train = app.add_subcommand("train", "train SGNS embeddings");
    add_corpus_options(train, train_corpus);
    add_window_options(train, train_window);
    train->add_option("--dim", config.dim, "embedding dimensionality");
    train->add_option("--negatives", config.negatives, "negative samples per pair");
    train->add_option("--epochs", config.epochs, "training passes over the corpus");
    train->add_option("--lr", config.initial_lr, "initial learning rate");
    train->add_option("--min-lr", config.min_lr, "learning rate floor (default lr * 1e-4)")
        ->each([&](const std::string&) { min_lr_given = true; });
    train->add_option("--seed", config.seed, "random seed");
    train->add_option("--workers", config.workers, "training threads (1 = reproducible)");
    train->add_option("--output", output, "model file to write")->required();
    train->add_flag("--quiet", quiet, "suppress progress output");

    // pairs
    CorpusArgs pairs_corpus;
    WindowArgs pairs_window;
    std::uint64_t pairs_seed = 1;
    bool accept_all = false;
    std::uint64_t limit = 0;
    auto* pairs = app.add_subcommand("pairs", "dump the (focus, context) pair stream as TSV");
    add_corpus_options(pairs, pairs_corpus);
    add_window_options(pairs, pairs_window);
    pairs->add_option("--seed", pairs_seed, "random seed");
    pairs->add_flag("--accept-all", accept_all, "emit every candidate deterministically");
    pairs->add_option("--limit", limit, "stop after N pairs (0 = no limit)");

    // eval
    std::string model_path, simlex_path, analogy_path;
    bool semantic_only = true;
    bool lowercase = false;
    bool sections = false;
    auto* eval = app.add_subcommand("eval", "score a model on similarity and analogies");
    eval->add_option("--model", model_path, "model file")->required();
    eval->add_option("--simlex", simlex_path, "SimLex-999 style similarity file");
    eval->add_option("--analogy", analogy_path, "Google analogies file");
    eval->add_option("--semantic-only", semantic_only, "drop sections starting with 'gram'");
    eval->add_option("--lowercase", lowercase, "lowercase dataset words before lookup");
    eval->add_flag("--sections", sections, "also print per-section analogy accuracy");

    // sweep
    std::string raw_path, filtered_path, grid_path, sweep_simlex, sweep_analogy, out_path;
    int jobs = 1;
    std::uint64_t sweep_seed = 1;
    bool sweep_semantic_only = true;
    bool sweep_lowercase = false;
    auto* sweep = app.add_subcommand("sweep", "train and evaluate the hyper-parameter grid");
    sweep->add_option("--corpus-raw", raw_path, "corpus with all tokens")->required();
    sweep->add_option("--corpus-filtered", filtered_path,
                      "corpus with stop words and punctuation removed")
        ->required();
    sweep->add_option("--grid", grid_path, "grid file (defaults to the full 96-cell grid)");
    sweep->add_option("--simlex", sweep_simlex, "similarity file")->required();
    sweep->add_option("--analogy", sweep_analogy, "analogy file")->required();
    sweep->add_option("--out", out_path, "append-only results TSV")->required();
    sweep->add_option("--jobs", jobs, "cells run in parallel");
    sweep->add_option("--seed", sweep_seed, "global seed; cell seeds derive from it");
    sweep->add_option("--semantic-only", sweep_semantic_only,
                      "drop analogy sections starting with 'gram'");
    sweep->add_option("--lowercase", sweep_lowercase, "lowercase dataset words");

    // report
    std::string results_path, group_by;
    auto* report = app.add_subcommand("report", "aggregate sweep results by hyper-parameter");
    report->add_option("--results", results_path, "results TSV from sweep")->required();
    report->add_option("--group-by", group_by, "position|window|cross|stop|scheme")
        ->required()
        ->check(CLI::IsMember({"position", "window", "window_size", "cross",
                               "cross_sentential", "stop", "stop_removal", "scheme"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) {
            if (!min_lr_given) config.min_lr = config.initial_lr * 1e-4;
            return cmd_train(train_corpus, train_window, config, output, quiet);
        }
        if (pairs->parsed())
            return cmd_pairs(pairs_corpus, pairs_window, pairs_seed, accept_all, limit);
        if (eval->parsed())
            return cmd_eval(model_path, simlex_path, analogy_path, semantic_only, lowercase,
                            sections);
        if (sweep->parsed())
            return cmd_sweep(raw_path, filtered_path, grid_path, sweep_simlex, sweep_analogy,
                             out_path, jobs, sweep_seed, sweep_semantic_only, sweep_lowercase);
        if (report->parsed()) return cmd_report(results_path, group_by);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
