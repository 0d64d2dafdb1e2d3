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

// Benchmark of the pair-extraction and training kernels on a synthetic
// corpus: the serial reference (workers=1) against the OpenMP path, and
// the linear against the sqrt weighting scheme.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ctxwin/corpus.hpp"
#include "ctxwin/rng.hpp"
#include "ctxwin/trainer.hpp"
#include "ctxwin/windowing.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Zipf-ish synthetic corpus: token ranks drawn with probability ~ 1/rank.
ctxwin::Corpus synthetic_corpus(std::size_t tokens, std::int32_t vocab_size,
                                std::size_t sentence_len, std::uint64_t seed) {
    std::vector<double> cdf(static_cast<std::size_t>(vocab_size));
    double total = 0.0;
    for (std::int32_t r = 0; r < vocab_size; ++r) {
        total += 1.0 / (1.0 + r);
        cdf[static_cast<std::size_t>(r)] = total;
    }
    for (double& c : cdf) c /= total;
    cdf.back() = 1.0;

    ctxwin::Rng rng(seed);
    ctxwin::Corpus corpus;
    std::vector<std::int32_t> sentence;
    std::size_t produced = 0;
    while (produced < tokens) {
        sentence.clear();
        const std::size_t len = std::min(sentence_len, tokens - produced);
        for (std::size_t i = 0; i < len; ++i) {
            const double u = rng.next_double();
            const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
            sentence.push_back(static_cast<std::int32_t>(it - cdf.begin()));
        }
        corpus.append_sentence(sentence, produced == 0);
        produced += len;
    }
    return corpus;
}

std::vector<std::uint64_t> corpus_counts(const ctxwin::Corpus& corpus,
                                         std::int32_t vocab_size) {
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(vocab_size), 1);
    for (std::int32_t t : corpus.tokens()) ++counts[static_cast<std::size_t>(t)];
    return counts;
}

void bench_pairs(const ctxwin::Corpus& corpus, int window) {
    std::printf("pair extraction, L=%d, symmetric, %zu tokens\n", window,
                corpus.total_tokens());
    for (const ctxwin::Scheme scheme : {ctxwin::Scheme::linear, ctxwin::Scheme::sqrt}) {
        const ctxwin::WindowPolicy policy{window, scheme, ctxwin::Position::symmetric, false};
        ctxwin::Rng rng(7);
        std::uint64_t emitted = 0;
        const auto t0 = Clock::now();
        ctxwin::for_each_pair(corpus, policy, rng, false,
                              [&](const ctxwin::ContextPair&) { ++emitted; });
        const double dt = seconds_since(t0);
        std::printf("  %-6s  %12llu pairs  %8.2f Mpairs/s  (%.3f expected per focus)\n",
                    ctxwin::to_string(scheme), static_cast<unsigned long long>(emitted),
                    emitted / dt / 1e6, ctxwin::expected_pairs_per_focus(policy));
    }
}

void bench_train(const ctxwin::Corpus& corpus, const ctxwin::NegativeSampler& sampler,
                 int dim, int window, int epochs, const std::vector<int>& worker_counts) {
    const ctxwin::WindowPolicy policy{window, ctxwin::Scheme::linear,
                                      ctxwin::Position::symmetric, false};
    std::printf("training, D=%d, L=%d, %d epoch(s), %zu tokens\n", dim, window, epochs,
                corpus.total_tokens());
    double serial_time = 0.0;
    for (int workers : worker_counts) {
        ctxwin::TrainConfig config;
        config.dim = dim;
        config.negatives = 5;
        config.epochs = epochs;
        config.seed = 99;
        config.workers = workers;
        ctxwin::TrainStats stats;
        // workers=1 runs the serial reference; more workers run the
        // OpenMP kernel with racy shared updates.
        const auto model = workers == 1
                               ? ctxwin::train(corpus, policy, config, sampler, &stats)
                               : ctxwin::detail::train_openmp(corpus, policy, config,
                                                              sampler, &stats);
        (void)model;
        if (workers == 1) serial_time = stats.seconds;
        const double tokens_per_s =
            static_cast<double>(corpus.total_tokens()) * epochs / stats.seconds;
        std::printf(
            "  workers=%d%s  %6.2f s  %8.0f ktokens/s  %8.2f Mpairs/s  speedup %.2fx\n",
            workers, workers == 1 ? " (serial reference)" : "", stats.seconds,
            tokens_per_s / 1e3, stats.pairs_emitted / stats.seconds / 1e6,
            serial_time / stats.seconds);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ctxwin kernel benchmark"};
    std::size_t tokens = 2'000'000;
    std::int32_t vocab = 20'000;
    int dim = 100;
    int window = 5;
    int epochs = 1;
    std::size_t sentence_len = 20;
    int max_workers = omp_get_max_threads();
    app.add_option("--tokens", tokens, "synthetic corpus size");
    app.add_option("--vocab", vocab, "synthetic vocabulary size");
    app.add_option("--dim", dim, "embedding dimensionality");
    app.add_option("--window", window, "maximum window size");
    app.add_option("--epochs", epochs, "training passes");
    app.add_option("--sentence-len", sentence_len, "tokens per synthetic sentence");
    app.add_option("--max-workers", max_workers, "highest worker count to benchmark");
    CLI11_PARSE(app, argc, argv);

    const ctxwin::Corpus corpus = synthetic_corpus(tokens, vocab, sentence_len, 4242);
    const auto counts = corpus_counts(corpus, vocab);
    const ctxwin::NegativeSampler sampler(counts);

    bench_pairs(corpus, window);

    std::vector<int> worker_counts{1};
    for (int w = 2; w <= max_workers; w *= 2) worker_counts.push_back(w);
    if (worker_counts.back() != max_workers && max_workers > 1)
        worker_counts.push_back(max_workers);
    bench_train(corpus, sampler, dim, window, epochs, worker_counts);
    return 0;
}
