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

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "ctxwin/corpus.hpp"
#include "ctxwin/rng.hpp"
#include "ctxwin/windowing.hpp"

namespace ctxwin {

// Input vectors are the focus-word representations (the published
// embeddings); output vectors are the context representations. Both are
// dense row-major V x D.
struct EmbeddingModel {
    std::int64_t vocab_size = 0;
    int dim = 0;
    std::vector<double> input;
    std::vector<double> output;

    std::span<double> input_row(std::int64_t id) {
        return std::span<double>(input).subspan(static_cast<std::size_t>(id) * dim, dim);
    }
    std::span<const double> input_row(std::int64_t id) const {
        return std::span<const double>(input).subspan(static_cast<std::size_t>(id) * dim, dim);
    }
    std::span<double> output_row(std::int64_t id) {
        return std::span<double>(output).subspan(static_cast<std::size_t>(id) * dim, dim);
    }
    std::span<const double> output_row(std::int64_t id) const {
        return std::span<const double>(output).subspan(static_cast<std::size_t>(id) * dim, dim);
    }
};

struct TrainConfig {
    int dim = 300;
    int negatives = 10;
    int epochs = 5;
    double initial_lr = 0.025;
    double min_lr = 0.025e-4;  // initial_lr * 1e-4
    std::uint64_t seed = 1;
    int workers = 1;
};

// Input rows i.i.d. uniform in [-0.5/dim, +0.5/dim], output rows zero.
EmbeddingModel init_model(std::int64_t vocab_size, int dim, std::uint64_t seed);

inline double sigmoid(double x) {
    if (x >= 0.0) {
        const double t = std::exp(-x);
        return 1.0 / (1.0 + t);
    }
    const double t = std::exp(x);
    return t / (1.0 + t);
}

// log(sigmoid(x)) without overflow for large |x|.
inline double log_sigmoid(double x) {
    return x < 0.0 ? x - std::log1p(std::exp(x)) : -std::log1p(std::exp(-x));
}

// Unigram distribution raised to the 0.75 power, sampled by binary search
// over the cumulative distribution.
class NegativeSampler {
public:
    explicit NegativeSampler(std::span<const std::uint64_t> counts, double power = 0.75);
    explicit NegativeSampler(const Vocabulary& vocab, double power = 0.75)
        : NegativeSampler(vocab.counts(), power) {}

    std::size_t size() const { return cdf_.size(); }
    double probability(std::int32_t id) const;

    std::int32_t sample(Rng& rng) const;

    // k draws; any draw equal to `exclude` is redrawn.
    void sample_negatives(int k, std::int32_t exclude, Rng& rng,
                          std::vector<std::int32_t>& out) const;
    std::vector<std::int32_t> sample_negatives(int k, std::int32_t exclude, Rng& rng) const;

private:
    std::vector<double> cdf_;
};

// One gradient-ascent step on
//     log sigmoid(v_f . u_c) + sum_n log sigmoid(-v_f . u_n)
// touching exactly the focus input row, the context output row and the
// negative output rows. All gradients are evaluated at the pre-update
// state, so repeated negative rows accumulate their terms exactly.
// Returns the pre-update objective negated (a loss).
double train_pair(EmbeddingModel& model, std::int32_t focus, std::int32_t context,
                  std::span<const std::int32_t> negatives, double lr);

// The objective itself (not negated); used by gradient checks.
double sgns_objective(const EmbeddingModel& model, std::int32_t focus, std::int32_t context,
                      std::span<const std::int32_t> negatives);

struct TrainStats {
    std::uint64_t pairs_emitted = 0;
    double first_lr = 0.0;
    double last_lr = 0.0;
    double mean_loss = 0.0;
    double seconds = 0.0;
};

// Runs `epochs` passes of the pair stream, one train_pair step per emitted
// pair, with the learning rate decayed linearly from initial_lr to min_lr
// across the expected pair budget (epochs * tokens * expected_pairs_per_focus).
//
// workers == 1 is the serial reference: bit-reproducible for a fixed seed.
// workers > 1 shards sentences across OpenMP threads updating the shared
// matrices without locks; lost updates are tolerated and convergence is
// statistical, so multi-worker runs are not bit-reproducible.
EmbeddingModel train(const Corpus& corpus, const WindowPolicy& policy,
                     const TrainConfig& config, const NegativeSampler& sampler,
                     TrainStats* stats = nullptr, bool verbose = false);

namespace detail {

// The OpenMP path regardless of worker count; exposed so tests and the
// benchmark can compare it against the serial reference directly.
EmbeddingModel train_openmp(const Corpus& corpus, const WindowPolicy& policy,
                            const TrainConfig& config, const NegativeSampler& sampler,
                            TrainStats* stats = nullptr, bool verbose = false);

}  // namespace detail

}  // namespace ctxwin
