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

#include "ctxwin/trainer.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <stdexcept>

#include "ctxwin/errors.hpp"

namespace ctxwin {

namespace {

constexpr std::uint64_t kLrBatch = 256;  // pairs between learning-rate refreshes

struct Scratch {
    explicit Scratch(int dim) : grad(static_cast<std::size_t>(dim), 0.0) {}
    std::vector<double> grad;
    std::vector<double> coeff;
};

inline void check_id(const EmbeddingModel& model, std::int32_t id, const char* what) {
    if (id < 0 || id >= model.vocab_size)
        throw std::invalid_argument(std::string(what) + " id out of range: " +
                                    std::to_string(id));
}

// Shared by train_pair and sgns_objective: dot products, sigmoid
// coefficients and the loss, all at the pre-update state.
double score_pass(const EmbeddingModel& model, std::int32_t focus, std::int32_t context,
                  std::span<const std::int32_t> negatives, std::vector<double>* coeff) {
    const int dim = model.dim;
    const double* v = model.input.data() + static_cast<std::size_t>(focus) * dim;
    if (coeff != nullptr) coeff->resize(negatives.size() + 1);
    double objective = 0.0;
    for (std::size_t i = 0; i <= negatives.size(); ++i) {
        const bool positive = i == 0;
        const std::int32_t id = positive ? context : negatives[i - 1];
        const double* u = model.output.data() + static_cast<std::size_t>(id) * dim;
        double dot = 0.0;
#pragma omp simd reduction(+ : dot)
        for (int j = 0; j < dim; ++j) dot += v[j] * u[j];
        if (coeff != nullptr) (*coeff)[i] = (positive ? 1.0 : 0.0) - sigmoid(dot);
        objective += positive ? log_sigmoid(dot) : log_sigmoid(-dot);
    }
    return objective;
}

double train_pair_ws(EmbeddingModel& model, std::int32_t focus, std::int32_t context,
                     std::span<const std::int32_t> negatives, double lr, Scratch& scratch) {
    check_id(model, focus, "focus");
    check_id(model, context, "context");
    for (std::int32_t n : negatives) check_id(model, n, "negative");
    if (lr < 0.0) throw std::invalid_argument("negative learning rate");

    const int dim = model.dim;
    const double loss = -score_pass(model, focus, context, negatives, &scratch.coeff);
    if (!std::isfinite(loss))
        throw NonFiniteError("non-finite loss at pair (" + std::to_string(focus) + ", " +
                             std::to_string(context) + ")");

    double* v = model.input.data() + static_cast<std::size_t>(focus) * dim;
    double* grad = scratch.grad.data();
    std::fill(scratch.grad.begin(), scratch.grad.end(), 0.0);
    for (std::size_t i = 0; i <= negatives.size(); ++i) {
        const std::int32_t id = i == 0 ? context : negatives[i - 1];
        const double* u = model.output.data() + static_cast<std::size_t>(id) * dim;
        const double g = scratch.coeff[i];
#pragma omp simd
        for (int j = 0; j < dim; ++j) grad[j] += g * u[j];
    }
    for (std::size_t i = 0; i <= negatives.size(); ++i) {
        const std::int32_t id = i == 0 ? context : negatives[i - 1];
        double* u = model.output.data() + static_cast<std::size_t>(id) * dim;
        const double step = lr * scratch.coeff[i];
#pragma omp simd
        for (int j = 0; j < dim; ++j) u[j] += step * v[j];
    }
#pragma omp simd
    for (int j = 0; j < dim; ++j) v[j] += lr * grad[j];
    return loss;
}

struct Schedule {
    double initial;
    double min;
    double budget;  // expected total pairs, >= 1

    double at(std::uint64_t pairs_done) const {
        const double f = static_cast<double>(pairs_done) / budget;
        return std::max(min, initial - (initial - min) * f);
    }
};

struct WorkerResult {
    std::uint64_t pairs = 0;
    double loss_sum = 0.0;
    double first_lr = -1.0;
    double last_lr = 0.0;
};

void train_sentences(EmbeddingModel& model, const Corpus& corpus,
                     const WindowPolicy& policy, const TrainConfig& config,
                     const NegativeSampler& sampler, Rng& rng, std::size_t s_begin,
                     std::size_t s_end, const Schedule& sched,
                     std::atomic<std::uint64_t>& progress, WorkerResult& result,
                     bool report) {
    Scratch scratch(config.dim);
    std::vector<std::int32_t> negatives;
    // everything hot stays in locals; result is written once at the end so
    // adjacent workers never share a cache line in the inner loop
    double lr = sched.at(progress.load(std::memory_order_relaxed));
    double first_lr = -1.0;
    double last_lr = 0.0;
    double loss_sum = 0.0;
    std::uint64_t pairs = 0;
    std::uint64_t local = 0;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        for_each_pair_in_sentences(
            corpus, policy, s_begin, s_end, rng, false, [&](const ContextPair& pair) {
                sampler.sample_negatives(config.negatives, pair.context, rng, negatives);
                const double loss =
                    train_pair_ws(model, pair.focus, pair.context, negatives, lr, scratch);
                if (first_lr < 0.0) first_lr = lr;
                last_lr = lr;
                loss_sum += loss;
                ++pairs;
                if (++local == kLrBatch) {
                    const std::uint64_t done =
                        progress.fetch_add(local, std::memory_order_relaxed) + local;
                    lr = sched.at(done);
                    local = 0;
                    if (report && (done & ((1u << 21) - 1)) < kLrBatch)
                        std::fprintf(stderr, "  progress %.1f%%  lr %.6f\n",
                                     100.0 * static_cast<double>(done) / sched.budget, lr);
                }
            });
    }
    progress.fetch_add(local, std::memory_order_relaxed);
    result.pairs = pairs;
    result.loss_sum = loss_sum;
    result.first_lr = first_lr;
    result.last_lr = last_lr;
}

void validate_config(const TrainConfig& config) {
    if (config.dim < 1) throw std::invalid_argument("dim must be >= 1");
    if (config.negatives < 1) throw std::invalid_argument("negatives must be >= 1");
    if (config.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (config.workers < 1) throw std::invalid_argument("workers must be >= 1");
    if (!(config.min_lr > 0.0) || !(config.min_lr < config.initial_lr))
        throw std::invalid_argument("require 0 < min_lr < initial_lr");
}

// Contiguous sentence shards balanced by token count.
std::vector<std::size_t> shard_cuts(const Corpus& corpus, int workers) {
    const std::size_t n = corpus.sentence_count();
    std::vector<std::size_t> cuts(static_cast<std::size_t>(workers) + 1, n);
    cuts[0] = 0;
    const double per = static_cast<double>(corpus.total_tokens()) / workers;
    std::size_t s = 0;
    for (int w = 1; w < workers; ++w) {
        const double target = per * w;
        while (s < n && static_cast<double>(corpus.sentence_end(s)) < target) ++s;
        cuts[static_cast<std::size_t>(w)] = s;
    }
    return cuts;
}

EmbeddingModel train_impl(const Corpus& corpus, const WindowPolicy& policy,
                          const TrainConfig& config, const NegativeSampler& sampler,
                          TrainStats* stats, bool verbose, bool use_openmp) {
    validate_config(config);
    if (corpus.empty()) throw std::invalid_argument("corpus is empty");
    const auto vocab_size = static_cast<std::int64_t>(sampler.size());
    if (vocab_size < 2) throw std::invalid_argument("vocabulary too small to train");
    if (corpus.max_token_id() >= vocab_size)
        throw std::invalid_argument("corpus token id exceeds vocabulary size");

    EmbeddingModel model = init_model(vocab_size, config.dim, config.seed);
    const Schedule sched{config.initial_lr, config.min_lr,
                         std::max(1.0, static_cast<double>(config.epochs) *
                                           static_cast<double>(corpus.total_tokens()) *
                                           expected_pairs_per_focus(policy))};
    std::atomic<std::uint64_t> progress{0};
    const auto t0 = std::chrono::steady_clock::now();

    const int workers = config.workers;
    std::vector<WorkerResult> results(static_cast<std::size_t>(workers));
    if (!use_openmp) {
        Rng rng(derive_seed(config.seed, 1));
        train_sentences(model, corpus, policy, config, sampler, rng, 0,
                        corpus.sentence_count(), sched, progress, results[0], verbose);
    } else {
        const auto cuts = shard_cuts(corpus, workers);
        std::exception_ptr error;
#pragma omp parallel num_threads(workers)
        {
#pragma omp for schedule(static, 1)
            for (int w = 0; w < workers; ++w) {
                try {
                    Rng rng(derive_seed(config.seed, 1 + static_cast<std::uint64_t>(w)));
                    train_sentences(model, corpus, policy, config, sampler, rng,
                                    cuts[static_cast<std::size_t>(w)],
                                    cuts[static_cast<std::size_t>(w) + 1], sched, progress,
                                    results[static_cast<std::size_t>(w)],
                                    verbose && w == 0);
                } catch (...) {
#pragma omp critical(ctxwin_train_error)
                    if (!error) error = std::current_exception();
                }
            }
        }
        if (error) std::rethrow_exception(error);
    }

    if (stats != nullptr) {
        *stats = TrainStats{};
        double loss_sum = 0.0;
        double last = sched.initial;
        for (const auto& r : results) {
            stats->pairs_emitted += r.pairs;
            loss_sum += r.loss_sum;
            if (r.pairs > 0) last = std::min(last, r.last_lr);
        }
        stats->first_lr = results[0].first_lr >= 0.0 ? results[0].first_lr : sched.at(0);
        stats->last_lr = last;
        stats->mean_loss =
            stats->pairs_emitted > 0 ? loss_sum / static_cast<double>(stats->pairs_emitted) : 0.0;
        stats->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    return model;
}

}  // namespace

EmbeddingModel init_model(std::int64_t vocab_size, int dim, std::uint64_t seed) {
    if (vocab_size < 1) throw std::invalid_argument("vocab_size must be >= 1");
    if (dim < 1) throw std::invalid_argument("dim must be >= 1");
    EmbeddingModel model;
    model.vocab_size = vocab_size;
    model.dim = dim;
    const std::size_t n = static_cast<std::size_t>(vocab_size) * static_cast<std::size_t>(dim);
    model.input.resize(n);
    model.output.assign(n, 0.0);
    Rng rng(seed);
    for (double& x : model.input) x = (rng.next_double() - 0.5) / dim;
    return model;
}

NegativeSampler::NegativeSampler(std::span<const std::uint64_t> counts, double power) {
    if (counts.empty()) throw std::invalid_argument("sampler needs a non-empty vocabulary");
    cdf_.resize(counts.size());
    double total = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == 0) throw std::invalid_argument("zero count in vocabulary");
        total += std::pow(static_cast<double>(counts[i]), power);
        cdf_[i] = total;
    }
    for (double& c : cdf_) c /= total;
    cdf_.back() = 1.0;
}

double NegativeSampler::probability(std::int32_t id) const {
    const auto i = static_cast<std::size_t>(id);
    return i == 0 ? cdf_[0] : cdf_[i] - cdf_[i - 1];
}

std::int32_t NegativeSampler::sample(Rng& rng) const {
    const double u = rng.next_double();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const auto idx = static_cast<std::size_t>(it - cdf_.begin());
    return static_cast<std::int32_t>(std::min(idx, cdf_.size() - 1));
}

void NegativeSampler::sample_negatives(int k, std::int32_t exclude, Rng& rng,
                                       std::vector<std::int32_t>& out) const {
    if (k < 0) throw std::invalid_argument("negative k");
    out.clear();
    if (k == 0) return;
    if (cdf_.size() < 2)
        throw std::invalid_argument("cannot sample negatives from a vocabulary of size 1");
    out.reserve(static_cast<std::size_t>(k));
    while (out.size() < static_cast<std::size_t>(k)) {
        const std::int32_t draw = sample(rng);
        if (draw != exclude) out.push_back(draw);
    }
}

std::vector<std::int32_t> NegativeSampler::sample_negatives(int k, std::int32_t exclude,
                                                            Rng& rng) const {
    std::vector<std::int32_t> out;
    sample_negatives(k, exclude, rng, out);
    return out;
}

double train_pair(EmbeddingModel& model, std::int32_t focus, std::int32_t context,
                  std::span<const std::int32_t> negatives, double lr) {
    Scratch scratch(model.dim);
    return train_pair_ws(model, focus, context, negatives, lr, scratch);
}

double sgns_objective(const EmbeddingModel& model, std::int32_t focus, std::int32_t context,
                      std::span<const std::int32_t> negatives) {
    check_id(model, focus, "focus");
    check_id(model, context, "context");
    for (std::int32_t n : negatives) check_id(model, n, "negative");
    return score_pass(model, focus, context, negatives, nullptr);
}

EmbeddingModel train(const Corpus& corpus, const WindowPolicy& policy,
                     const TrainConfig& config, const NegativeSampler& sampler,
                     TrainStats* stats, bool verbose) {
    return train_impl(corpus, policy, config, sampler, stats, verbose,
                      config.workers > 1);
}

namespace detail {

EmbeddingModel train_openmp(const Corpus& corpus, const WindowPolicy& policy,
                            const TrainConfig& config, const NegativeSampler& sampler,
                            TrainStats* stats, bool verbose) {
    return train_impl(corpus, policy, config, sampler, stats, verbose, true);
}

}  // namespace detail

}  // namespace ctxwin
