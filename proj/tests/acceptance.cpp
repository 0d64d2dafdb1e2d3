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

// End-to-end acceptance suite. Each check prints one PASS/FAIL line; the
// desk-scale check needs real datasets (see README) and prints SKIP when
// they are absent. Exit code: 0 all pass, 1 any failure, 77 when running
// --desk-scale-only without the datasets.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "ctxwin/corpus.hpp"
#include "ctxwin/errors.hpp"
#include "ctxwin/eval.hpp"
#include "ctxwin/model_io.hpp"
#include "ctxwin/rng.hpp"
#include "ctxwin/sweep.hpp"
#include "ctxwin/trainer.hpp"
#include "ctxwin/windowing.hpp"

using namespace ctxwin;

namespace {

struct Outcome {
    enum class Kind { pass, fail, skip } kind = Kind::pass;
    std::string detail;
};

Outcome pass(std::string detail) { return {Outcome::Kind::pass, std::move(detail)}; }
Outcome fail(std::string detail) { return {Outcome::Kind::fail, std::move(detail)}; }
Outcome skip(std::string detail) { return {Outcome::Kind::skip, std::move(detail)}; }

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return std::string(buf);
}

// ---------------------------------------------------------------- sampling

Outcome check_sampling_marginal() {
    const auto t0 = std::chrono::steady_clock::now();
    const int trials = 100000;
    std::string headline;
    int cells = 0, cells_ok = 0;
    double worst_sigma = 0.0;

    // L=3 d=2 is the canonical linear-weighting case (p = 2/3); the other
    // sizes match the sweepable grid.
    for (Scheme scheme : {Scheme::linear, Scheme::sqrt}) {
        for (int L : {1, 2, 3, 5, 10}) {
            // one sentence t0..tL; focus t0, right side, all distances at once
            std::vector<std::int32_t> sent(static_cast<std::size_t>(L) + 1);
            for (int i = 0; i <= L; ++i) sent[static_cast<std::size_t>(i)] = i;
            const Corpus corpus = Corpus::from_sentences({sent});
            const WindowPolicy policy{L, scheme, Position::right, false};

            std::vector<long> hits(static_cast<std::size_t>(L) + 1, 0);
            const std::uint64_t cell_seed = derive_seed(
                0xACCE97, static_cast<std::uint64_t>(L) * 2 + (scheme == Scheme::sqrt ? 1 : 0));
            for (int t = 0; t < trials; ++t) {
                Rng rng(derive_seed(cell_seed, static_cast<std::uint64_t>(t)));
                for_each_pair(corpus, policy, rng, false, [&](const ContextPair& pair) {
                    if (pair.focus == 0) ++hits[static_cast<std::size_t>(pair.distance)];
                });
            }
            for (int d = 1; d <= L; ++d) {
                const double p = acceptance_probability(policy, d);
                const double emp =
                    static_cast<double>(hits[static_cast<std::size_t>(d)]) / trials;
                const double se = std::sqrt(p * (1.0 - p) / trials);
                const double dev = std::abs(emp - p);
                ++cells;
                if (dev <= 3.0 * se + 1e-12)
                    ++cells_ok;
                else
                    return fail(fmt("%s L=%d d=%d: emp %.5f vs p %.5f (%.1f SE)",
                                    to_string(scheme), L, d, emp, p,
                                    se > 0 ? dev / se : 0.0));
                if (se > 0) worst_sigma = std::max(worst_sigma, dev / se);
                if (scheme == Scheme::linear && L == 3 && d == 2) {
                    if (std::abs(emp - 2.0 / 3.0) > 0.01)
                        return fail(fmt("linear L=3 d=2: emp %.5f not within 0.01 of 2/3", emp));
                    headline = fmt("linear L=3 d=2: %.5f (2/3 +- 0.01)", emp);
                }
            }
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= 10.0) return fail(fmt("took %.1f s (budget 10 s)", secs));
    return pass(fmt("%s; %d/%d marginals within 3 SE (worst %.2f SE) in %.1f s",
                    headline.c_str(), cells_ok, cells, worst_sigma, secs));
}

// ------------------------------------------------------------ grid count

Outcome check_grid_cardinality() {
    const GridSpec spec;
    const auto n = enumerate_grid(spec).size();
    if (n != 96) return fail(fmt("default grid has %zu cells, want 96", n));
    return pass("default grid enumerates 4 x 2 x 3 x 2 x 2 = 96 cells");
}

// -------------------------------------------------------- gradient check

Outcome check_gradients() {
    const auto t0 = std::chrono::steady_clock::now();
    const double h = 1e-4;
    double worst = 0.0;
    for (int inst = 0; inst < 100; ++inst) {
        Rng rng(derive_seed(0x6AD, static_cast<std::uint64_t>(inst)));
        const auto v = static_cast<std::int64_t>(2 + rng.next_below(9));
        const int d = static_cast<int>(1 + rng.next_below(8));
        const int k = static_cast<int>(rng.next_below(6));
        EmbeddingModel base = init_model(v, d, 1);
        for (double& x : base.input) x = 2.0 * rng.next_double() - 1.0;
        for (double& x : base.output) x = 2.0 * rng.next_double() - 1.0;
        const auto uv = static_cast<std::uint64_t>(v);
        const auto focus = static_cast<std::int32_t>(rng.next_below(uv));
        const auto context = static_cast<std::int32_t>(rng.next_below(uv));
        std::vector<std::int32_t> negs;
        for (int i = 0; i < k; ++i)
            negs.push_back(static_cast<std::int32_t>(rng.next_below(uv)));

        EmbeddingModel stepped = base;
        train_pair(stepped, focus, context, negs, 1.0);  // lr=1: update == gradient

        auto check = [&](bool input_side, std::int32_t row) -> double {
            double worst_here = 0.0;
            for (int j = 0; j < d; ++j) {
                const std::size_t at = static_cast<std::size_t>(row) * d + j;
                EmbeddingModel probe = base;
                auto& store = input_side ? probe.input : probe.output;
                const auto& base_store = input_side ? base.input : base.output;
                const auto& stepped_store = input_side ? stepped.input : stepped.output;
                store[at] = base_store[at] + h;
                const double up = sgns_objective(probe, focus, context, negs);
                store[at] = base_store[at] - h;
                const double down = sgns_objective(probe, focus, context, negs);
                const double fd = (up - down) / (2.0 * h);
                const double analytic = stepped_store[at] - base_store[at];
                const double rel =
                    std::abs(analytic - fd) / std::max({1.0, std::abs(analytic), std::abs(fd)});
                worst_here = std::max(worst_here, rel);
            }
            return worst_here;
        };
        worst = std::max(worst, check(true, focus));
        worst = std::max(worst, check(false, context));
        for (std::int32_t n : negs) worst = std::max(worst, check(false, n));
        if (worst >= 1e-4)
            return fail(fmt("instance %d (V=%lld D=%d k=%d): relative error %.2e", inst,
                            static_cast<long long>(v), d, k, worst));
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= 5.0) return fail(fmt("took %.1f s (budget 5 s)", secs));
    return pass(fmt("100 random instances, worst relative error %.2e (< 1e-4) in %.1f s",
                    worst, secs));
}

// ----------------------------------------------------------- init loss

Outcome check_init_loss() {
    double worst = 0.0;
    for (int k : {0, 1, 3, 10}) {
        EmbeddingModel m = init_model(40, 64, 5);
        std::vector<std::int32_t> negs;
        for (int i = 0; i < k; ++i) negs.push_back(2 + i);
        const double loss = train_pair(m, 0, 1, negs, 0.025);
        const double want = (1.0 + k) * std::log(2.0);
        worst = std::max(worst, std::abs(loss - want));
    }
    if (worst > 1e-9) return fail(fmt("deviation from (1+k) ln 2 is %.2e", worst));
    return pass(fmt("first-pair loss equals (1+k) ln 2, max deviation %.1e (k in 0,1,3,10)",
                    worst));
}

// ------------------------------------------------------- spearman oracle

double spearman_bruteforce(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    auto rank_of = [n](const std::vector<double>& v, std::size_t i) {
        double less = 0, equal = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (v[j] < v[i]) ++less;
            if (v[j] == v[i]) ++equal;
        }
        return less + 0.5 * (equal + 1.0);
    };
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += rank_of(a, i);
        mb += rank_of(b, i);
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double cov = 0, va = 0, vb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = rank_of(a, i) - ma;
        const double db = rank_of(b, i) - mb;
        cov += da * db;
        va += da * da;
        vb += db * db;
    }
    return cov / std::sqrt(va * vb);
}

Outcome check_spearman_oracle() {
    Rng rng(0x5EA2);
    double worst = 0.0;
    int done = 0;
    while (done < 50) {
        const std::size_t n = 2 + rng.next_below(19);
        std::vector<double> a, b;
        for (std::size_t i = 0; i < n; ++i) {
            a.push_back(static_cast<double>(rng.next_below(7)));
            b.push_back(static_cast<double>(rng.next_below(7)));
        }
        auto has_variance = [](const std::vector<double>& v) {
            for (double x : v)
                if (x != v.front()) return true;
            return false;
        };
        if (!has_variance(a) || !has_variance(b)) continue;
        const double got = spearman(a, b);
        const double want = spearman_bruteforce(a, b);
        worst = std::max(worst, std::abs(got - want));
        if (worst > 1e-12)
            return fail(fmt("list %d (n=%zu): |%.17g - %.17g| = %.2e", done, n, got, want,
                            worst));
        ++done;
    }
    return pass(fmt("50 random tied lists, max |production - oracle| = %.1e (< 1e-12)", worst));
}

// -------------------------------------------------------- analogy oracle

std::int32_t analogy_bruteforce(const EmbeddingModel& m, std::int32_t a, std::int32_t b,
                                std::int32_t c) {
    const int d = m.dim;
    auto normed = [&](std::int32_t id) {
        std::vector<double> out(m.input_row(id).begin(), m.input_row(id).end());
        double norm = 0;
        for (double x : out) norm += x * x;
        norm = std::sqrt(norm);
        for (double& x : out) x /= norm;
        return out;
    };
    const auto na = normed(a), nb = normed(b), nc = normed(c);
    std::vector<double> target(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j)
        target[static_cast<std::size_t>(j)] = nb[static_cast<std::size_t>(j)] -
                                              na[static_cast<std::size_t>(j)] +
                                              nc[static_cast<std::size_t>(j)];
    double tnorm = 0;
    for (double x : target) tnorm += x * x;
    tnorm = std::sqrt(tnorm);
    std::int32_t best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::int32_t x = 0; x < m.vocab_size; ++x) {
        if (x == a || x == b || x == c) continue;
        const auto nx = normed(x);
        double dot = 0;
        for (int j = 0; j < d; ++j)
            dot += nx[static_cast<std::size_t>(j)] * target[static_cast<std::size_t>(j)];
        if (dot / tnorm > best_score) {
            best_score = dot / tnorm;
            best = x;
        }
    }
    return best;
}

Outcome check_analogy_oracle() {
    Rng rng(0xA7A1);
    int questions = 0;
    for (int fixture = 0; fixture < 100; ++fixture) {
        const std::size_t v = 4 + rng.next_below(47);
        const int d = 2 + static_cast<int>(rng.next_below(15));
        EmbeddingModel m;
        m.vocab_size = static_cast<std::int64_t>(v);
        m.dim = d;
        m.input.resize(v * static_cast<std::size_t>(d));
        m.output.assign(m.input.size(), 0.0);
        for (double& x : m.input) x = 2.0 * rng.next_double() - 1.0;
        for (int q = 0; q < 5; ++q) {
            const auto a = static_cast<std::int32_t>(rng.next_below(v));
            const auto b = static_cast<std::int32_t>(rng.next_below(v));
            const auto c = static_cast<std::int32_t>(rng.next_below(v));
            const auto got = analogy_predict(m, a, b, c);
            const auto want = analogy_bruteforce(m, a, b, c);
            ++questions;
            if (got != want)
                return fail(fmt("fixture %d (V=%zu D=%d): production %d vs oracle %d",
                                fixture, v, d, got, want));
        }
    }
    return pass(fmt("%d questions on 100 random fixtures agree with the naive scan",
                    questions));
}

// ----------------------------------------------------- boundary invariant

Corpus fuzz_corpus(Rng& rng, std::vector<std::size_t>& sentence_of_id,
                   std::vector<std::size_t>& doc_of_id) {
    sentence_of_id.clear();
    doc_of_id.clear();
    const std::size_t n_sent = 1 + rng.next_below(6);
    std::vector<std::vector<std::int32_t>> sentences(n_sent);
    std::vector<std::size_t> breaks{0};
    std::int32_t next_id = 0;
    std::size_t doc = 0;
    for (std::size_t s = 0; s < n_sent; ++s) {
        if (s > 0 && rng.next_below(3) == 0) breaks.push_back(s);
        if (s > 0 && breaks.back() == s) ++doc;
        const std::size_t len = 1 + rng.next_below(7);
        for (std::size_t i = 0; i < len; ++i) {
            sentences[s].push_back(next_id++);
            sentence_of_id.push_back(s);
            doc_of_id.push_back(doc);
        }
    }
    return Corpus::from_sentences(sentences, breaks);
}

Outcome check_boundary_invariant() {
    Rng gen(0xB0D);
    std::vector<std::size_t> sentence_of_id, doc_of_id;
    long pairs_checked = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const Corpus corpus = fuzz_corpus(gen, sentence_of_id, doc_of_id);
        const int L = 1 + static_cast<int>(gen.next_below(4));
        const bool cross = (trial % 2) == 0;
        const bool accept_all = gen.next_below(2) != 0;
        const WindowPolicy policy{L, gen.next_below(2) != 0 ? Scheme::linear : Scheme::sqrt,
                                  Position::symmetric, cross};
        Rng rng(derive_seed(0xB0D2, static_cast<std::uint64_t>(trial)));
        bool bad = false;
        std::int32_t bad_focus = 0, bad_context = 0;
        for_each_pair(corpus, policy, rng, accept_all, [&](const ContextPair& p) {
            ++pairs_checked;
            const auto f = static_cast<std::size_t>(p.focus);
            const auto c = static_cast<std::size_t>(p.context);
            const bool violation = cross ? doc_of_id[f] != doc_of_id[c]
                                         : sentence_of_id[f] != sentence_of_id[c];
            if (violation || p.distance < 1 || p.distance > L) {
                bad = true;
                bad_focus = p.focus;
                bad_context = p.context;
            }
        });
        if (bad)
            return fail(fmt("trial %d (cross=%d): pair (%d, %d) crosses a boundary", trial,
                            cross ? 1 : 0, bad_focus, bad_context));
    }
    return pass(fmt("10000 fuzzed corpora, %ld pairs, zero boundary violations",
                    pairs_checked));
}

// ------------------------------------------------- position decomposition

Outcome check_position_decomposition() {
    Rng gen(0xDEC);
    std::vector<std::size_t> s_of, d_of;
    for (int trial = 0; trial < 1000; ++trial) {
        const Corpus corpus = fuzz_corpus(gen, s_of, d_of);
        const int L = 1 + static_cast<int>(gen.next_below(5));
        const bool cross = gen.next_below(2) != 0;
        auto triples = [&](Position pos) {
            Rng rng(1);
            std::vector<std::tuple<std::int32_t, std::int32_t, std::int32_t>> out;
            for_each_pair(corpus, WindowPolicy{L, Scheme::linear, pos, cross}, rng, true,
                          [&](const ContextPair& p) {
                              out.emplace_back(p.focus, p.context, p.distance);
                          });
            std::sort(out.begin(), out.end());
            return out;
        };
        auto sym = triples(Position::symmetric);
        auto left = triples(Position::left);
        auto right = triples(Position::right);
        left.insert(left.end(), right.begin(), right.end());
        std::sort(left.begin(), left.end());
        if (sym != left) return fail(fmt("trial %d: symmetric != left + right", trial));
    }
    return pass("1000 fuzzed corpora: symmetric pair multiset = left (+) right");
}

// ----------------------------------------------------------- determinism

Corpus zipf_corpus(std::size_t tokens, std::int32_t vocab, std::size_t sentence_len,
                   std::uint64_t seed, std::vector<std::uint64_t>* counts_out) {
    std::vector<double> cdf(static_cast<std::size_t>(vocab));
    double total = 0;
    for (std::int32_t r = 0; r < vocab; ++r) {
        total += 1.0 / (1.0 + r);
        cdf[static_cast<std::size_t>(r)] = total;
    }
    for (double& c : cdf) c /= total;
    cdf.back() = 1.0;
    Rng rng(seed);
    Corpus corpus;
    std::vector<std::int32_t> sent;
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(vocab), 1);
    std::size_t produced = 0;
    while (produced < tokens) {
        sent.clear();
        const std::size_t len = std::min(sentence_len, tokens - produced);
        for (std::size_t i = 0; i < len; ++i) {
            const double u = rng.next_double();
            const auto id = static_cast<std::int32_t>(
                std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
            sent.push_back(id);
            ++counts[static_cast<std::size_t>(id)];
        }
        corpus.append_sentence(sent, produced == 0);
        produced += len;
    }
    if (counts_out != nullptr) *counts_out = std::move(counts);
    return corpus;
}

Outcome check_determinism() {
    std::vector<std::uint64_t> counts;
    const Corpus corpus = zipf_corpus(100000, 2000, 25, 0xC0FFEE, &counts);
    const NegativeSampler sampler(counts);
    TrainConfig config;
    config.dim = 32;
    config.negatives = 5;
    config.epochs = 2;
    config.seed = 20260808;
    config.workers = 1;
    const WindowPolicy policy{2, Scheme::linear, Position::symmetric, false};

    std::vector<std::string> words;
    std::vector<std::uint64_t> vc;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        words.push_back("w" + std::to_string(i));
        vc.push_back(counts[i]);
    }
    const Vocabulary vocab(words, vc);

    const auto run = [&]() {
        const EmbeddingModel model = train(corpus, policy, config, sampler);
        std::ostringstream buf;
        save_model(model, vocab, buf);
        return buf.str();
    };
    const std::string file1 = run();
    const std::string file2 = run();
    if (file1 != file2) return fail("model files from two seeded runs differ");
    return pass(fmt("workers=1, fixed seed: two runs on a 100k-token corpus wrote "
                    "byte-identical %zu-byte model files",
                    file1.size()));
}

// ------------------------------------------------------ pair budget ratio

Outcome check_pair_budget() {
    const WindowPolicy lin{5, Scheme::linear, Position::right, false};
    const WindowPolicy sq{5, Scheme::sqrt, Position::right, false};
    const double e_lin = expected_pairs_per_focus(lin);
    const double e_sq = expected_pairs_per_focus(sq);
    const double ratio = e_sq / e_lin;
    const double want = 4.3235 / 3.0;
    if (std::abs(ratio - want) > 1e-3)
        return fail(fmt("expected-pairs ratio %.6f vs %.6f", ratio, want));

    const Corpus corpus = zipf_corpus(1000000, 1000, 10000, 0xFACADE, nullptr);
    const double tokens = static_cast<double>(corpus.total_tokens());
    std::uint64_t n_lin = 0, n_sq = 0;
    {
        Rng rng(1);
        for_each_pair(corpus, lin, rng, false, [&](const ContextPair&) { ++n_lin; });
    }
    {
        Rng rng(2);
        for_each_pair(corpus, sq, rng, false, [&](const ContextPair&) { ++n_sq; });
    }
    const double dev_lin = std::abs(static_cast<double>(n_lin) - tokens * e_lin) / (tokens * e_lin);
    const double dev_sq = std::abs(static_cast<double>(n_sq) - tokens * e_sq) / (tokens * e_sq);
    if (dev_lin > 0.01) return fail(fmt("linear emitted count off by %.2f%%", 100 * dev_lin));
    if (dev_sq > 0.01) return fail(fmt("sqrt emitted count off by %.2f%%", 100 * dev_sq));
    if (n_sq <= n_lin) return fail("sqrt did not emit more pairs than linear");

    // slowdown direction with real gradient work (no fixed percentage gated)
    std::vector<std::uint64_t> counts;
    const Corpus small = zipf_corpus(200000, 2000, 25, 0x51CC, &counts);
    const NegativeSampler sampler(counts);
    TrainConfig config;
    config.dim = 32;
    config.negatives = 5;
    config.epochs = 1;
    config.seed = 6;
    auto train_time = [&](Scheme scheme) {
        TrainStats stats;
        train(small, WindowPolicy{5, scheme, Position::right, false}, config, sampler,
              &stats);
        return stats.seconds;
    };
    train_time(Scheme::linear);  // warm-up
    const double time_lin = train_time(Scheme::linear);
    const double time_sq = train_time(Scheme::sqrt);
    if (time_sq <= time_lin)
        return fail(fmt("sqrt training not slower: %.3f s vs linear %.3f s", time_sq,
                        time_lin));
    return pass(fmt("ratio %.6f (= 4.3235/3 +- 1e-3); 1M tokens: linear %.3fM sqrt %.3fM "
                    "pairs (dev %.2f%%/%.2f%%); sqrt training %.0f%% slower at L=5",
                    ratio, n_lin / 1e6, n_sq / 1e6, 100 * dev_lin, 100 * dev_sq,
                    100.0 * (time_sq - time_lin) / time_lin));
}

// ------------------------------------------------------------ round trip

Outcome check_round_trip() {
    Rng rng(0x207);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto v = static_cast<std::int64_t>(1 + rng.next_below(60));
        const int d = static_cast<int>(1 + rng.next_below(20));
        EmbeddingModel m = init_model(v, d, derive_seed(3, static_cast<std::uint64_t>(trial)));
        for (double& x : m.input) x = 20.0 * (rng.next_double() - 0.5);
        std::vector<std::string> words;
        std::vector<std::uint64_t> counts;
        for (std::int64_t i = 0; i < v; ++i) {
            words.push_back("tok" + std::to_string(i));
            counts.push_back(static_cast<std::uint64_t>(v - i));
        }
        const Vocabulary vocab(words, counts);
        std::stringstream buf;
        save_model(m, vocab, buf);
        const LoadedModel loaded = load_model(buf);
        if (loaded.vocab.words() != words) return fail(fmt("trial %d: word list mangled", trial));
        for (std::size_t i = 0; i < m.input.size(); ++i)
            worst = std::max(worst, std::abs(loaded.model.input[i] - m.input[i]));
        if (worst > 1e-6) return fail(fmt("trial %d: max vector error %.2e", trial, worst));
    }
    return pass(fmt("20 random models round-trip, max vector error %.1e (<= 1e-6)", worst));
}

// ------------------------------------------------------------ desk scale

struct DeskPaths {
    std::string corpus = "data/text8";
    std::string simlex = "data/SimLex-999.txt";
    std::string analogy = "data/questions-words.txt";
};

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v != nullptr && *v != '\0' ? std::string(v) : fallback;
}

Outcome check_desk_scale(const DeskPaths& paths, bool trend) {
    std::string missing;
    for (const auto& p : {paths.corpus, paths.simlex, paths.analogy})
        if (!std::filesystem::exists(p)) missing += (missing.empty() ? "" : ", ") + p;
    if (!missing.empty())
        return skip("datasets not found: " + missing +
                    " (set CTXWIN_TEXT8/CTXWIN_SIMLEX/CTXWIN_ANALOGY or see README)");

    const auto t_all = std::chrono::steady_clock::now();
    const Vocabulary vocab = build_vocabulary_file(paths.corpus, 5);
    const Corpus corpus = load_corpus_file(paths.corpus, vocab);
    const NegativeSampler sampler(vocab);
    const SimilarityDataset simlex = load_similarity_file(paths.simlex, /*lowercase=*/true);
    const AnalogyDataset analogies =
        load_analogy_file(paths.analogy, /*semantic_only=*/true, /*lowercase=*/true);
    std::fprintf(stderr, "desk-scale: %zu tokens, vocabulary %zu, %zu similarity pairs, "
                         "%zu analogy questions\n",
                 corpus.total_tokens(), vocab.size(), simlex.items.size(),
                 analogies.total_questions());

    auto run_l = [&](int L) {
        TrainConfig config;
        config.dim = 100;
        config.negatives = 10;
        config.epochs = 5;
        config.seed = 1;
        config.workers = omp_get_max_threads();
        TrainStats stats;
        const EmbeddingModel model =
            train(corpus, WindowPolicy{L, Scheme::linear, Position::symmetric, false},
                  config, sampler, &stats, /*verbose=*/true);
        const SimilarityResult sim = eval_similarity(model, vocab, simlex);
        const AnalogyResult ana = eval_analogy(model, vocab, analogies);
        std::fprintf(stderr,
                     "desk-scale L=%d: rho %.4f (cov %.2f), analogy %.4f (cov %.2f), "
                     "%.0f s train\n",
                     L, sim.rho, sim.coverage, ana.overall, ana.coverage, stats.seconds);
        return std::tuple<double, double, double>{sim.rho, ana.overall, stats.seconds};
    };

    const auto [rho, acc, train_secs] = run_l(2);
    const double total_secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_all).count();
    if (total_secs > 1800.0) return fail(fmt("took %.0f s (budget 1800 s)", total_secs));
    if (rho < 0.20) return fail(fmt("SimLex rho %.4f < 0.20", rho));
    if (acc < 0.15) return fail(fmt("semantic analogy accuracy %.4f < 0.15", acc));

    std::string trend_note = "trend not run (--no-trend)";
    if (trend) {
        const auto [rho1, acc1, t1] = run_l(1);
        const auto [rho10, acc10, t10] = run_l(10);
        trend_note = fmt("trend (non-gating): rho L=1 %.4f vs L=10 %.4f -> %s", rho1, rho10,
                         rho1 >= rho10 ? "narrow window wins, as reported"
                                       : "NOT consistent on this corpus");
        (void)acc1;
        (void)acc10;
        (void)t1;
        (void)t10;
    }
    return pass(fmt("L=2: rho %.4f (>= 0.20), analogy %.4f (>= 0.15), %.0f s (<= 1800); %s",
                    rho, acc, total_secs, trend_note.c_str()));
}

}  // namespace

int main(int argc, char** argv) {
    bool desk_only = false;
    bool no_desk = false;
    bool trend = true;
    DeskPaths paths;
    paths.corpus = env_or("CTXWIN_TEXT8", paths.corpus);
    paths.simlex = env_or("CTXWIN_SIMLEX", paths.simlex);
    paths.analogy = env_or("CTXWIN_ANALOGY", paths.analogy);
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        auto next = [&]() -> std::string {
            if (i + 1 >= argc) {
                std::fprintf(stderr, "missing value for %s\n", arg.c_str());
                std::exit(2);
            }
            return argv[++i];
        };
        if (arg == "--desk-scale-only")
            desk_only = true;
        else if (arg == "--no-desk-scale")
            no_desk = true;
        else if (arg == "--no-trend")
            trend = false;
        else if (arg == "--text8")
            paths.corpus = next();
        else if (arg == "--simlex")
            paths.simlex = next();
        else if (arg == "--analogy")
            paths.analogy = next();
        else {
            std::fprintf(stderr,
                         "usage: %s [--desk-scale-only|--no-desk-scale] [--no-trend]\n"
                         "          [--text8 PATH] [--simlex PATH] [--analogy PATH]\n",
                         argv[0]);
            return 2;
        }
    }

    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> criteria;
    if (!desk_only) {
        criteria.push_back({"sampling-marginal", check_sampling_marginal});
        criteria.push_back({"grid-cardinality", check_grid_cardinality});
        criteria.push_back({"gradient-check", check_gradients});
        criteria.push_back({"init-loss", check_init_loss});
        criteria.push_back({"spearman-oracle", check_spearman_oracle});
        criteria.push_back({"analogy-oracle", check_analogy_oracle});
        criteria.push_back({"boundary-invariant", check_boundary_invariant});
        criteria.push_back({"position-decomposition", check_position_decomposition});
        criteria.push_back({"determinism", check_determinism});
        criteria.push_back({"pair-budget-ratio", check_pair_budget});
        criteria.push_back({"round-trip", check_round_trip});
    }
    if (!no_desk)
        criteria.push_back({"desk-scale", [&]() { return check_desk_scale(paths, trend); }});

    int failures = 0;
    int skips = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome outcome;
        try {
            outcome = criteria[i].run();
        } catch (const std::exception& e) {
            outcome = fail(std::string("exception: ") + e.what());
        }
        const char* tag = outcome.kind == Outcome::Kind::pass   ? "PASS"
                          : outcome.kind == Outcome::Kind::fail ? "FAIL"
                                                                : "SKIP";
        if (outcome.kind == Outcome::Kind::fail) ++failures;
        if (outcome.kind == Outcome::Kind::skip) ++skips;
        std::printf("[%2zu/%zu] %s  %-24s %s\n", i + 1, criteria.size(), tag,
                    criteria[i].name, outcome.detail.c_str());
        std::fflush(stdout);
    }
    if (failures > 0) {
        std::printf("%d criterion(s) FAILED\n", failures);
        return 1;
    }
    if (desk_only && skips > 0) return 77;  // ctest skip
    std::printf("all executed criteria passed%s\n",
                skips > 0 ? " (desk-scale skipped: datasets not present)" : "");
    return 0;
}
