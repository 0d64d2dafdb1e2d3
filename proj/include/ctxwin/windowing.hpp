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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

#include "ctxwin/corpus.hpp"
#include "ctxwin/rng.hpp"

namespace ctxwin {

enum class Scheme { linear, sqrt };
enum class Position { left, right, symmetric };

const char* to_string(Scheme s);
const char* to_string(Position p);
Scheme parse_scheme(std::string_view s);
Position parse_position(std::string_view s);

// The four window hyper-parameters in one value: maximum size L, the
// distance weighting scheme, which side(s) of the focus word contribute
// contexts, and whether windows may extend past sentence boundaries.
struct WindowPolicy {
    int max_size = 5;
    Scheme scheme = Scheme::linear;
    Position position = Position::symmetric;
    bool cross_sentential = false;
};

// Probability that the context word at distance d is kept:
//   linear  (L-d+1)/L     the marginal of word2vec's dynamic window
//   sqrt    (L-sqrt(d)+1)/L
// clamped to [0,1]; zero beyond the maximum window size.
inline double acceptance_probability(const WindowPolicy& policy, int distance) {
    if (distance > policy.max_size) return 0.0;
    const double L = static_cast<double>(policy.max_size);
    const double d = static_cast<double>(distance);
    const double p = policy.scheme == Scheme::linear ? (L - d + 1.0) / L
                                                     : (L - std::sqrt(d) + 1.0) / L;
    return std::clamp(p, 0.0, 1.0);
}

// Per-focus expected number of emitted pairs: sides * sum_d p(d).
double expected_pairs_per_focus(const WindowPolicy& policy);

struct ContextPair {
    std::int32_t focus;
    std::int32_t context;
    std::int32_t distance;

    bool operator==(const ContextPair&) const = default;
};

struct CandidatePosition {
    std::size_t sentence;
    std::size_t token;
    std::int32_t distance;

    bool operator==(const CandidatePosition&) const = default;
};

// Positions within token distance 1..L of the focus on the side(s) the
// policy selects. Distance counts tokens of the filtered stream; it spans
// sentence boundaries only when cross_sentential, never document
// boundaries. Order: distance ascending, left before right.
std::vector<CandidatePosition> candidate_positions(const Corpus& corpus,
                                                   std::size_t sentence_idx,
                                                   std::size_t token_idx,
                                                   const WindowPolicy& policy);

namespace detail {

// Enumerates candidate flat indices around p within [left_lim, right_lim),
// distance ascending, left before right at equal distance.
template <class F>
inline void for_each_candidate_flat(std::size_t p, std::size_t left_lim,
                                    std::size_t right_lim, const WindowPolicy& policy,
                                    F&& f) {
    const bool want_left = policy.position != Position::right;
    const bool want_right = policy.position != Position::left;
    for (int d = 1; d <= policy.max_size; ++d) {
        const std::size_t ud = static_cast<std::size_t>(d);
        const bool left_ok = want_left && p >= left_lim + ud;
        const bool right_ok = want_right && p + ud < right_lim;
        if (left_ok) f(p - ud, d);
        if (right_ok) f(p + ud, d);
        if (!left_ok && !right_ok) break;  // both sides stay exhausted as d grows
    }
}

}  // namespace detail

// Streams (focus, context) pairs for the sentences [s_begin, s_end) in
// corpus order: focus-major, then distance ascending, left before right.
// Each candidate at distance d is emitted independently with probability
// acceptance_probability(policy, d); accept_all emits every candidate
// deterministically. Candidate walks may leave the sentence range (they
// are bounded by documents, not by the range), so sharding by sentence
// ranges partitions focus positions without changing the pair set.
template <class F>
void for_each_pair_in_sentences(const Corpus& corpus, const WindowPolicy& policy,
                                std::size_t s_begin, std::size_t s_end, Rng& rng,
                                bool accept_all, F&& f) {
    if (s_begin >= s_end) return;
    std::vector<double> accept(static_cast<std::size_t>(policy.max_size) + 1, 1.0);
    for (int d = 1; d <= policy.max_size; ++d)
        accept[static_cast<std::size_t>(d)] = acceptance_probability(policy, d);

    const auto& breaks = corpus.doc_breaks();
    const auto tokens = corpus.tokens();
    // index of the document break at or before s_begin
    std::size_t doc = static_cast<std::size_t>(
        std::upper_bound(breaks.begin(), breaks.end(), s_begin) - breaks.begin() - 1);

    for (std::size_t s = s_begin; s < s_end; ++s) {
        while (doc + 1 < breaks.size() && breaks[doc + 1] <= s) ++doc;
        const std::size_t sent_b = corpus.sentence_begin(s);
        const std::size_t sent_e = corpus.sentence_end(s);
        std::size_t left_lim = sent_b;
        std::size_t right_lim = sent_e;
        if (policy.cross_sentential) {
            left_lim = corpus.sentence_begin(breaks[doc]);
            right_lim = doc + 1 < breaks.size() ? corpus.sentence_begin(breaks[doc + 1])
                                                : tokens.size();
        }
        for (std::size_t p = sent_b; p < sent_e; ++p) {
            detail::for_each_candidate_flat(
                p, left_lim, right_lim, policy, [&](std::size_t q, int d) {
                    const double pd = accept[static_cast<std::size_t>(d)];
                    if (accept_all || pd >= 1.0 || rng.next_double() < pd)
                        f(ContextPair{tokens[p], tokens[q], d});
                });
        }
    }
}

template <class F>
void for_each_pair(const Corpus& corpus, const WindowPolicy& policy, Rng& rng,
                   bool accept_all, F&& f) {
    for_each_pair_in_sentences(corpus, policy, 0, corpus.sentence_count(), rng,
                               accept_all, std::forward<F>(f));
}

// Materialized pair stream; test and CLI convenience.
std::vector<ContextPair> generate_pairs(const Corpus& corpus, const WindowPolicy& policy,
                                        Rng& rng, bool accept_all = false);

}  // namespace ctxwin
