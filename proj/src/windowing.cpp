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

#include "ctxwin/windowing.hpp"

#include <stdexcept>
#include <string>

namespace ctxwin {

const char* to_string(Scheme s) {
    return s == Scheme::linear ? "linear" : "sqrt";
}

const char* to_string(Position p) {
    switch (p) {
        case Position::left: return "left";
        case Position::right: return "right";
        default: return "symmetric";
    }
}

Scheme parse_scheme(std::string_view s) {
    if (s == "linear") return Scheme::linear;
    if (s == "sqrt") return Scheme::sqrt;
    throw std::invalid_argument("unknown scheme: " + std::string(s));
}

Position parse_position(std::string_view s) {
    if (s == "left") return Position::left;
    if (s == "right") return Position::right;
    if (s == "symmetric") return Position::symmetric;
    throw std::invalid_argument("unknown position: " + std::string(s));
}

double expected_pairs_per_focus(const WindowPolicy& policy) {
    double sum = 0.0;
    for (int d = 1; d <= policy.max_size; ++d) sum += acceptance_probability(policy, d);
    const double sides = policy.position == Position::symmetric ? 2.0 : 1.0;
    return sides * sum;
}

std::vector<CandidatePosition> candidate_positions(const Corpus& corpus,
                                                   std::size_t sentence_idx,
                                                   std::size_t token_idx,
                                                   const WindowPolicy& policy) {
    if (sentence_idx >= corpus.sentence_count()) throw std::out_of_range("sentence index");
    const std::size_t sent_b = corpus.sentence_begin(sentence_idx);
    const std::size_t sent_e = corpus.sentence_end(sentence_idx);
    if (token_idx >= sent_e - sent_b) throw std::out_of_range("token index");
    const std::size_t p = sent_b + token_idx;

    std::size_t left_lim = sent_b;
    std::size_t right_lim = sent_e;
    if (policy.cross_sentential) {
        auto [doc_b, doc_e] = corpus.document_span(sentence_idx);
        left_lim = doc_b;
        right_lim = doc_e;
    }

    std::vector<CandidatePosition> out;
    detail::for_each_candidate_flat(p, left_lim, right_lim, policy,
                                    [&](std::size_t q, int d) {
                                        const std::size_t s = corpus.sentence_of(q);
                                        out.push_back(CandidatePosition{
                                            s, q - corpus.sentence_begin(s), d});
                                    });
    return out;
}

std::vector<ContextPair> generate_pairs(const Corpus& corpus, const WindowPolicy& policy,
                                        Rng& rng, bool accept_all) {
    std::vector<ContextPair> out;
    for_each_pair(corpus, policy, rng, accept_all,
                  [&](const ContextPair& pair) { out.push_back(pair); });
    return out;
}

}  // namespace ctxwin
