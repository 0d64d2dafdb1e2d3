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

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ctxwin/corpus.hpp"
#include "ctxwin/trainer.hpp"

namespace ctxwin {

struct SimilarityItem {
    std::string word1;
    std::string word2;
    double gold = 0.0;
};

struct SimilarityDataset {
    std::vector<SimilarityItem> items;
};

struct AnalogyQuestion {
    std::string a, b, c, d;  // a : b = c : d, predict d
};

struct AnalogySection {
    std::string name;
    std::vector<AnalogyQuestion> questions;
};

struct AnalogyDataset {
    std::vector<AnalogySection> sections;
    std::size_t total_questions() const;
};

double cosine(std::span<const double> u, std::span<const double> v);

// Average ranks (1-based); ties get the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

// Pearson correlation of average ranks. Throws UndefinedCorrelationError
// when either list has zero rank variance.
double spearman(std::span<const double> gold, std::span<const double> predicted);

struct SimilarityResult {
    double rho = 0.0;
    double coverage = 0.0;
    std::size_t scored = 0;
    std::size_t total = 0;
};

// Predicted score per pair = cosine of the input vectors. Pairs with an
// out-of-vocabulary word (or a zero vector, which cannot be scored) are
// skipped and reported through coverage.
SimilarityResult eval_similarity(const EmbeddingModel& model, const Vocabulary& vocab,
                                 const SimilarityDataset& dataset);

struct SectionAccuracy {
    std::string name;
    std::size_t answered = 0;
    std::size_t correct = 0;
    double accuracy = 0.0;
};

struct AnalogyResult {
    double overall = 0.0;   // micro-average over answered questions
    double coverage = 0.0;  // answered / total
    std::size_t total = 0;
    std::size_t answered = 0;
    std::size_t correct = 0;
    std::vector<SectionAccuracy> by_section;  // sections with answered > 0
};

// 3CosAdd: argmax over the vocabulary, excluding {a,b,c}, of
// cosine(x, v_b - v_a + v_c) on length-normalized input vectors.
// Questions with any out-of-vocabulary word are skipped and counted in
// coverage. Ties resolve to the lowest word id.
AnalogyResult eval_analogy(const EmbeddingModel& model, const Vocabulary& vocab,
                           const AnalogyDataset& dataset);

// The prediction for a single a:b = c:? question; -1 when no candidate
// exists. Same scan as eval_analogy.
std::int32_t analogy_predict(const EmbeddingModel& model, std::int32_t a, std::int32_t b,
                             std::int32_t c);

struct EvalReport {
    double spearman_rho = 0.0;
    double similarity_coverage = 0.0;
    double analogy_accuracy_overall = 0.0;
    std::vector<SectionAccuracy> analogy_accuracy_by_section;
    double analogy_coverage = 0.0;
};

EvalReport make_eval_report(const SimilarityResult& sim, const AnalogyResult& ana);

// SimLex-999 distribution format: tab-separated with a header row; the
// word1, word2 and SimLex999 columns are selected by name.
SimilarityDataset load_similarity(std::istream& in, bool lowercase = false);
SimilarityDataset load_similarity_file(const std::string& path, bool lowercase = false);

// Google analogies format: lines ": section-name" start sections, data
// lines are 4 space-separated words. With semantic_only, sections whose
// names start with "gram" are dropped.
AnalogyDataset load_analogy(std::istream& in, bool semantic_only, bool lowercase = false);
AnalogyDataset load_analogy_file(const std::string& path, bool semantic_only,
                                 bool lowercase = false);

}  // namespace ctxwin
