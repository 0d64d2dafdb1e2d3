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

#include "ctxwin/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ctxwin/errors.hpp"

namespace ctxwin {

namespace {

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find('\t', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_double(std::string_view text, std::size_t line_no) {
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw ParseError("bad number '" + std::string(text) + "'", line_no);
    return value;
}

}  // namespace

std::size_t AnalogyDataset::total_questions() const {
    std::size_t n = 0;
    for (const auto& s : sections) n += s.questions.size();
    return n;
}

double cosine(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw std::invalid_argument("cosine: length mismatch");
    if (u.empty()) throw std::invalid_argument("cosine: empty vectors");
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) throw std::invalid_argument("cosine: zero vector");
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;  // 1-based
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

double spearman(std::span<const double> gold, std::span<const double> predicted) {
    if (gold.size() != predicted.size()) throw std::invalid_argument("spearman: length mismatch");
    if (gold.size() < 2) throw std::invalid_argument("spearman: need at least 2 items");
    for (double x : gold)
        if (!std::isfinite(x)) throw std::invalid_argument("spearman: non-finite value");
    for (double x : predicted)
        if (!std::isfinite(x)) throw std::invalid_argument("spearman: non-finite value");

    const auto ra = average_ranks(gold);
    const auto rb = average_ranks(predicted);
    const double n = static_cast<double>(ra.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= n;
    mb /= n;
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        const double da = ra[i] - ma;
        const double db = rb[i] - mb;
        cov += da * db;
        va += da * da;
        vb += db * db;
    }
    if (va == 0.0 || vb == 0.0)
        throw UndefinedCorrelationError("zero rank variance; correlation undefined");
    return cov / std::sqrt(va * vb);
}

namespace {

// Words that cannot be scored: out of vocabulary, or a zero vector.
std::int32_t scorable_id(const EmbeddingModel& model, const Vocabulary& vocab,
                         const std::string& word) {
    const std::int32_t id = vocab.lookup(word);
    if (id < 0) return -1;
    for (double x : model.input_row(id))
        if (x != 0.0) return id;
    return -1;
}

}  // namespace

SimilarityResult eval_similarity(const EmbeddingModel& model, const Vocabulary& vocab,
                                 const SimilarityDataset& dataset) {
    if (static_cast<std::size_t>(model.vocab_size) != vocab.size())
        throw std::invalid_argument("model/vocabulary size mismatch");
    std::vector<double> gold, predicted;
    for (const auto& item : dataset.items) {
        const std::int32_t id1 = scorable_id(model, vocab, item.word1);
        const std::int32_t id2 = scorable_id(model, vocab, item.word2);
        if (id1 < 0 || id2 < 0) continue;
        gold.push_back(item.gold);
        predicted.push_back(cosine(model.input_row(id1), model.input_row(id2)));
    }
    SimilarityResult result;
    result.total = dataset.items.size();
    result.scored = gold.size();
    if (result.scored < 2)
        throw InsufficientCoverageError("fewer than 2 similarity pairs could be scored");
    result.coverage = static_cast<double>(result.scored) / static_cast<double>(result.total);
    result.rho = spearman(gold, predicted);
    return result;
}

namespace {

// Length-normalized copies of the input vectors; rows with zero norm are
// excluded from questions and from the candidate scan.
struct NormedVectors {
    std::vector<double> data;
    std::vector<std::uint8_t> valid;
};

NormedVectors normalize_input(const EmbeddingModel& model) {
    const int dim = model.dim;
    const std::size_t v = static_cast<std::size_t>(model.vocab_size);
    NormedVectors normed;
    normed.data.resize(v * static_cast<std::size_t>(dim));
    normed.valid.assign(v, 0);
    for (std::size_t i = 0; i < v; ++i) {
        const double* row = model.input.data() + i * dim;
        double norm = 0.0;
        for (int j = 0; j < dim; ++j) norm += row[j] * row[j];
        if (norm == 0.0) continue;
        normed.valid[i] = 1;
        const double inv = 1.0 / std::sqrt(norm);
        double* out = normed.data.data() + i * dim;
        for (int j = 0; j < dim; ++j) out[j] = row[j] * inv;
    }
    return normed;
}

std::int32_t predict_3cosadd(const NormedVectors& normed, std::size_t v, int dim,
                             std::int32_t a, std::int32_t b, std::int32_t c) {
    const double* na = normed.data.data() + static_cast<std::size_t>(a) * dim;
    const double* nb = normed.data.data() + static_cast<std::size_t>(b) * dim;
    const double* nc = normed.data.data() + static_cast<std::size_t>(c) * dim;
    std::vector<double> target(static_cast<std::size_t>(dim));
    for (int j = 0; j < dim; ++j) target[static_cast<std::size_t>(j)] = nb[j] - na[j] + nc[j];

    std::int32_t best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < v; ++x) {
        if (!normed.valid[x]) continue;
        const auto xi = static_cast<std::int32_t>(x);
        if (xi == a || xi == b || xi == c) continue;
        const double* nx = normed.data.data() + x * dim;
        double dot = 0.0;
#pragma omp simd reduction(+ : dot)
        for (int j = 0; j < dim; ++j) dot += nx[j] * target[static_cast<std::size_t>(j)];
        if (dot > best_score) {
            best_score = dot;
            best = xi;
        }
    }
    return best;
}

}  // namespace

std::int32_t analogy_predict(const EmbeddingModel& model, std::int32_t a, std::int32_t b,
                             std::int32_t c) {
    const auto v = static_cast<std::size_t>(model.vocab_size);
    if (a < 0 || b < 0 || c < 0 || static_cast<std::size_t>(a) >= v ||
        static_cast<std::size_t>(b) >= v || static_cast<std::size_t>(c) >= v)
        throw std::invalid_argument("analogy_predict: id out of range");
    const NormedVectors normed = normalize_input(model);
    return predict_3cosadd(normed, v, model.dim, a, b, c);
}

AnalogyResult eval_analogy(const EmbeddingModel& model, const Vocabulary& vocab,
                           const AnalogyDataset& dataset) {
    if (static_cast<std::size_t>(model.vocab_size) != vocab.size())
        throw std::invalid_argument("model/vocabulary size mismatch");
    if (model.vocab_size == 0) throw std::invalid_argument("empty model");
    const int dim = model.dim;
    const std::size_t v = static_cast<std::size_t>(model.vocab_size);
    const NormedVectors normed = normalize_input(model);
    const auto& valid = normed.valid;

    struct Task {
        std::size_t section;
        std::int32_t a, b, c, d;
    };
    std::vector<Task> tasks;
    AnalogyResult result;
    for (std::size_t s = 0; s < dataset.sections.size(); ++s) {
        for (const auto& q : dataset.sections[s].questions) {
            ++result.total;
            const std::int32_t a = vocab.lookup(q.a);
            const std::int32_t b = vocab.lookup(q.b);
            const std::int32_t c = vocab.lookup(q.c);
            const std::int32_t d = vocab.lookup(q.d);
            if (a < 0 || b < 0 || c < 0 || d < 0) continue;
            if (!valid[static_cast<std::size_t>(a)] || !valid[static_cast<std::size_t>(b)] ||
                !valid[static_cast<std::size_t>(c)] || !valid[static_cast<std::size_t>(d)])
                continue;
            tasks.push_back(Task{s, a, b, c, d});
        }
    }
    if (tasks.empty())
        throw InsufficientCoverageError("no analogy question fully in vocabulary");

    std::vector<std::uint8_t> correct(tasks.size(), 0);
    const auto ntasks = static_cast<std::int64_t>(tasks.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t t = 0; t < ntasks; ++t) {
        const Task& task = tasks[static_cast<std::size_t>(t)];
        const std::int32_t best = predict_3cosadd(normed, v, dim, task.a, task.b, task.c);
        correct[static_cast<std::size_t>(t)] = best == task.d ? 1 : 0;
    }

    std::vector<SectionAccuracy> per_section(dataset.sections.size());
    for (std::size_t s = 0; s < dataset.sections.size(); ++s)
        per_section[s].name = dataset.sections[s].name;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        auto& sec = per_section[tasks[t].section];
        ++sec.answered;
        sec.correct += correct[t];
    }
    for (auto& sec : per_section) {
        if (sec.answered == 0) continue;
        sec.accuracy = static_cast<double>(sec.correct) / static_cast<double>(sec.answered);
        result.answered += sec.answered;
        result.correct += sec.correct;
        result.by_section.push_back(sec);
    }
    result.overall = static_cast<double>(result.correct) / static_cast<double>(result.answered);
    result.coverage = static_cast<double>(result.answered) / static_cast<double>(result.total);
    return result;
}

EvalReport make_eval_report(const SimilarityResult& sim, const AnalogyResult& ana) {
    EvalReport report;
    report.spearman_rho = sim.rho;
    report.similarity_coverage = sim.coverage;
    report.analogy_accuracy_overall = ana.overall;
    report.analogy_accuracy_by_section = ana.by_section;
    report.analogy_coverage = ana.coverage;
    return report;
}

SimilarityDataset load_similarity(std::istream& in, bool lowercase) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("missing similarity header", 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_tabs(line);
    std::size_t col1 = header.size(), col2 = header.size(), colg = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "word1") col1 = i;
        if (header[i] == "word2") col2 = i;
        if (header[i] == "SimLex999") colg = i;
    }
    if (col1 == header.size() || col2 == header.size() || colg == header.size())
        throw ParseError("similarity header must contain word1, word2 and SimLex999", 1);
    const std::size_t need = std::max({col1, col2, colg}) + 1;

    SimilarityDataset dataset;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (fields.size() < need)
            throw ParseError("expected at least " + std::to_string(need) + " columns", line_no);
        SimilarityItem item;
        item.word1 = lowercase ? ascii_lower(fields[col1]) : std::string(fields[col1]);
        item.word2 = lowercase ? ascii_lower(fields[col2]) : std::string(fields[col2]);
        item.gold = parse_double(fields[colg], line_no);
        dataset.items.push_back(std::move(item));
    }
    if (in.bad()) throw ParseError("read error in similarity file", line_no + 1);
    return dataset;
}

SimilarityDataset load_similarity_file(const std::string& path, bool lowercase) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open similarity file: " + path);
    return load_similarity(in, lowercase);
}

AnalogyDataset load_analogy(std::istream& in, bool semantic_only, bool lowercase) {
    AnalogyDataset dataset;
    std::string line;
    std::size_t line_no = 0;
    bool in_section = false;
    bool keep_section = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto tokens = split_tokens(line);
        if (tokens.empty()) continue;
        if (tokens[0] == ":") {
            if (tokens.size() != 2) throw ParseError("malformed section header", line_no);
            const std::string name(tokens[1]);
            in_section = true;
            keep_section = !(semantic_only && name.starts_with("gram"));
            if (keep_section) dataset.sections.push_back(AnalogySection{name, {}});
            continue;
        }
        if (!in_section) throw ParseError("data line before any section header", line_no);
        if (tokens.size() != 4) throw ParseError("expected 4 words", line_no);
        if (!keep_section) continue;
        AnalogyQuestion q;
        q.a = lowercase ? ascii_lower(tokens[0]) : std::string(tokens[0]);
        q.b = lowercase ? ascii_lower(tokens[1]) : std::string(tokens[1]);
        q.c = lowercase ? ascii_lower(tokens[2]) : std::string(tokens[2]);
        q.d = lowercase ? ascii_lower(tokens[3]) : std::string(tokens[3]);
        dataset.sections.back().questions.push_back(std::move(q));
    }
    if (in.bad()) throw ParseError("read error in analogy file", line_no + 1);
    return dataset;
}

AnalogyDataset load_analogy_file(const std::string& path, bool semantic_only, bool lowercase) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open analogy file: " + path);
    return load_analogy(in, semantic_only, lowercase);
}

}  // namespace ctxwin
