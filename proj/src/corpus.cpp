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

#include "ctxwin/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <stdexcept>

#include "ctxwin/errors.hpp"

namespace ctxwin {

bool is_punctuation(std::string_view token) {
    for (unsigned char c : token) {
        if (c >= 0x80) return false;  // non-ASCII byte, treat as letter
        if ((c >= '0' && c <= '9') || (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'))
            return false;
    }
    return true;
}

std::vector<std::string_view> split_tokens(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    const std::size_t n = line.size();
    while (i < n) {
        while (i < n && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < n && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

bool keep_token(std::string_view token, const LoadOptions& opt) {
    if (opt.stop_list != nullptr && opt.stop_list->contains(token)) return false;
    if (opt.strip_punct && is_punctuation(token)) return false;
    return true;
}

StopList StopList::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open stop list: " + path);
    StopList list;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto tokens = split_tokens(line);
        if (tokens.empty()) continue;
        list.insert(std::string(tokens.front()));
    }
    return list;
}

Vocabulary::Vocabulary(std::vector<std::string> words, std::vector<std::uint64_t> counts)
    : words_(std::move(words)), counts_(std::move(counts)) {
    if (words_.size() != counts_.size())
        throw std::invalid_argument("vocabulary words/counts size mismatch");
    index_.reserve(words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i) {
        auto [it, inserted] = index_.emplace(words_[i], static_cast<std::int32_t>(i));
        if (!inserted) throw std::invalid_argument("duplicate word in vocabulary: " + words_[i]);
        total_ += counts_[i];
    }
}

void VocabularyBuilder::add(std::string_view token) {
    auto it = slot_.find(token);
    if (it != slot_.end()) {
        ++entries_[it->second].count;
        return;
    }
    slot_.emplace(std::string(token), entries_.size());
    entries_.push_back(Entry{std::string(token), 1});
}

Vocabulary VocabularyBuilder::finish(std::uint64_t min_count) const {
    // entries_ is in first-occurrence order; stable sort keeps that order
    // within equal counts.
    std::vector<std::size_t> order;
    order.reserve(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].count >= min_count) order.push_back(i);
    std::stable_sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
        return entries_[a].count > entries_[b].count;
    });
    std::vector<std::string> words;
    std::vector<std::uint64_t> counts;
    words.reserve(order.size());
    counts.reserve(order.size());
    for (std::size_t i : order) {
        words.push_back(entries_[i].word);
        counts.push_back(entries_[i].count);
    }
    return Vocabulary(std::move(words), std::move(counts));
}

Vocabulary build_vocabulary(std::span<const std::string> tokens, std::uint64_t min_count) {
    if (min_count < 1) throw std::invalid_argument("min_count must be >= 1");
    VocabularyBuilder builder;
    for (const auto& t : tokens) builder.add(t);
    return builder.finish(min_count);
}

Vocabulary build_vocabulary(std::istream& in, std::uint64_t min_count, const LoadOptions& opt) {
    if (min_count < 1) throw std::invalid_argument("min_count must be >= 1");
    VocabularyBuilder builder;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        for (auto token : split_tokens(line))
            if (keep_token(token, opt)) builder.add(token);
    }
    if (in.bad()) throw ParseError("read error while counting vocabulary", line_no + 1);
    return builder.finish(min_count);
}

Vocabulary build_vocabulary_file(const std::string& path, std::uint64_t min_count,
                                 const LoadOptions& opt) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus: " + path);
    return build_vocabulary(in, min_count, opt);
}

void Corpus::append_sentence(std::span<const std::int32_t> ids, bool starts_document) {
    if (ids.empty()) throw std::invalid_argument("empty sentence");
    if (starts_document || tokens_.empty()) doc_breaks_.push_back(sentence_count());
    tokens_.insert(tokens_.end(), ids.begin(), ids.end());
    sent_offsets_.push_back(tokens_.size());
}

Corpus Corpus::from_sentences(const std::vector<std::vector<std::int32_t>>& sentences,
                              std::vector<std::size_t> doc_breaks) {
    std::sort(doc_breaks.begin(), doc_breaks.end());
    Corpus corpus;
    std::size_t next = 0;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        bool starts = false;
        while (next < doc_breaks.size() && doc_breaks[next] <= i) {
            if (doc_breaks[next] == i) starts = true;
            ++next;
        }
        corpus.append_sentence(sentences[i], starts);
    }
    return corpus;
}

std::pair<std::size_t, std::size_t> Corpus::document_span(std::size_t sentence_idx) const {
    if (sentence_idx >= sentence_count()) throw std::out_of_range("sentence index");
    auto it = std::upper_bound(doc_breaks_.begin(), doc_breaks_.end(), sentence_idx);
    std::size_t first_sentence = *(it - 1);
    std::size_t end_sentence = it == doc_breaks_.end() ? sentence_count() : *it;
    return {sent_offsets_[first_sentence], sent_offsets_[end_sentence]};
}

std::size_t Corpus::sentence_of(std::size_t flat_idx) const {
    if (flat_idx >= tokens_.size()) throw std::out_of_range("token index");
    auto it = std::upper_bound(sent_offsets_.begin(), sent_offsets_.end(), flat_idx);
    return static_cast<std::size_t>(it - sent_offsets_.begin()) - 1;
}

std::int32_t Corpus::max_token_id() const {
    std::int32_t max_id = -1;
    for (std::int32_t t : tokens_) max_id = std::max(max_id, t);
    return max_id;
}

Corpus load_corpus(std::istream& in, const Vocabulary& vocab, const LoadOptions& opt) {
    Corpus corpus;
    std::string line;
    std::vector<std::int32_t> ids;
    bool pending_break = true;  // the first sentence always starts a document
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto tokens = split_tokens(line);
        if (tokens.empty()) {
            pending_break = true;
            continue;
        }
        ids.clear();
        for (auto token : tokens) {
            if (!keep_token(token, opt)) continue;
            std::int32_t id = vocab.lookup(token);
            if (id >= 0) ids.push_back(id);
        }
        if (ids.empty()) continue;  // fully filtered sentences are dropped
        corpus.append_sentence(ids, pending_break);
        pending_break = false;
    }
    if (in.bad()) throw ParseError("read error while loading corpus", line_no + 1);
    return corpus;
}

Corpus load_corpus_file(const std::string& path, const Vocabulary& vocab,
                        const LoadOptions& opt) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus: " + path);
    return load_corpus(in, vocab, opt);
}

}  // namespace ctxwin
