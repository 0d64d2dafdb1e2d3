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
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace ctxwin {

// Transparent hashing so lookups take string_view without allocating.
struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
        return std::hash<std::string_view>{}(s);
    }
};

// True iff the token contains no alphanumeric character. Bytes outside
// ASCII are treated as letters, so only pure ASCII-punctuation tokens
// ("." "--" "!?") qualify; "don't" and "café" do not.
bool is_punctuation(std::string_view token);

// Splits a line on ASCII space/tab, collapsing runs of separators.
std::vector<std::string_view> split_tokens(std::string_view line);

class StopList {
public:
    StopList() = default;

    // One token per line; lines starting with '#' are ignored.
    static StopList load_file(const std::string& path);

    void insert(std::string token) { entries_.insert(std::move(token)); }
    bool contains(std::string_view token) const {
        return entries_.find(token) != entries_.end();
    }
    std::size_t size() const { return entries_.size(); }

private:
    std::unordered_set<std::string, StringHash, std::equal_to<>> entries_;
};

// Word <-> id mapping with corpus frequencies. Ids are dense 0..V-1 and
// ordered by descending frequency, ties broken by first occurrence in the
// source stream, so id 0 is the most frequent word.
class Vocabulary {
public:
    Vocabulary() = default;
    // Trusted constructor: `words` already ordered, `counts` aligned.
    Vocabulary(std::vector<std::string> words, std::vector<std::uint64_t> counts);

    std::size_t size() const { return words_.size(); }
    bool empty() const { return words_.empty(); }
    const std::string& word(std::int32_t id) const { return words_[static_cast<std::size_t>(id)]; }
    std::uint64_t count(std::int32_t id) const { return counts_[static_cast<std::size_t>(id)]; }

    // -1 when the word is unknown.
    std::int32_t lookup(std::string_view w) const {
        auto it = index_.find(w);
        return it == index_.end() ? -1 : it->second;
    }

    const std::vector<std::string>& words() const { return words_; }
    std::span<const std::uint64_t> counts() const { return counts_; }
    std::uint64_t total_count() const { return total_; }

private:
    std::vector<std::string> words_;
    std::vector<std::uint64_t> counts_;
    std::unordered_map<std::string, std::int32_t, StringHash, std::equal_to<>> index_;
    std::uint64_t total_ = 0;
};

// Streaming frequency counter. Feed tokens (already filtered), then
// finish(min_count) to get the Vocabulary.
class VocabularyBuilder {
public:
    void add(std::string_view token);
    Vocabulary finish(std::uint64_t min_count) const;

private:
    struct Entry {
        std::string word;
        std::uint64_t count = 0;
    };
    std::vector<Entry> entries_;  // in first-occurrence order
    std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>> slot_;
};

// Filtering applied both before vocabulary counting and before windowing,
// so that frequencies and window distances agree.
struct LoadOptions {
    const StopList* stop_list = nullptr;
    bool strip_punct = false;
};

bool keep_token(std::string_view token, const LoadOptions& opt);

Vocabulary build_vocabulary(std::span<const std::string> tokens, std::uint64_t min_count);
Vocabulary build_vocabulary(std::istream& in, std::uint64_t min_count,
                            const LoadOptions& opt = {});
Vocabulary build_vocabulary_file(const std::string& path, std::uint64_t min_count,
                                 const LoadOptions& opt = {});

// Token-id corpus: non-empty sentences plus the set of sentence indices
// that start a new document. Tokens are stored flat so windows can walk
// across sentence boundaries at stream distance.
class Corpus {
public:
    Corpus() = default;

    // For generated corpora (tests, benchmarks). Sentences must be
    // non-empty; doc_breaks is normalized to always contain 0.
    static Corpus from_sentences(const std::vector<std::vector<std::int32_t>>& sentences,
                                 std::vector<std::size_t> doc_breaks = {});

    bool empty() const { return tokens_.empty(); }
    std::size_t total_tokens() const { return tokens_.size(); }
    std::size_t sentence_count() const { return sent_offsets_.size() - 1; }

    std::span<const std::int32_t> tokens() const { return tokens_; }
    std::size_t sentence_begin(std::size_t i) const { return sent_offsets_[i]; }
    std::size_t sentence_end(std::size_t i) const { return sent_offsets_[i + 1]; }
    std::span<const std::int32_t> sentence(std::size_t i) const {
        return std::span<const std::int32_t>(tokens_).subspan(
            sent_offsets_[i], sent_offsets_[i + 1] - sent_offsets_[i]);
    }

    // Sorted sentence indices that start a document; contains 0 when the
    // corpus is non-empty.
    const std::vector<std::size_t>& doc_breaks() const { return doc_breaks_; }

    // Flat token bounds [begin,end) of the document containing sentence i.
    std::pair<std::size_t, std::size_t> document_span(std::size_t sentence_idx) const;

    // Sentence containing flat token index p (binary search; diagnostics).
    std::size_t sentence_of(std::size_t flat_idx) const;

    std::int32_t max_token_id() const;

    void append_sentence(std::span<const std::int32_t> ids, bool starts_document);

private:
    std::vector<std::int32_t> tokens_;
    std::vector<std::size_t> sent_offsets_{0};
    std::vector<std::size_t> doc_breaks_;
};

// One sentence per input line; blank line = document boundary. Tokens in
// the stop list, punctuation tokens (when strip_punct) and out-of-vocabulary
// tokens are removed before windowing; sentences that become empty are
// dropped.
Corpus load_corpus(std::istream& in, const Vocabulary& vocab, const LoadOptions& opt = {});
Corpus load_corpus_file(const std::string& path, const Vocabulary& vocab,
                        const LoadOptions& opt = {});

}  // namespace ctxwin
