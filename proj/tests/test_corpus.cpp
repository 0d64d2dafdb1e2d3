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

#include <doctest.h>

#include <sstream>
#include <vector>

#include "ctxwin/corpus.hpp"
#include "ctxwin/errors.hpp"
#include "ctxwin/rng.hpp"
#include "test_util.hpp"

using namespace ctxwin;

namespace {

Vocabulary vocab_of(std::initializer_list<const char*> tokens, std::uint64_t min_count = 1) {
    std::vector<std::string> stream;
    for (const char* t : tokens) stream.emplace_back(t);
    return build_vocabulary(stream, min_count);
}

std::vector<std::string> words_of(const Corpus& corpus, const Vocabulary& vocab,
                                  std::size_t sentence) {
    std::vector<std::string> out;
    for (std::int32_t id : corpus.sentence(sentence)) out.push_back(vocab.word(id));
    return out;
}

}  // namespace

TEST_CASE("build_vocabulary: frequency cutoff and ordering") {
    std::vector<std::string> stream{"a", "a", "b", "a", "c", "c"};

    auto v2 = build_vocabulary(stream, 2);
    REQUIRE(v2.size() == 2);
    CHECK(v2.word(0) == "a");
    CHECK(v2.word(1) == "c");
    CHECK(v2.count(0) == 3);
    CHECK(v2.count(1) == 2);

    auto v1 = build_vocabulary(stream, 1);
    REQUIRE(v1.size() == 3);
    CHECK(v1.word(0) == "a");
    CHECK(v1.word(1) == "c");
    CHECK(v1.word(2) == "b");

    auto empty = build_vocabulary(std::vector<std::string>{}, 5);
    CHECK(empty.size() == 0);
    CHECK(empty.empty());
}

TEST_CASE("build_vocabulary: tie-break by first occurrence") {
    std::vector<std::string> stream{"x", "y", "x", "y", "z", "z"};
    auto v = build_vocabulary(stream, 1);
    // all counts equal 2; order is first occurrence
    CHECK(v.word(0) == "x");
    CHECK(v.word(1) == "y");
    CHECK(v.word(2) == "z");
}

TEST_CASE("vocabulary invariants: dense ids, sorted counts") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::string> stream;
        const std::size_t n = 1 + rng.next_below(400);
        for (std::size_t i = 0; i < n; ++i)
            stream.push_back("w" + std::to_string(rng.next_below(30)));
        const std::uint64_t min_count = 1 + rng.next_below(3);
        auto v = build_vocabulary(stream, min_count);
        for (std::size_t i = 0; i < v.size(); ++i) {
            CHECK(v.lookup(v.word(static_cast<std::int32_t>(i))) ==
                  static_cast<std::int32_t>(i));
            CHECK(v.count(static_cast<std::int32_t>(i)) >= min_count);
            if (i > 0)
                CHECK(v.count(static_cast<std::int32_t>(i)) <=
                      v.count(static_cast<std::int32_t>(i - 1)));
        }
    }
}

TEST_CASE("is_punctuation") {
    CHECK(is_punctuation("."));
    CHECK(is_punctuation("--"));
    CHECK(is_punctuation("!?"));
    CHECK_FALSE(is_punctuation("don't"));
    CHECK_FALSE(is_punctuation("a1"));
    CHECK_FALSE(is_punctuation("3"));
    // non-ASCII bytes are never punctuation
    CHECK_FALSE(is_punctuation("café"));
    CHECK_FALSE(is_punctuation("naïve"));
}

TEST_CASE("load_corpus: stop words shorten distances") {
    StopList stops;
    stops.insert("the");
    auto vocab = vocab_of({"cat", "sat"});
    LoadOptions opt;
    opt.stop_list = &stops;
    std::istringstream in("the cat sat\n");
    auto corpus = load_corpus(in, vocab, opt);
    REQUIRE(corpus.sentence_count() == 1);
    CHECK(words_of(corpus, vocab, 0) == std::vector<std::string>{"cat", "sat"});
}

TEST_CASE("load_corpus: punctuation removal") {
    auto vocab = vocab_of({"hello", "!"});
    LoadOptions opt;
    opt.strip_punct = true;
    std::istringstream in("hello !\n");
    auto corpus = load_corpus(in, vocab, opt);
    REQUIRE(corpus.sentence_count() == 1);
    CHECK(words_of(corpus, vocab, 0) == std::vector<std::string>{"hello"});
}

TEST_CASE("load_corpus: blank lines are document boundaries") {
    auto vocab = vocab_of({"a", "b", "c", "d"});
    std::istringstream in("a b\n\nc d\n");
    auto corpus = load_corpus(in, vocab);
    REQUIRE(corpus.sentence_count() == 2);
    CHECK(corpus.doc_breaks() == std::vector<std::size_t>{0, 1});
}

TEST_CASE("load_corpus: fully filtered sentences are dropped, break carries over") {
    StopList stops;
    stops.insert("the");
    auto vocab = vocab_of({"a", "b"});
    LoadOptions opt;
    opt.stop_list = &stops;
    std::istringstream in("the\na b\n\nthe the\na\n");
    auto corpus = load_corpus(in, vocab, opt);
    REQUIRE(corpus.sentence_count() == 2);
    CHECK(words_of(corpus, vocab, 0) == std::vector<std::string>{"a", "b"});
    CHECK(words_of(corpus, vocab, 1) == std::vector<std::string>{"a"});
    // the blank line's break lands on the next surviving sentence
    CHECK(corpus.doc_breaks() == std::vector<std::size_t>{0, 1});
}

TEST_CASE("load_corpus: out-of-vocabulary tokens removed") {
    auto vocab = vocab_of({"a", "b"});
    std::istringstream in("a zzz b\n");
    auto corpus = load_corpus(in, vocab);
    CHECK(words_of(corpus, vocab, 0) == std::vector<std::string>{"a", "b"});
}

TEST_CASE("load_corpus_file: missing file") {
    auto vocab = vocab_of({"a"});
    CHECK_THROWS_AS(load_corpus_file("/nonexistent/corpus.txt", vocab), std::runtime_error);
    CHECK_THROWS_AS(build_vocabulary_file("/nonexistent/corpus.txt", 1), std::runtime_error);
}

TEST_CASE("round trip: corpus token count equals vocabulary counts") {
    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        std::string text;
        for (int line = 0; line < 20; ++line) {
            const std::size_t len = rng.next_below(6);  // may produce blank lines
            for (std::size_t i = 0; i < len; ++i) {
                text += "w" + std::to_string(rng.next_below(12));
                text += i + 1 < len ? " " : "";
            }
            text += "\n";
        }
        test::TempFile file(text);
        auto vocab = build_vocabulary_file(file.path(), 1);
        auto corpus = load_corpus_file(file.path(), vocab);
        CHECK(corpus.total_tokens() == vocab.total_count());
    }
}

TEST_CASE("filtering monotonicity, sentence by sentence") {
    // every line keeps at least one content token so sentences align
    std::string text;
    Rng rng(23);
    for (int line = 0; line < 30; ++line) {
        text += "keep" + std::to_string(rng.next_below(5));
        const std::size_t extra = rng.next_below(8);
        for (std::size_t i = 0; i < extra; ++i)
            text += rng.next_below(2) != 0 ? " the" : " w" + std::to_string(rng.next_below(5));
        text += "\n";
    }
    test::TempFile file(text);
    StopList stops;
    stops.insert("the");
    LoadOptions filtered_opt;
    filtered_opt.stop_list = &stops;

    auto raw_vocab = build_vocabulary_file(file.path(), 1);
    auto raw = load_corpus_file(file.path(), raw_vocab);
    auto filt_vocab = build_vocabulary_file(file.path(), 1, filtered_opt);
    auto filt = load_corpus_file(file.path(), filt_vocab, filtered_opt);

    REQUIRE(raw.sentence_count() == filt.sentence_count());
    for (std::size_t s = 0; s < raw.sentence_count(); ++s)
        CHECK(filt.sentence(s).size() <= raw.sentence(s).size());
}

TEST_CASE("determinism: identical inputs produce identical corpora") {
    std::string text = "a b c\nb c a\n\nc a\n";
    test::TempFile file(text);
    auto v1 = build_vocabulary_file(file.path(), 1);
    auto v2 = build_vocabulary_file(file.path(), 1);
    CHECK(v1.words() == v2.words());
    CHECK(std::vector<std::uint64_t>(v1.counts().begin(), v1.counts().end()) ==
          std::vector<std::uint64_t>(v2.counts().begin(), v2.counts().end()));
    auto c1 = load_corpus_file(file.path(), v1);
    auto c2 = load_corpus_file(file.path(), v2);
    REQUIRE(c1.sentence_count() == c2.sentence_count());
    CHECK(std::vector<std::int32_t>(c1.tokens().begin(), c1.tokens().end()) ==
          std::vector<std::int32_t>(c2.tokens().begin(), c2.tokens().end()));
    CHECK(c1.doc_breaks() == c2.doc_breaks());
}

TEST_CASE("stop list file: comments and blank lines ignored") {
    test::TempFile file("# comment\nthe\n\na\n# another\nof\n");
    auto stops = StopList::load_file(file.path());
    CHECK(stops.size() == 3);
    CHECK(stops.contains("the"));
    CHECK(stops.contains("a"));
    CHECK(stops.contains("of"));
    CHECK_FALSE(stops.contains("# comment"));
}

TEST_CASE("corpus accessors: document spans and sentence lookup") {
    auto corpus = Corpus::from_sentences({{0, 1}, {2}, {3, 4, 5}}, {0, 2});
    CHECK(corpus.sentence_count() == 3);
    CHECK(corpus.total_tokens() == 6);
    CHECK(corpus.doc_breaks() == std::vector<std::size_t>{0, 2});
    CHECK(corpus.document_span(0) == std::pair<std::size_t, std::size_t>{0, 3});
    CHECK(corpus.document_span(1) == std::pair<std::size_t, std::size_t>{0, 3});
    CHECK(corpus.document_span(2) == std::pair<std::size_t, std::size_t>{3, 6});
    CHECK(corpus.sentence_of(0) == 0);
    CHECK(corpus.sentence_of(2) == 1);
    CHECK(corpus.sentence_of(5) == 2);
    CHECK(corpus.max_token_id() == 5);
    CHECK_THROWS_AS(Corpus::from_sentences({{0}, {}}), std::invalid_argument);
}
