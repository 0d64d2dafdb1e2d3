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

#include "ctxwin/model_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <system_error>

#include "ctxwin/errors.hpp"

namespace ctxwin {

namespace {

void append_double(std::string& line, double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    line.append(buf, res.ptr);
}

double parse_double(std::string_view text, std::size_t line_no) {
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw ParseError("bad number '" + std::string(text) + "'", line_no);
    return value;
}

long parse_long(std::string_view text, std::size_t line_no) {
    long value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw ParseError("bad integer '" + std::string(text) + "'", line_no);
    return value;
}

}  // namespace

void save_model(const EmbeddingModel& model, const Vocabulary& vocab, std::ostream& out) {
    if (static_cast<std::size_t>(model.vocab_size) != vocab.size())
        throw std::invalid_argument("model/vocabulary size mismatch");
    out << model.vocab_size << ' ' << model.dim << '\n';
    std::string line;
    for (std::int64_t i = 0; i < model.vocab_size; ++i) {
        line = vocab.word(static_cast<std::int32_t>(i));
        for (double x : model.input_row(i)) {
            line.push_back(' ');
            append_double(line, x);
        }
        line.push_back('\n');
        out << line;
    }
    if (!out) throw std::runtime_error("write error while saving model");
}

void save_model_file(const EmbeddingModel& model, const Vocabulary& vocab,
                     const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open model file for writing: " + path);
    save_model(model, vocab, out);
}

LoadedModel load_model(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("missing model header", 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = split_tokens(line);
    if (header.size() != 2) throw ParseError("expected header 'V D'", 1);
    const long v = parse_long(header[0], 1);
    const long d = parse_long(header[1], 1);
    if (v < 1 || d < 1) throw ParseError("header dimensions must be positive", 1);

    LoadedModel loaded;
    loaded.model.vocab_size = v;
    loaded.model.dim = static_cast<int>(d);
    loaded.model.input.resize(static_cast<std::size_t>(v) * static_cast<std::size_t>(d));
    loaded.model.output.assign(loaded.model.input.size(), 0.0);

    std::vector<std::string> words;
    words.reserve(static_cast<std::size_t>(v));
    for (long i = 0; i < v; ++i) {
        const std::size_t line_no = static_cast<std::size_t>(i) + 2;
        if (!std::getline(in, line)) throw ParseError("unexpected end of model file", line_no);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto fields = split_tokens(line);
        if (fields.size() != static_cast<std::size_t>(d) + 1)
            throw ParseError("expected 1 word + " + std::to_string(d) + " values, got " +
                                 std::to_string(fields.size()),
                             line_no);
        words.emplace_back(fields[0]);
        double* row = loaded.model.input.data() + static_cast<std::size_t>(i) * d;
        for (long j = 0; j < d; ++j)
            row[j] = parse_double(fields[static_cast<std::size_t>(j) + 1], line_no);
    }
    loaded.vocab = Vocabulary(std::move(words),
                              std::vector<std::uint64_t>(static_cast<std::size_t>(v), 0));
    return loaded;
}

LoadedModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    return load_model(in);
}

}  // namespace ctxwin
