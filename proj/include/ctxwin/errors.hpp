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

#include <stdexcept>
#include <string>

namespace ctxwin {

// Malformed input file; the message carries the offending line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
          line_(line) {}
    explicit ParseError(const std::string& what)
        : std::runtime_error(what), line_(0) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Too few scored items to report a metric.
class InsufficientCoverageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Correlation is undefined (zero rank variance in one of the lists).
class UndefinedCorrelationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A training step produced a NaN or infinity.
class NonFiniteError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ctxwin
