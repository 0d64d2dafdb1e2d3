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

#include <iosfwd>
#include <string>

#include "ctxwin/corpus.hpp"
#include "ctxwin/trainer.hpp"

namespace ctxwin {

// Text embedding format: header "V D", then one "word v1 ... vD" line per
// word. Only the input vectors are serialized (the published embeddings);
// values use shortest round-trip decimal formatting, locale-independent.
void save_model(const EmbeddingModel& model, const Vocabulary& vocab, std::ostream& out);
void save_model_file(const EmbeddingModel& model, const Vocabulary& vocab,
                     const std::string& path);

struct LoadedModel {
    EmbeddingModel model;  // output vectors zeroed
    Vocabulary vocab;      // counts unknown, zeroed
};

LoadedModel load_model(std::istream& in);
LoadedModel load_model_file(const std::string& path);

}  // namespace ctxwin
