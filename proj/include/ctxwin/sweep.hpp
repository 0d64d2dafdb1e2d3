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
#include <vector>

#include "ctxwin/corpus.hpp"
#include "ctxwin/eval.hpp"
#include "ctxwin/trainer.hpp"
#include "ctxwin/windowing.hpp"

namespace ctxwin {

// The five swept axes plus the training configuration shared by all
// cells. Defaults give the full 4 x 2 x 3 x 2 x 2 = 96 grid.
struct GridSpec {
    std::vector<int> window_sizes{1, 2, 5, 10};
    std::vector<Scheme> schemes{Scheme::linear, Scheme::sqrt};
    std::vector<Position> positions{Position::left, Position::right, Position::symmetric};
    std::vector<bool> cross_sentential{true, false};
    std::vector<bool> stop_removal{true, false};
    TrainConfig fixed;            // per-cell seed is derived, see run_sweep
    std::uint64_t min_count = 5;  // vocabulary cutoff used by the sweep CLI
};

struct CellConfig {
    std::size_t index = 0;
    int window_size = 5;
    Scheme scheme = Scheme::linear;
    Position position = Position::symmetric;
    bool cross_sentential = false;
    bool stop_removal = false;

    WindowPolicy policy() const {
        return WindowPolicy{window_size, scheme, position, cross_sentential};
    }
};

// Cartesian product in lexicographic order of the axes above
// (window-major, stop_removal innermost).
std::vector<CellConfig> enumerate_grid(const GridSpec& spec);

// Flat key=value text format; lists are comma-separated, '#' starts a
// comment. Keys: window_sizes, schemes, positions, cross_sentential,
// stop_removal, dim, negatives, epochs, lr, min_lr, workers, min_count.
GridSpec parse_grid(std::istream& in);
GridSpec parse_grid_file(const std::string& path);

struct ResultRow {
    int window_size = 0;
    Scheme scheme = Scheme::linear;
    Position position = Position::symmetric;
    bool cross_sentential = false;
    bool stop_removal = false;
    double simlex_rho = 0.0;
    double simlex_coverage = 0.0;
    double analogy_acc = 0.0;
    double analogy_coverage = 0.0;
    std::uint64_t pairs_emitted = 0;
    double wall_time_s = 0.0;
    std::string status = "ok";

    bool ok() const { return status == "ok"; }
    // The hyper-parameter 5-tuple, used to detect already-completed cells.
    std::string key() const;
};

extern const char* const kResultsHeader;

void write_result_row(std::ostream& out, const ResultRow& row);
// strict=false skips malformed data lines (torn tail of an interrupted run).
std::vector<ResultRow> read_results(std::istream& in, bool strict = true);
std::vector<ResultRow> read_results_file(const std::string& path, bool strict = true);

struct SweepInputs {
    const Corpus* raw_corpus = nullptr;
    const Vocabulary* raw_vocab = nullptr;
    const Corpus* filtered_corpus = nullptr;
    const Vocabulary* filtered_vocab = nullptr;
    const SimilarityDataset* simlex = nullptr;
    const AnalogyDataset* analogies = nullptr;
};

// Trains and evaluates every grid cell, appending one row per cell to
// out_path as soon as it completes. Cells whose hyper-parameter tuple is
// already present in the file are skipped, so an interrupted sweep can be
// resumed. Per-cell failures are recorded with an error status and do not
// abort the sweep. Cell seeds derive from (seed, cell index). Returns the
// rows of all grid cells in grid order.
std::vector<ResultRow> run_sweep(const SweepInputs& inputs, const GridSpec& spec,
                                 const std::string& out_path, int jobs,
                                 std::uint64_t seed, bool verbose = false);

struct AggregateRow {
    std::string value;
    double mean_rho = 0.0;
    double mean_accuracy = 0.0;
    std::size_t cells = 0;
};

// Mean simlex_rho and analogy_acc across non-error rows sharing each value
// of the grouped hyper-parameter. Accepted names: window|window_size,
// scheme, position, cross|cross_sentential, stop|stop_removal.
std::vector<AggregateRow> aggregate(std::span<const ResultRow> rows, std::string_view param);

}  // namespace ctxwin
