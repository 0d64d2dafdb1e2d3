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

#include "ctxwin/sweep.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "ctxwin/errors.hpp"
#include "ctxwin/rng.hpp"

namespace ctxwin {

const char* const kResultsHeader =
    "window_size\tscheme\tposition\tcross_sentential\tstop_removal\tsimlex_rho\t"
    "simlex_coverage\tanalogy_acc\tanalogy_coverage\tpairs_emitted\twall_time_s\tstatus";

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t pos = s.find(',', start);
        const std::string_view item =
            trim(pos == std::string_view::npos ? s.substr(start) : s.substr(start, pos - start));
        if (!item.empty()) out.push_back(item);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

bool parse_bool(std::string_view s, std::size_t line_no) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ParseError("bad boolean '" + std::string(s) + "'", line_no);
}

long parse_long(std::string_view s, std::size_t line_no) {
    long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ParseError("bad integer '" + std::string(s) + "'", line_no);
    return v;
}

double parse_double(std::string_view s, std::size_t line_no) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ParseError("bad number '" + std::string(s) + "'", line_no);
    return v;
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string sanitize(std::string_view message) {
    std::string out(message);
    for (char& c : out)
        if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    return out;
}

}  // namespace

std::vector<CellConfig> enumerate_grid(const GridSpec& spec) {
    if (spec.window_sizes.empty() || spec.schemes.empty() || spec.positions.empty() ||
        spec.cross_sentential.empty() || spec.stop_removal.empty())
        throw std::invalid_argument("grid axis is empty");
    for (int w : spec.window_sizes)
        if (w < 1) throw std::invalid_argument("window size must be >= 1");

    std::vector<CellConfig> cells;
    cells.reserve(spec.window_sizes.size() * spec.schemes.size() * spec.positions.size() *
                  spec.cross_sentential.size() * spec.stop_removal.size());
    std::size_t index = 0;
    for (int w : spec.window_sizes)
        for (Scheme s : spec.schemes)
            for (Position p : spec.positions)
                for (bool x : spec.cross_sentential)
                    for (bool r : spec.stop_removal)
                        cells.push_back(CellConfig{index++, w, s, p, x, r});
    return cells;
}

GridSpec parse_grid(std::istream& in) {
    GridSpec spec;
    bool min_lr_set = false;
    bool lr_set = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string_view view(line);
        const std::size_t hash = view.find('#');
        if (hash != std::string_view::npos) view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        const std::size_t eq = view.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected key = value", line_no);
        const std::string_view key = trim(view.substr(0, eq));
        const std::string_view value = trim(view.substr(eq + 1));
        const auto items = split_list(value);
        if (items.empty()) throw ParseError("empty value for '" + std::string(key) + "'", line_no);

        if (key == "window_sizes") {
            spec.window_sizes.clear();
            for (auto i : items) spec.window_sizes.push_back(static_cast<int>(parse_long(i, line_no)));
        } else if (key == "schemes") {
            spec.schemes.clear();
            for (auto i : items) spec.schemes.push_back(parse_scheme(i));
        } else if (key == "positions") {
            spec.positions.clear();
            for (auto i : items) spec.positions.push_back(parse_position(i));
        } else if (key == "cross_sentential") {
            spec.cross_sentential.clear();
            for (auto i : items) spec.cross_sentential.push_back(parse_bool(i, line_no));
        } else if (key == "stop_removal") {
            spec.stop_removal.clear();
            for (auto i : items) spec.stop_removal.push_back(parse_bool(i, line_no));
        } else if (key == "dim") {
            spec.fixed.dim = static_cast<int>(parse_long(items[0], line_no));
        } else if (key == "negatives") {
            spec.fixed.negatives = static_cast<int>(parse_long(items[0], line_no));
        } else if (key == "epochs") {
            spec.fixed.epochs = static_cast<int>(parse_long(items[0], line_no));
        } else if (key == "lr") {
            spec.fixed.initial_lr = parse_double(items[0], line_no);
            lr_set = true;
        } else if (key == "min_lr") {
            spec.fixed.min_lr = parse_double(items[0], line_no);
            min_lr_set = true;
        } else if (key == "workers") {
            spec.fixed.workers = static_cast<int>(parse_long(items[0], line_no));
        } else if (key == "min_count") {
            spec.min_count = static_cast<std::uint64_t>(parse_long(items[0], line_no));
        } else {
            throw ParseError("unknown grid key '" + std::string(key) + "'", line_no);
        }
    }
    if (in.bad()) throw ParseError("read error in grid file", line_no + 1);
    if (lr_set && !min_lr_set) spec.fixed.min_lr = spec.fixed.initial_lr * 1e-4;
    return spec;
}

GridSpec parse_grid_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open grid file: " + path);
    return parse_grid(in);
}

std::string ResultRow::key() const {
    std::string k = std::to_string(window_size);
    k += '\t';
    k += to_string(scheme);
    k += '\t';
    k += to_string(position);
    k += '\t';
    k += cross_sentential ? "true" : "false";
    k += '\t';
    k += stop_removal ? "true" : "false";
    return k;
}

void write_result_row(std::ostream& out, const ResultRow& row) {
    out << row.key() << '\t' << format_double(row.simlex_rho) << '\t'
        << format_double(row.simlex_coverage) << '\t' << format_double(row.analogy_acc) << '\t'
        << format_double(row.analogy_coverage) << '\t' << row.pairs_emitted << '\t'
        << format_double(row.wall_time_s) << '\t' << row.status << '\n';
}

std::vector<ResultRow> read_results(std::istream& in, bool strict) {
    std::vector<ResultRow> rows;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!saw_header) {
            saw_header = true;
            if (line == kResultsHeader) continue;
            if (strict) throw ParseError("unexpected results header", line_no);
            // headerless file in lenient mode: parse the line as data
        }
        std::vector<std::string_view> f;
        {
            std::string_view view(line);
            std::size_t start = 0;
            while (start <= view.size()) {
                const std::size_t pos = view.find('\t', start);
                f.push_back(pos == std::string_view::npos ? view.substr(start)
                                                          : view.substr(start, pos - start));
                if (pos == std::string_view::npos) break;
                start = pos + 1;
            }
        }
        try {
            if (f.size() != 12) throw ParseError("expected 12 columns", line_no);
            ResultRow row;
            row.window_size = static_cast<int>(parse_long(f[0], line_no));
            row.scheme = parse_scheme(f[1]);
            row.position = parse_position(f[2]);
            row.cross_sentential = parse_bool(f[3], line_no);
            row.stop_removal = parse_bool(f[4], line_no);
            row.simlex_rho = parse_double(f[5], line_no);
            row.simlex_coverage = parse_double(f[6], line_no);
            row.analogy_acc = parse_double(f[7], line_no);
            row.analogy_coverage = parse_double(f[8], line_no);
            row.pairs_emitted = static_cast<std::uint64_t>(parse_long(f[9], line_no));
            row.wall_time_s = parse_double(f[10], line_no);
            row.status = std::string(f[11]);
            rows.push_back(std::move(row));
        } catch (const std::exception&) {
            if (strict) throw;
            // torn or malformed row from an interrupted run; drop it
        }
    }
    if (!saw_header && strict) throw ParseError("missing results header", 1);
    return rows;
}

std::vector<ResultRow> read_results_file(const std::string& path, bool strict) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open results file: " + path);
    return read_results(in, strict);
}

namespace {

ResultRow run_cell(const SweepInputs& inputs, const GridSpec& spec, const CellConfig& cell,
                   std::uint64_t seed) {
    ResultRow row;
    row.window_size = cell.window_size;
    row.scheme = cell.scheme;
    row.position = cell.position;
    row.cross_sentential = cell.cross_sentential;
    row.stop_removal = cell.stop_removal;

    const Corpus& corpus = cell.stop_removal ? *inputs.filtered_corpus : *inputs.raw_corpus;
    const Vocabulary& vocab = cell.stop_removal ? *inputs.filtered_vocab : *inputs.raw_vocab;

    const auto t0 = std::chrono::steady_clock::now();
    try {
        NegativeSampler sampler(vocab);
        TrainConfig config = spec.fixed;
        config.seed = derive_seed(seed, cell.index);
        TrainStats stats;
        const EmbeddingModel model = train(corpus, cell.policy(), config, sampler, &stats);
        row.pairs_emitted = stats.pairs_emitted;
        const SimilarityResult sim = eval_similarity(model, vocab, *inputs.simlex);
        const AnalogyResult ana = eval_analogy(model, vocab, *inputs.analogies);
        row.simlex_rho = sim.rho;
        row.simlex_coverage = sim.coverage;
        row.analogy_acc = ana.overall;
        row.analogy_coverage = ana.coverage;
        row.status = "ok";
    } catch (const std::exception& e) {
        row.simlex_rho = row.simlex_coverage = std::nan("");
        row.analogy_acc = row.analogy_coverage = std::nan("");
        row.status = "error: " + sanitize(e.what());
    }
    row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

}  // namespace

std::vector<ResultRow> run_sweep(const SweepInputs& inputs, const GridSpec& spec,
                                 const std::string& out_path, int jobs, std::uint64_t seed,
                                 bool verbose) {
    if (inputs.raw_corpus == nullptr || inputs.raw_vocab == nullptr ||
        inputs.filtered_corpus == nullptr || inputs.filtered_vocab == nullptr ||
        inputs.simlex == nullptr || inputs.analogies == nullptr)
        throw std::invalid_argument("run_sweep: missing input");
    if (jobs < 1) jobs = 1;

    const auto cells = enumerate_grid(spec);

    std::map<std::string, ResultRow> existing;
    if (std::filesystem::exists(out_path)) {
        for (auto& row : read_results_file(out_path, /*strict=*/false))
            existing.emplace(row.key(), std::move(row));
    }

    std::ofstream sink(out_path, std::ios::app);
    if (!sink) throw std::runtime_error("cannot open results sink: " + out_path);
    if (existing.empty() && std::filesystem::file_size(out_path) == 0)
        sink << kResultsHeader << '\n' << std::flush;

    std::vector<const CellConfig*> pending;
    for (const auto& cell : cells) {
        ResultRow probe;
        probe.window_size = cell.window_size;
        probe.scheme = cell.scheme;
        probe.position = cell.position;
        probe.cross_sentential = cell.cross_sentential;
        probe.stop_removal = cell.stop_removal;
        if (existing.find(probe.key()) == existing.end()) pending.push_back(&cell);
    }
    if (verbose)
        std::fprintf(stderr, "sweep: %zu cells, %zu already done, %zu to run, %d job(s)\n",
                     cells.size(), cells.size() - pending.size(), pending.size(), jobs);

    std::vector<std::optional<ResultRow>> fresh(pending.size());
    std::atomic<std::size_t> next{0};
    std::mutex sink_mutex;
    auto work = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= pending.size()) break;
            ResultRow row = run_cell(inputs, spec, *pending[i], seed);
            {
                const std::lock_guard<std::mutex> lock(sink_mutex);
                write_result_row(sink, row);
                sink.flush();
                if (verbose)
                    std::fprintf(stderr, "cell %zu/%zu  [%s]  %s\n", pending[i]->index + 1,
                                 cells.size(), row.key().c_str(), row.status.c_str());
            }
            fresh[i] = std::move(row);
        }
    };
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    std::map<std::string, ResultRow> by_key = std::move(existing);
    for (auto& row : fresh)
        if (row.has_value()) by_key.insert_or_assign(row->key(), std::move(*row));

    std::vector<ResultRow> out;
    out.reserve(cells.size());
    for (const auto& cell : cells) {
        ResultRow probe;
        probe.window_size = cell.window_size;
        probe.scheme = cell.scheme;
        probe.position = cell.position;
        probe.cross_sentential = cell.cross_sentential;
        probe.stop_removal = cell.stop_removal;
        const auto it = by_key.find(probe.key());
        if (it != by_key.end()) out.push_back(it->second);
    }
    return out;
}

std::vector<AggregateRow> aggregate(std::span<const ResultRow> rows, std::string_view param) {
    enum class Axis { window, scheme, position, cross, stop };
    Axis axis;
    if (param == "window" || param == "window_size")
        axis = Axis::window;
    else if (param == "scheme")
        axis = Axis::scheme;
    else if (param == "position")
        axis = Axis::position;
    else if (param == "cross" || param == "cross_sentential")
        axis = Axis::cross;
    else if (param == "stop" || param == "stop_removal")
        axis = Axis::stop;
    else
        throw std::invalid_argument("unknown hyper-parameter '" + std::string(param) + "'");

    struct Acc {
        double rho = 0.0;
        double acc = 0.0;
        std::size_t n = 0;
    };
    std::map<long, Acc> groups;  // ordered by group key
    auto key_of = [&](const ResultRow& r) -> long {
        switch (axis) {
            case Axis::window: return r.window_size;
            case Axis::scheme: return static_cast<long>(r.scheme);
            case Axis::position: return static_cast<long>(r.position);
            case Axis::cross: return r.cross_sentential ? 1 : 0;
            default: return r.stop_removal ? 1 : 0;
        }
    };
    auto label_of = [&](long key) -> std::string {
        switch (axis) {
            case Axis::window: return std::to_string(key);
            case Axis::scheme: return to_string(static_cast<Scheme>(key));
            case Axis::position: return to_string(static_cast<Position>(key));
            default: return key != 0 ? "true" : "false";
        }
    };
    for (const auto& row : rows) {
        if (!row.ok()) continue;
        Acc& a = groups[key_of(row)];
        a.rho += row.simlex_rho;
        a.acc += row.analogy_acc;
        ++a.n;
    }
    std::vector<AggregateRow> out;
    out.reserve(groups.size());
    for (const auto& [key, acc] : groups)
        out.push_back(AggregateRow{label_of(key), acc.rho / static_cast<double>(acc.n),
                                   acc.acc / static_cast<double>(acc.n), acc.n});
    return out;
}

}  // namespace ctxwin
