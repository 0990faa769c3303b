#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lapstream/centrality.hpp"
#include "lapstream/incremental.hpp"
#include "lapstream/ingest.hpp"

namespace lapstream {

enum class BenchMode { batch, dynamic, compare };

/// One measured step of one algorithm.
struct BenchRecord {
    std::size_t step = 0;
    std::size_t num_nodes = 0;
    std::size_t num_edges = 0;
    std::size_t added_edges = 0;
    std::size_t removed_edges = 0;
    std::size_t centralities_computed = 0;
    double elapsed_s = 0.0;  // mean over repeats
    double cumulative_s = 0.0;
    std::optional<double> speedup;  // compare runs only
    double elapsed_stddev_s = 0.0;  // sample stddev over repeats, 0 when repeat == 1
};

/// Where the snapshots come from and how they are cut.
struct StreamSpec {
    std::filesystem::path input;
    Period period = Period::daily();
    std::size_t window = 0;  // 0: cumulative (incremental-only) stream
    WeightPolicy weights = WeightPolicy::overwrite;
};

struct BenchOptions {
    BenchMode mode = BenchMode::compare;
    Variant variant = Variant::unweighted;
    std::size_t repeat = 1;
    unsigned threads = 1;
    bool strict = false;
    /// Called once per step on the first repeat, outside the clock, with the snapshot
    /// graph and its centrality map.
    std::function<void(Mode, std::size_t, const Graph&, const CentralityMap&)> on_step;
};

struct RunConfig {
    StreamSpec stream;
    BenchOptions bench;
};

struct BenchReport {
    std::vector<BenchRecord> batch;
    std::vector<BenchRecord> dynamic;

    /// Mean of the per-step speedups; 0 when not a compare run.
    double mean_speedup() const {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& r : dynamic)
            if (r.speedup) {
                sum += *r.speedup;
                ++n;
            }
        return n == 0 ? 0.0 : sum / static_cast<double>(n);
    }
};

/// File input -> timestamp-bucketed stream; directory input -> one snapshot per file.
inline SnapshotStream load_stream(const StreamSpec& spec) {
    std::error_code ec;
    if (std::filesystem::is_directory(spec.input, ec)) return load_snapshot_directory(spec.input, spec.weights);
    const auto events = read_edge_events(spec.input);
    return spec.window == 0 ? snapshots_cumulative(events, spec.period, spec.weights)
                            : snapshots_window(events, spec.period, spec.window, spec.weights);
}

/// Relative comparison used by the compare-mode cross-check.
inline bool centralities_match(double a, double b, double rel_tol = 1e-9) {
    if (a == b) return true;
    return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b));
}

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct PassResult {
    std::vector<BenchRecord> records;
    std::vector<double> elapsed;
};

inline BenchRecord shape_record(std::size_t step, const Graph& g, const SnapshotStream& s) {
    BenchRecord r;
    r.step = step;
    r.num_nodes = g.node_count();
    r.num_edges = g.edge_count();
    if (step == 0) {
        r.added_edges = s.initial.edge_count();
    } else {
        r.added_edges = s.deltas[step - 1].adds.size();
        r.removed_edges = s.deltas[step - 1].removes.size();
    }
    return r;
}

inline void check_equal(std::size_t step, const CentralityMap& batch, const CentralityMap& dyn) {
    if (batch.size() != dyn.size())
        throw StepError(step, "batch/dynamic mismatch: " + std::to_string(batch.size()) + " vs " +
                                  std::to_string(dyn.size()) + " nodes");
    std::vector<NodeId> bad;
    for (const auto& [id, val] : batch.values) {
        auto it = dyn.values.find(id);
        if (it == dyn.values.end() || !centralities_match(val, it->second)) bad.push_back(id);
    }
    if (!bad.empty()) {
        const NodeId first = *std::min_element(bad.begin(), bad.end());
        throw StepError(step, "batch/dynamic mismatch at node " + std::to_string(first));
    }
}

// One full pass over the stream. Only centrality work (and, for dynamic, delta
// application plus affected-set gathering) is timed.
inline PassResult timed_pass(const SnapshotStream& s, Mode mode, const BenchOptions& opt, bool first_repeat,
                             std::vector<CentralityMap>* keep, const std::vector<CentralityMap>* verify) {
    PassResult out;
    Graph g = s.initial;
    g.set_duplicate_policy(opt.strict ? DuplicatePolicy::strict : DuplicatePolicy::upsert);
    CentralityMap current;
    for (std::size_t step = 0; step < s.steps(); ++step) {
        double elapsed = 0.0;
        try {
            if (step == 0) {
                const auto t0 = Clock::now();
                CentralityMap fresh = lap_cent(g, opt.variant, opt.threads);
                elapsed = seconds_since(t0);
                current = std::move(fresh);
            } else if (mode == Mode::batch) {
                apply_delta(g, s.deltas[step - 1]);
                const auto t0 = Clock::now();
                CentralityMap fresh = lap_cent(g, opt.variant, opt.threads);
                elapsed = seconds_since(t0);
                current = std::move(fresh);
            } else {
                const auto t0 = Clock::now();
                update_centralities(g, s.deltas[step - 1], current, opt.variant);
                elapsed = seconds_since(t0);
            }
        } catch (const StepError&) {
            throw;
        } catch (const Error& e) {
            throw StepError(step, e.what());
        }
        out.elapsed.push_back(elapsed);
        if (!first_repeat) continue;
        BenchRecord r = shape_record(step, g, s);
        r.centralities_computed = current.computed_count;
        out.records.push_back(r);
        if (verify) check_equal(step, (*verify)[step], current);
        if (opt.on_step) opt.on_step(mode, step, g, current);
        if (keep) keep->push_back(current);
    }
    return out;
}

inline std::vector<BenchRecord> measure(const SnapshotStream& s, Mode mode, const BenchOptions& opt,
                                        std::vector<CentralityMap>* keep,
                                        const std::vector<CentralityMap>* verify) {
    const std::size_t repeat = std::max<std::size_t>(1, opt.repeat);
    std::vector<std::vector<double>> samples(s.steps());
    std::vector<BenchRecord> records;
    for (std::size_t r = 0; r < repeat; ++r) {
        auto pass = timed_pass(s, mode, opt, r == 0, r == 0 ? keep : nullptr, r == 0 ? verify : nullptr);
        if (r == 0) records = std::move(pass.records);
        for (std::size_t i = 0; i < pass.elapsed.size(); ++i) samples[i].push_back(pass.elapsed[i]);
    }
    double cumulative = 0.0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& xs = samples[i];
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= static_cast<double>(xs.size());
        double var = 0.0;
        for (double x : xs) var += (x - mean) * (x - mean);
        records[i].elapsed_s = mean;
        records[i].elapsed_stddev_s = xs.size() > 1 ? std::sqrt(var / static_cast<double>(xs.size() - 1)) : 0.0;
        cumulative += mean;
        records[i].cumulative_s = cumulative;
    }
    return records;
}

}  // namespace detail

/// Runs the requested algorithms over a stream. In compare mode the batch pass runs
/// first and keeps its maps; the dynamic pass is verified against them step by step
/// before any record is returned, so a mismatch never yields timings.
inline BenchReport benchmark_stream(const SnapshotStream& s, const BenchOptions& opt) {
    BenchReport report;
    if (opt.mode == BenchMode::batch) {
        report.batch = detail::measure(s, Mode::batch, opt, nullptr, nullptr);
    } else if (opt.mode == BenchMode::dynamic) {
        report.dynamic = detail::measure(s, Mode::dynamic, opt, nullptr, nullptr);
    } else {
        std::vector<CentralityMap> reference;
        reference.reserve(s.steps());
        report.batch = detail::measure(s, Mode::batch, opt, &reference, nullptr);
        report.dynamic = detail::measure(s, Mode::dynamic, opt, nullptr, &reference);
        for (std::size_t i = 0; i < report.batch.size(); ++i) {
            const double ratio = report.batch[i].elapsed_s / std::max(report.dynamic[i].elapsed_s, 1e-9);
            report.batch[i].speedup = ratio;
            report.dynamic[i].speedup = ratio;
        }
    }
    return report;
}

inline BenchReport run_benchmark(const RunConfig& cfg) { return benchmark_stream(load_stream(cfg.stream), cfg.bench); }

inline constexpr const char* kCsvHeader =
    "step,num_nodes,num_edges,added_edges,removed_edges,centralities_computed,elapsed_s,cumulative_s,speedup";

/// Header line, one row per record, reals with 6 decimals, LF endings.
inline void emit_csv(std::ostream& os, const std::vector<BenchRecord>& records) {
    os << kCsvHeader << '\n';
    char buf[64];
    for (const auto& r : records) {
        os << r.step << ',' << r.num_nodes << ',' << r.num_edges << ',' << r.added_edges << ',' << r.removed_edges
           << ',' << r.centralities_computed << ',';
        std::snprintf(buf, sizeof buf, "%.6f", r.elapsed_s);
        os << buf << ',';
        std::snprintf(buf, sizeof buf, "%.6f", r.cumulative_s);
        os << buf << ',';
        if (r.speedup) {
            std::snprintf(buf, sizeof buf, "%.6f", *r.speedup);
            os << buf;
        }
        os << '\n';
    }
}

/// step,elapsed_mean_s,elapsed_stddev_s for repeated runs.
inline void emit_timing_csv(std::ostream& os, const std::vector<BenchRecord>& records) {
    os << "step,elapsed_mean_s,elapsed_stddev_s\n";
    char buf[96];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof buf, "%zu,%.6f,%.6f\n", r.step, r.elapsed_s, r.elapsed_stddev_s);
        os << buf;
    }
}

}  // namespace lapstream
