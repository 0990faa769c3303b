#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "lapstream/bench.hpp"
#include "lapstream/centrality.hpp"
#include "lapstream/ingest.hpp"

namespace lapstream {

namespace detail {

struct CliArgs {
    std::string input;
    std::string mode = "dynamic";
    std::string variant = "unweighted";
    std::string snapshot = "daily";
    std::size_t window = 0;
    std::string weights = "overwrite";
    bool normalized = false;
    std::string out;
    bool strict = false;
    std::size_t repeat = 1;
    bool dump = false;
};

inline void add_stream_options(CLI::App* cmd, CliArgs& a) {
    cmd->add_option("--input", a.input, "edge-list file or directory of snapshot files")->required();
    cmd->add_option("--snapshot", a.snapshot, "bucketing period: daily, monthly or count:N")->capture_default_str();
    cmd->add_option("--window", a.window, "sliding window length in periods (0 = cumulative)")->capture_default_str();
    cmd->add_option("--weights", a.weights, "repeated observations: overwrite or accumulate")
        ->check(CLI::IsMember({"overwrite", "accumulate"}))
        ->capture_default_str();
    cmd->add_flag("--strict", a.strict, "reject duplicate edge insertions");
}

inline void add_run_options(CLI::App* cmd, CliArgs& a) {
    add_stream_options(cmd, a);
    cmd->add_option("--variant", a.variant, "unweighted or weighted")
        ->check(CLI::IsMember({"unweighted", "weighted"}))
        ->capture_default_str();
    cmd->add_flag("--normalized", a.normalized, "divide dumped centralities by the snapshot energy");
    cmd->add_option("--out", a.out, "output directory for CSV reports and dumps");
    cmd->add_option("--repeat", a.repeat, "timed repetitions per algorithm")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_flag("--dump-centralities", a.dump, "write per-step node,centrality files (requires --out)");
}

inline Variant parse_variant(const std::string& s) { return s == "weighted" ? Variant::weighted : Variant::unweighted; }

inline StreamSpec stream_spec(const CliArgs& a) {
    StreamSpec spec;
    spec.input = a.input;
    spec.period = parse_period(a.snapshot);
    spec.window = a.window;
    spec.weights = a.weights == "accumulate" ? WeightPolicy::accumulate : WeightPolicy::overwrite;
    return spec;
}

inline std::size_t negative_weights(const SnapshotStream& s) {
    std::size_t n = s.initial.negative_weight_edges();
    for (const auto& d : s.deltas)
        for (const auto& e : d.adds) n += e.weight < 0.0 ? 1 : 0;
    return n;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write '" + path.string() + "'");
    f << text;
}

inline int do_centrality(const CliArgs& a, std::ostream& out, std::ostream& err) {
    const auto events = read_edge_events(a.input);
    Graph g = graph_from_events(events, a.weights == "accumulate" ? WeightPolicy::accumulate
                                                                   : WeightPolicy::overwrite);
    if (g.negative_weight_edges() > 0)
        err << "warning: " << g.negative_weight_edges() << " edges carry negative weights\n";
    const Variant variant = parse_variant(a.variant);
    CentralityMap c = lap_cent(g, variant, worker_threads_from_env());
    if (a.normalized) c = normalize(c, laplacian_energy(g, variant));
    write_centrality_dump(out, c);
    return 0;
}

inline int do_validate(const CliArgs& a, std::ostream& out, std::ostream& err) {
    const SnapshotStream s = load_stream(stream_spec(a));
    const auto issues = validate_stream(s, a.strict);
    for (const auto& issue : issues) err << "step " << issue.step << ": " << issue.message << '\n';
    if (!issues.empty()) return 2;
    out << "ok: " << s.steps() << " steps, " << (s.incremental_only() ? "incremental" : "full-dynamic")
        << " stream\n";
    return 0;
}

inline int do_run(const CliArgs& a, BenchMode mode, std::ostream& out, std::ostream& err) {
    if (a.dump && a.out.empty()) throw CLI::ValidationError("--dump-centralities", "requires --out");
    const SnapshotStream stream = load_stream(stream_spec(a));
    if (const auto neg = negative_weights(stream); neg > 0)
        err << "warning: " << neg << " edge insertions carry negative weights\n";

    const std::filesystem::path outdir = a.out;
    if (!a.out.empty()) std::filesystem::create_directories(outdir / (a.dump ? "centralities" : ""));

    BenchOptions opt;
    opt.mode = mode;
    opt.variant = parse_variant(a.variant);
    opt.repeat = a.repeat;
    opt.strict = a.strict;
    opt.threads = worker_threads_from_env();
    if (a.dump) {
        opt.on_step = [&](Mode m, std::size_t step, const Graph& g, const CentralityMap& c) {
            std::ostringstream text;
            write_centrality_dump(text, a.normalized ? normalize(c, laplacian_energy(g, opt.variant)) : c);
            const std::string name = std::string(m == Mode::batch ? "batch" : "dynamic") + "_step_" +
                                     std::to_string(step) + ".csv";
            write_file(outdir / "centralities" / name, text.str());
        };
    }
    const BenchReport report = benchmark_stream(stream, opt);

    auto csv = [](const std::vector<BenchRecord>& rs) {
        std::ostringstream os;
        emit_csv(os, rs);
        return os.str();
    };
    std::ostream& summary = a.out.empty() ? err : out;
    if (a.out.empty()) {
        out << csv(report.dynamic.empty() ? report.batch : report.dynamic);
    } else {
        for (const auto& [name, rs] : {std::pair{"batch", &report.batch}, std::pair{"dynamic", &report.dynamic}}) {
            if (rs->empty()) continue;
            write_file(outdir / (std::string(name) + ".csv"), csv(*rs));
            if (a.repeat > 1) {
                std::ostringstream os;
                emit_timing_csv(os, *rs);
                write_file(outdir / (std::string(name) + "_timing.csv"), os.str());
            }
        }
    }
    summary << "steps: " << stream.steps() << '\n';
    if (!report.batch.empty()) summary << "batch cumulative_s: " << report.batch.back().cumulative_s << '\n';
    if (!report.dynamic.empty()) summary << "dynamic cumulative_s: " << report.dynamic.back().cumulative_s << '\n';
    if (mode == BenchMode::compare) summary << "mean speedup: " << report.mean_speedup() << '\n';
    return 0;
}

}  // namespace detail

/// Entry point of the `lapstream` tool. Exit codes: 0 success, 1 usage error, 2 data error.
inline int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Laplacian centrality on evolving graphs: batch vs dynamic recomputation", "lapstream"};
    app.require_subcommand(1);
    detail::CliArgs a;

    auto* run = app.add_subcommand("run", "run one algorithm over a snapshot stream and report per-step timings");
    detail::add_run_options(run, a);
    run->add_option("--mode", a.mode, "batch or dynamic")
        ->check(CLI::IsMember({"batch", "dynamic"}))
        ->capture_default_str();

    auto* compare = app.add_subcommand("compare", "run batch and dynamic, cross-check maps, report speedups");
    detail::add_run_options(compare, a);

    auto* centrality = app.add_subcommand("centrality", "batch centrality of a single edge-list file");
    centrality->add_option("--input", a.input, "edge-list file")->required();
    centrality->add_option("--variant", a.variant, "unweighted or weighted")
        ->check(CLI::IsMember({"unweighted", "weighted"}))
        ->capture_default_str();
    centrality->add_option("--weights", a.weights, "repeated edges: overwrite or accumulate")
        ->check(CLI::IsMember({"overwrite", "accumulate"}));
    centrality->add_flag("--normalized", a.normalized, "divide by the graph Laplacian energy");

    auto* validate = app.add_subcommand("validate", "audit delta consistency of a snapshot stream");
    detail::add_stream_options(validate, a);

    try {
        app.parse(argc, argv);
        if (run->parsed()) return detail::do_run(a, a.mode == "batch" ? BenchMode::batch : BenchMode::dynamic, out, err);
        if (compare->parsed()) return detail::do_run(a, BenchMode::compare, out, err);
        if (centrality->parsed()) return detail::do_centrality(a, out, err);
        return detail::do_validate(a, out, err);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::Error& e) {
        err << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace lapstream
