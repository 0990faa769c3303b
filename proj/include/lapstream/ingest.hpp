#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "lapstream/graph.hpp"
#include "lapstream/incremental.hpp"

namespace lapstream {

struct EdgeEvent {
    NodeId u = 0;
    NodeId v = 0;
    double weight = 1.0;
    std::int64_t timestamp = 0;

    friend bool operator==(const EdgeEvent&, const EdgeEvent&) = default;
};

/// Snapshot bucketing period: UTC calendar day, UTC calendar month, or fixed event count.
struct Period {
    enum class Kind { day, month, count };
    Kind kind = Kind::day;
    std::size_t events_per_bucket = 1;

    static Period daily() { return {Kind::day, 1}; }
    static Period monthly() { return {Kind::month, 1}; }
    static Period count(std::size_t n) { return {Kind::count, n}; }
};

/// Accepts daily|day, monthly|month, count:N.
inline Period parse_period(std::string_view s) {
    if (s == "daily" || s == "day") return Period::daily();
    if (s == "monthly" || s == "month") return Period::monthly();
    if (s.starts_with("count:")) {
        std::size_t n = 0;
        const auto body = s.substr(6);
        auto [p, ec] = std::from_chars(body.data(), body.data() + body.size(), n);
        if (ec == std::errc{} && p == body.data() + body.size() && n > 0) return Period::count(n);
    }
    throw Error("invalid snapshot period '" + std::string(s) + "' (expected daily, monthly or count:N)");
}

/// How repeated observations of one edge combine into a weight.
enum class WeightPolicy { overwrite, accumulate };

struct SnapshotShape {
    std::size_t nodes = 0;
    std::size_t edges = 0;
};

/// An initial graph and the deltas that evolve it. labels and shapes have one entry
/// per step (initial included) and describe the snapshot each step should produce.
struct SnapshotStream {
    Graph initial;
    std::vector<EdgeDelta> deltas;
    std::vector<std::string> labels;
    std::vector<SnapshotShape> shapes;

    std::size_t steps() const noexcept { return deltas.size() + 1; }
    bool incremental_only() const noexcept {
        return std::all_of(deltas.begin(), deltas.end(), [](const EdgeDelta& d) { return d.removes.empty(); });
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n\f\v";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

// Fields are separated by ',' or by runs of whitespace; whitespace around a comma is
// part of the separator. Two commas in a row make an empty field, which is an error.
inline std::vector<std::string_view> split_fields(std::string_view line, std::size_t lineno) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    const std::size_t n = line.size();
    while (i < n) {
        std::size_t j = i;
        while (j < n && line[j] != ',' && !is_space(line[j])) ++j;
        if (j == i) throw ParseError(lineno, "empty field");
        out.push_back(line.substr(i, j - i));
        bool comma = false;
        while (j < n && (line[j] == ',' || is_space(line[j]))) {
            if (line[j] == ',') {
                if (comma) throw ParseError(lineno, "empty field");
                comma = true;
            }
            ++j;
        }
        if (j == n && comma) throw ParseError(lineno, "empty field");
        i = j;
    }
    return out;
}

template <class T>
T parse_number(std::string_view field, std::size_t lineno, const char* what) {
    T value{};
    auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || p != field.data() + field.size())
        throw ParseError(lineno, std::string("invalid ") + what + " '" + std::string(field) + "'");
    return value;
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline std::chrono::year_month_day to_ymd(std::int64_t day_index) {
    return std::chrono::year_month_day{std::chrono::sys_days{std::chrono::days{day_index}}};
}

inline std::string period_label(const Period& p, std::int64_t key) {
    char buf[48];
    if (p.kind == Period::Kind::day) {
        const auto ymd = to_ymd(key);
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    } else if (p.kind == Period::Kind::month) {
        std::snprintf(buf, sizeof buf, "%04lld-%02lld", static_cast<long long>(floor_div(key, 12)),
                      static_cast<long long>(key - 12 * floor_div(key, 12) + 1));
    } else {
        std::snprintf(buf, sizeof buf, "#%lld", static_cast<long long>(key));
    }
    return buf;
}

using BucketEdges = std::map<EdgeKey, double>;

struct Buckets {
    std::vector<BucketEdges> edges;
    std::vector<std::string> labels;
};

// Day and month periods cover the contiguous range between the first and last event,
// so calendar gaps become empty buckets.
inline Buckets make_buckets(std::vector<EdgeEvent> events, const Period& period, WeightPolicy policy) {
    if (events.empty()) throw EmptyDatasetError();
    std::stable_sort(events.begin(), events.end(),
                     [](const EdgeEvent& a, const EdgeEvent& b) { return a.timestamp < b.timestamp; });
    std::vector<std::int64_t> keys(events.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
        const std::int64_t t = events[i].timestamp;
        switch (period.kind) {
            case Period::Kind::day: keys[i] = floor_div(t, 86400); break;
            case Period::Kind::month: {
                const auto ymd = to_ymd(floor_div(t, 86400));
                keys[i] = static_cast<std::int64_t>(static_cast<int>(ymd.year())) * 12 +
                          (static_cast<unsigned>(ymd.month()) - 1);
                break;
            }
            case Period::Kind::count:
                keys[i] = static_cast<std::int64_t>(i / std::max<std::size_t>(1, period.events_per_bucket));
                break;
        }
    }
    const std::int64_t first = keys.front();
    const std::int64_t last = keys.back();
    Buckets b;
    b.edges.resize(static_cast<std::size_t>(last - first + 1));
    for (std::int64_t k = first; k <= last; ++k) b.labels.push_back(period_label(period, k));
    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto& e = events[i];
        if (e.u == e.v) throw SelfLoopError(e.u);
        auto& bucket = b.edges[static_cast<std::size_t>(keys[i] - first)];
        auto [it, fresh] = bucket.try_emplace(EdgeKey(e.u, e.v), e.weight);
        if (!fresh) it->second = policy == WeightPolicy::accumulate ? it->second + e.weight : e.weight;
    }
    return b;
}

}  // namespace detail

/// Parses `u v [w] [t]` lines. Comment lines start with '#', blank lines are skipped.
/// Missing weight is 1.0; missing timestamp is the 0-based event ordinal.
inline std::vector<EdgeEvent> parse_edge_events(std::istream& in) {
    std::vector<EdgeEvent> events;
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string_view line = detail::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto fields = detail::split_fields(line, lineno);
        if (fields.size() < 2 || fields.size() > 4)
            throw ParseError(lineno, "expected 2 to 4 fields, got " + std::to_string(fields.size()));
        EdgeEvent ev;
        ev.u = detail::parse_number<NodeId>(fields[0], lineno, "node id");
        ev.v = detail::parse_number<NodeId>(fields[1], lineno, "node id");
        if (fields.size() >= 3) {
            ev.weight = detail::parse_number<double>(fields[2], lineno, "weight");
            if (!std::isfinite(ev.weight)) throw ParseError(lineno, "non-finite weight");
        }
        ev.timestamp = fields.size() == 4 ? detail::parse_number<std::int64_t>(fields[3], lineno, "timestamp")
                                          : static_cast<std::int64_t>(events.size());
        if (ev.u == ev.v) throw ParseError(lineno, "self-loop on node " + std::to_string(ev.u));
        events.push_back(ev);
    }
    return events;
}

inline std::vector<EdgeEvent> read_edge_events(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open input '" + path.string() + "'");
    try {
        return parse_edge_events(in);
    } catch (const ParseError& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

/// Graph of the events, later observations overwriting or adding to earlier weights.
inline Graph graph_from_events(const std::vector<EdgeEvent>& events, WeightPolicy policy = WeightPolicy::overwrite) {
    Graph g;
    for (const auto& e : events) {
        double w = e.weight;
        if (policy == WeightPolicy::accumulate)
            if (auto old = g.weight(e.u, e.v)) w += *old;
        g.add_edge({e.u, e.v, w});
    }
    return g;
}

/// Minimal delta turning prev into next. Weight changes are encoded as upsert adds.
/// Nodes only in prev are left in place (nodes are never deleted).
inline EdgeDelta delta_between(const Graph& prev, const Graph& next) {
    EdgeDelta d;
    for (const auto& e : next.edges_sorted()) {
        const auto w = prev.weight(e.u, e.v);
        if (!w || *w != e.weight) d.adds.push_back(e);
    }
    for (const auto& e : prev.edges_sorted())
        if (!next.has_edge(e.u, e.v)) d.removes.emplace_back(e.u, e.v);
    return d;
}

/// Incremental-only stream: each delta adds the edges first seen in its bucket, plus
/// weight upserts for re-observed edges whose weight changed. Removes stay empty.
inline SnapshotStream snapshots_cumulative(const std::vector<EdgeEvent>& events, const Period& period,
                                           WeightPolicy policy = WeightPolicy::overwrite) {
    auto buckets = detail::make_buckets(events, period, policy);
    SnapshotStream s;
    std::map<EdgeKey, double> current;
    std::unordered_set<NodeId> seen;
    for (std::size_t k = 0; k < buckets.edges.size(); ++k) {
        EdgeDelta d;
        for (const auto& [key, w] : buckets.edges[k]) {
            auto it = current.find(key);
            const double next = (it != current.end() && policy == WeightPolicy::accumulate) ? it->second + w : w;
            if (it == current.end() || it->second != next) {
                d.adds.push_back({key.u, key.v, next});
                current[key] = next;
            }
            seen.insert(key.u);
            seen.insert(key.v);
        }
        if (k == 0) {
            for (const auto& e : d.adds) s.initial.add_edge(e);
        } else {
            s.deltas.push_back(std::move(d));
        }
        s.labels.push_back(buckets.labels[k]);
        s.shapes.push_back({seen.size(), current.size()});
    }
    return s;
}

/// Sliding-window stream: snapshot k holds edges observed in buckets k-window+1..k.
/// Edges observed on both sides of the boundary stay (re-weighted if their window
/// weight changed); edges whose last observation slid out are removed.
inline SnapshotStream snapshots_window(const std::vector<EdgeEvent>& events, const Period& period,
                                       std::size_t window_length, WeightPolicy policy = WeightPolicy::overwrite) {
    if (window_length < 1) throw Error("window length must be at least 1");
    auto buckets = detail::make_buckets(events, period, policy);
    const auto& B = buckets.edges;
    SnapshotStream s;
    std::map<EdgeKey, double> current;
    std::unordered_set<NodeId> seen;

    auto window_weight = [&](std::size_t k, const EdgeKey& key) -> std::optional<double> {
        const std::size_t lo = k + 1 >= window_length ? k + 1 - window_length : 0;
        std::optional<double> out;
        for (std::size_t b = k + 1; b-- > lo;) {
            auto it = B[b].find(key);
            if (it == B[b].end()) continue;
            if (policy == WeightPolicy::overwrite) return it->second;
            out = out.value_or(0.0) + it->second;
        }
        return out;
    };

    for (std::size_t k = 0; k < B.size(); ++k) {
        std::set<EdgeKey> candidates;
        for (const auto& [key, _] : B[k]) candidates.insert(key);
        if (k >= window_length)
            for (const auto& [key, _] : B[k - window_length]) candidates.insert(key);
        EdgeDelta d;
        for (const auto& key : candidates) {
            const auto w = window_weight(k, key);
            auto it = current.find(key);
            if (!w) {
                if (it != current.end()) {
                    d.removes.push_back(key);
                    current.erase(it);
                }
            } else if (it == current.end() || it->second != *w) {
                d.adds.push_back({key.u, key.v, *w});
                current[key] = *w;
            }
        }
        for (const auto& [key, _] : B[k]) {
            seen.insert(key.u);
            seen.insert(key.v);
        }
        if (k == 0) {
            for (const auto& e : d.adds) s.initial.add_edge(e);
        } else {
            s.deltas.push_back(std::move(d));
        }
        s.labels.push_back(buckets.labels[k]);
        s.shapes.push_back({seen.size(), current.size()});
    }
    return s;
}

/// One snapshot per regular file, files in lexicographic order, same line grammar.
inline SnapshotStream load_snapshot_directory(const std::filesystem::path& dir,
                                              WeightPolicy policy = WeightPolicy::overwrite) {
    std::vector<std::filesystem::path> files;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec))
        if (entry.is_regular_file()) files.push_back(entry.path());
    if (ec) throw Error("cannot read directory '" + dir.string() + "'");
    if (files.empty()) throw EmptyDatasetError();
    std::sort(files.begin(), files.end(),
              [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });

    SnapshotStream s;
    Graph prev;
    std::unordered_set<NodeId> seen;
    for (std::size_t k = 0; k < files.size(); ++k) {
        Graph next = graph_from_events(read_edge_events(files[k]), policy);
        for (const auto& [id, _] : next.vertices()) seen.insert(id);
        if (k == 0) {
            s.initial = next;
        } else {
            s.deltas.push_back(delta_between(prev, next));
        }
        s.labels.push_back(files[k].filename().string());
        s.shapes.push_back({seen.size(), next.edge_count()});
        prev = std::move(next);
    }
    return s;
}

struct ValidationIssue {
    std::size_t step = 0;
    std::string message;
};

/// Replays the stream on a strict-or-upsert graph and checks every step against its
/// declared shape. Returns the issues found; empty means the stream is consistent.
inline std::vector<ValidationIssue> validate_stream(const SnapshotStream& s, bool strict = false) {
    std::vector<ValidationIssue> issues;
    Graph g = s.initial;
    g.set_duplicate_policy(strict ? DuplicatePolicy::strict : DuplicatePolicy::upsert);
    auto check_shape = [&](std::size_t step) {
        if (step >= s.shapes.size()) return;
        const auto& want = s.shapes[step];
        if (g.node_count() != want.nodes || g.edge_count() != want.edges)
            issues.push_back({step, "expected " + std::to_string(want.nodes) + " nodes / " +
                                        std::to_string(want.edges) + " edges, replay gives " +
                                        std::to_string(g.node_count()) + " / " + std::to_string(g.edge_count())});
    };
    check_shape(0);
    for (std::size_t i = 0; i < s.deltas.size(); ++i) {
        try {
            apply_delta(g, s.deltas[i]);
        } catch (const Error& e) {
            issues.push_back({i + 1, e.what()});
            return issues;
        }
        check_shape(i + 1);
    }
    return issues;
}

}  // namespace lapstream
