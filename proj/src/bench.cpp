#include "chac/bench.hpp"

#include "chac/merge.hpp"

#include <chrono>
#include <random>

namespace chac {

namespace {

// heap layout: root 0, children of i are 2i+1 and 2i+2
ModeId left_child(ModeId m) { return 2 * m + 1; }
ModeId right_child(ModeId m) { return 2 * m + 2; }

std::size_t depth_of(ModeId m) {
    std::size_t d = 0;
    while (m > 0) {
        m = (m - 1) / 2;
        ++d;
    }
    return d;
}

} // namespace

std::string to_string(SpecKind k) { return k == SpecKind::layer ? "layer" : "id"; }

SpecKind spec_kind_from_string(const std::string& s) {
    if (s == "layer")
        return SpecKind::layer;
    if (s == "id")
        return SpecKind::id;
    throw input_error("unknown spec kind '" + s + "' (expected layer or id)");
}

TreeBench gen_tree(const TreeBenchConfig& c) {
    if (c.depth < 1 || c.depth > 20)
        throw input_error("gen_tree: depth must be in [1, 20]");
    if (c.dim < 1)
        throw input_error("gen_tree: dimension must be at least 1");

    const std::size_t mode_count = (std::size_t{1} << (c.depth + 1)) - 1;
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> flow_dist(-1.0, 1.0);

    TreeBench bench;
    HybridAutomaton& a = bench.truth;
    a.dim = c.dim;
    a.init_mode = 0;
    a.init_x = Vec::Zero(c.dim);

    auto label_of = [&](ModeId dst) {
        if (c.spec_kind == SpecKind::layer)
            return "a" + std::to_string(depth_of(dst));
        return "e" + std::to_string(dst);
    };
    auto state_of = [&](ModeId m) {
        if (c.spec_kind == SpecKind::layer)
            return "layer" + std::to_string(depth_of(m));
        return "v" + std::to_string(m);
    };

    for (ModeId m = 0; m < mode_count; ++m) {
        a.modes.insert(m);
        Vec f(c.dim);
        for (Eigen::Index d = 0; d < c.dim; ++d)
            f[d] = flow_dist(rng);
        a.flow.emplace(m, Rect::singular(f));
        a.alpha.emplace(m, state_of(m));
        bench.abstraction.emplace(m, state_of(m));
        if (depth_of(m) < c.depth) {
            for (ModeId child : {left_child(m), right_child(m)}) {
                Edge e{m, label_of(child), child};
                a.edges.insert(e);
                a.guard.emplace(std::move(e), Rect::full(c.dim));
            }
        }
    }

    SpecModel& s = bench.spec;
    s.dim = c.dim;
    if (c.spec_kind == SpecKind::layer) {
        for (std::size_t k = 0; k <= c.depth; ++k)
            s.states.push_back("layer" + std::to_string(k));
        s.init = "layer0";
        for (std::size_t k = 1; k <= c.depth; ++k)
            s.triggers.push_back({"layer" + std::to_string(k - 1), "a" + std::to_string(k),
                                  "layer" + std::to_string(k), Rect::full(c.dim)});
    } else {
        for (ModeId m = 0; m < mode_count; ++m)
            s.states.push_back("v" + std::to_string(m));
        s.init = "v0";
        for (const Edge& e : a.edges)
            s.triggers.push_back(
                {"v" + std::to_string(e.src), e.label, "v" + std::to_string(e.dst),
                 Rect::full(c.dim)});
    }
    return bench;
}

namespace {

// Root-to-leaf walk along a fixed leaf, delays drawn from [1, 10].
OmniscientTrace leaf_walk(const HybridAutomaton& a, ModeId leaf, std::mt19937_64& rng) {
    std::vector<ModeId> path;  // leaf up to root
    for (ModeId m = leaf;; m = (m - 1) / 2) {
        path.push_back(m);
        if (m == 0)
            break;
    }
    std::reverse(path.begin(), path.end());

    std::uniform_real_distribution<double> delay_dist(1.0, 10.0);
    OmniscientTrace t;
    t.x0 = a.init_x;
    Vec x = a.init_x;
    for (std::size_t i = 0; i < path.size(); ++i) {
        ModeId m = path[i];
        double delay = delay_dist(rng);
        TraceStep s;
        if (i > 0)
            s.label = t.edges.back().label;
        s.delay = delay;
        s.x = x + delay * Vec(a.flow.at(m).lo());  // singular flow
        x = s.x;
        t.steps.push_back(std::move(s));
        if (i + 1 < path.size()) {
            ModeId child = path[i + 1];
            auto it = a.edges.lower_bound(Edge{m, "", 0});
            const Edge* found = nullptr;
            for (; it != a.edges.end() && it->src == m; ++it)
                if (it->dst == child) {
                    found = &*it;
                    break;
                }
            if (!found)
                throw invariant_error("leaf_walk: missing tree edge");
            t.edges.push_back(*found);
        }
    }
    return t;
}

} // namespace

std::vector<OmniscientTrace> gen_adequate_traces(const TreeBench& bench,
                                                 const TreeBenchConfig& c) {
    const HybridAutomaton& a = bench.truth;
    const ModeId first_leaf = static_cast<ModeId>((std::size_t{1} << c.depth) - 1);
    const ModeId leaf_count = static_cast<ModeId>(std::size_t{1} << c.depth);

    std::mt19937_64 rng(c.seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<OmniscientTrace> out;
    for (int round = 0; round < 2; ++round)
        for (ModeId leaf = first_leaf; leaf < first_leaf + leaf_count; ++leaf)
            out.push_back(leaf_walk(a, leaf, rng));

    std::uint64_t pad_seed = c.seed + 1;
    while (out.size() < c.trace_count)
        out.push_back(random_walk(a, c.depth + 1, pad_seed++));
    return out;
}

BenchMetrics run_benchmark(const TreeBenchConfig& c, std::size_t samples, unsigned jobs) {
    using clock = std::chrono::steady_clock;
    auto ms = [](clock::duration d) {
        return std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(d).count();
    };

    BenchMetrics m;
    m.config = c;

    TreeBench bench = gen_tree(c);
    std::vector<OmniscientTrace> traces = gen_adequate_traces(bench, c);
    std::vector<ObservableTrace> observable;
    observable.reserve(traces.size());
    for (const OmniscientTrace& t : traces)
        observable.push_back(observe(t));

    m.traces_generated = traces.size();
    m.truth_modes = bench.truth.modes.size();

    auto t0 = clock::now();
    ConstructionState st = run_construction(observable, bench.spec);
    auto t1 = clock::now();
    HybridAutomaton merged = merge_modes(st.aut);
    auto t2 = clock::now();

    m.tree_modes = st.aut.modes.size();
    m.merged_modes = merged.modes.size();
    m.merged_edges = merged.edges.size();
    m.construct_ms = ms(t1 - t0);
    m.merge_ms = ms(t2 - t1);
    m.total_ms = ms(t2 - t0);

    Acceptor accept(merged);
    m.replay_ok = true;
    for (const ObservableTrace& t : observable)
        if (!accept(t)) {
            m.replay_ok = false;
            break;
        }

    HybridAutomaton projection = project(bench.truth, traces);
    m.conservative_ok =
        conservative_check(merged, projection, samples, c.seed, c.depth + 1, jobs).ok();
    return m;
}

} // namespace chac
