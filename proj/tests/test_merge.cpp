#include "chac/merge.hpp"

#include "chac/bench.hpp"
#include "chac/construct.hpp"
#include "chac/io.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

using namespace chac;

namespace {

ConstructionState aircraft_tree() {
    SpecModel spec = load_spec(chac::testing::fixture("aircraft.hspec"));
    auto traces = load_traces(chac::testing::fixture("appendix_a_traces.json")).observable;
    return run_construction(traces, spec);
}

std::set<ModeId> landing_modes(const HybridAutomaton& a) {
    std::set<ModeId> out;
    for (ModeId m : a.modes)
        if (a.alpha_of(m) == "landing")
            out.insert(m);
    return out;
}

} // namespace

TEST_CASE("action similarity") {
    ConstructionState st = aircraft_tree();
    SimilarityRelation rel = action_similarity(st.aut);

    // two landing modes entered via "adjust" are related
    std::vector<ModeId> adjust_entered;
    for (const Edge& e : st.aut.edges)
        if (e.label == "adjust")
            adjust_entered.push_back(e.dst);
    REQUIRE(adjust_entered.size() >= 2);
    CHECK(rel.related(adjust_entered[0], adjust_entered[1]));

    // modes in different abstract states sharing a label are not related:
    // travel modes entered via "descend"... all descend targets are landing,
    // so check a cruise-entered (travel) mode against a landing mode instead
    std::vector<ModeId> cruise_entered;
    for (const Edge& e : st.aut.edges)
        if (e.label == "cruise")
            cruise_entered.push_back(e.dst);
    CHECK_FALSE(rel.related(cruise_entered[0], adjust_entered[0]));

    // the initial mode shares no labels with anything
    for (const auto& [a, b] : rel.pairs) {
        CHECK(a != st.aut.init_mode);
        CHECK(b != st.aut.init_mode);
    }

    // only relates modes with equal alpha, symmetric storage
    for (const auto& [a, b] : rel.pairs) {
        CHECK(st.aut.alpha_of(a) == st.aut.alpha_of(b));
        CHECK(a < b);
    }
}

TEST_CASE("terminal similarity") {
    ConstructionState st = aircraft_tree();
    SimilarityRelation rel = terminal_similarity(st.aut);

    std::set<ModeId> leaves;
    std::set<ModeId> with_out;
    for (const Edge& e : st.aut.edges)
        with_out.insert(e.src);
    for (ModeId m : st.aut.modes)
        if (!with_out.count(m))
            leaves.insert(m);
    REQUIRE(leaves.size() == 3);  // one per input trace

    std::vector<ModeId> lv(leaves.begin(), leaves.end());
    CHECK(rel.related(lv[0], lv[1]));
    CHECK(rel.related(lv[1], lv[2]));
    // a leaf and an internal mode are not related
    CHECK_FALSE(rel.related(lv[0], st.aut.init_mode));
}

TEST_CASE("merge partition is the transitive closure") {
    // empty similarity: identity partition
    HybridAutomaton empty;
    empty.dim = 1;
    empty.init_mode = 0;
    empty.init_x = Vec::Zero(1);
    empty.modes = {0, 1, 2};
    for (ModeId m : empty.modes)
        empty.flow.emplace(m, Rect::singular(Vec::Zero(1)));
    empty.alpha = {{0, "a"}, {1, "b"}, {2, "c"}};
    Partition p = merge_partition(empty);
    for (ModeId m : empty.modes)
        CHECK(p.find(m) == m);

    // chained pairs unite into one class
    Partition chain(3);
    chain.unite(0, 1);
    chain.unite(1, 2);
    CHECK(chain.find(2) == 0);

    // union order does not matter
    Partition expect(5);
    expect.unite(0, 1);
    expect.unite(1, 2);
    expect.unite(3, 4);
    const auto expected = expect.classes();
    std::vector<std::pair<ModeId, ModeId>> pairs{{0, 1}, {1, 2}, {3, 4}};
    std::mt19937_64 rng(3);
    for (int iter = 0; iter < 20; ++iter) {
        std::shuffle(pairs.begin(), pairs.end(), rng);
        Partition q(5);
        for (auto [a, b] : pairs)
            q.unite(a, b);
        CHECK(q.classes() == expected);
    }
}

TEST_CASE("aircraft merge collapses the landing modes") {
    ConstructionState st = aircraft_tree();
    CHECK(landing_modes(st.aut).size() == 9);

    HybridAutomaton merged = merge_modes(st.aut);
    CHECK(merged.modes.size() == 5);
    CHECK(landing_modes(merged).size() == 1);

    // the merged automaton is discretely bisimilar to the original system
    // with its two terminal modes merged
    HybridAutomaton reference = load_automaton(chac::testing::fixture("aircraft_model.json"));
    CHECK(discretely_bisimilar(merged, reference));

    ModeId landing = *landing_modes(merged).begin();
    for (const Edge& e : merged.edges)
        if (e.src == landing)
            CHECK(e.dst == landing);  // only the adjust self-loop leaves it
}

TEST_CASE("lossless merge on the aircraft instance") {
    ConstructionState st = aircraft_tree();
    HybridAutomaton merged = merge_modes(st.aut);
    auto traces = load_traces(chac::testing::fixture("appendix_a_traces.json")).observable;

    Acceptor accept(merged);
    for (const ObservableTrace& t : traces)
        CHECK(accept(t).has_value());
    for (std::uint64_t seed = 0; seed < 200; ++seed)
        CHECK(accept(observe(random_walk(st.aut, 12, seed))).has_value());
}

TEST_CASE("identity-like merges only canonicalize") {
    // an automaton with all-distinct alphas and labels merges nothing
    HybridAutomaton a;
    a.dim = 1;
    a.init_mode = 0;
    a.init_x = Vec::Zero(1);
    for (ModeId m : {0, 1, 2}) {
        a.modes.insert(m);
        a.flow.emplace(m, Rect::singular(Vec::Constant(1, double(m))));
        a.alpha.emplace(m, "s" + std::to_string(m));
    }
    for (ModeId m : {1, 2}) {
        Edge e{static_cast<ModeId>(m - 1), "l" + std::to_string(m), m};
        a.edges.insert(e);
        a.guard.emplace(e, Rect::full(1));
    }
    HybridAutomaton merged = merge_modes(a);
    CHECK(merged == canonicalize(a));
}

TEST_CASE("explain stream records the unions") {
    ConstructionState st = aircraft_tree();
    std::ostringstream explain;
    MergeOptions opts;
    opts.explain = &explain;
    HybridAutomaton merged = merge_modes(st.aut, opts);
    std::string log = explain.str();
    CHECK(log.find("shared-in-label") != std::string::npos);
    // unions performed = modes lost
    std::size_t lines = std::count(log.begin(), log.end(), '\n');
    CHECK(lines == st.aut.modes.size() - merged.modes.size());

    // leaves with distinct entry labels are only united by terminal
    // similarity, which then shows up in the log
    HybridAutomaton fork;
    fork.dim = 1;
    fork.init_mode = 0;
    fork.init_x = Vec::Zero(1);
    for (ModeId m : {0, 1, 2}) {
        fork.modes.insert(m);
        fork.flow.emplace(m, Rect::singular(Vec::Zero(1)));
        fork.alpha.emplace(m, m == 0 ? "root" : "leafy");
    }
    for (ModeId m : {1, 2}) {
        Edge e{0, m == 1 ? "x" : "y", m};
        fork.edges.insert(e);
        fork.guard.emplace(e, Rect::full(1));
    }
    std::ostringstream explain2;
    MergeOptions opts2;
    opts2.explain = &explain2;
    HybridAutomaton merged2 = merge_modes(fork, opts2);
    CHECK(merged2.modes.size() == 2);
    CHECK(explain2.str().find("terminal leafy") != std::string::npos);
}

TEST_CASE("fixpoint merging converges and matches a single round here") {
    // similarity buckets depend only on labels and alpha, neither of which a
    // quotient changes, so the second round finds nothing to merge
    ConstructionState st = aircraft_tree();
    MergeOptions opts;
    opts.fixpoint = true;
    CHECK(merge_modes(st.aut, opts) == merge_modes(st.aut));
}

TEST_CASE("layer tree merges into one class per depth") {
    TreeBenchConfig c;
    c.depth = 3;
    c.dim = 2;
    c.seed = 9;
    TreeBench bench = gen_tree(c);
    std::vector<OmniscientTrace> traces = gen_adequate_traces(bench, c);
    std::vector<ObservableTrace> obs;
    for (const auto& t : traces)
        obs.push_back(observe(t));

    ConstructionState st = run_construction(obs, bench.spec);
    Partition p = merge_partition(st.aut);
    std::set<ModeId> reps;
    for (ModeId m : st.aut.modes)
        reps.insert(p.find(m));
    CHECK(reps.size() == c.depth + 1);

    HybridAutomaton merged = merge_modes(st.aut);
    CHECK(merged.modes.size() == c.depth + 1);  // a chain, one mode per layer
    CHECK(merged.edges.size() == c.depth);
}
