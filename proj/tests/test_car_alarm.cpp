// A car-alarm-style system: one clock-like dimension, lock/close plumbing,
// an arming timeout and an alarm phase. Exercises the construction end to
// end on a cyclic, timed-automaton-flavored input with a handful of
// hand-selected traces.

#include "chac/analysis.hpp"
#include "chac/construct.hpp"
#include "chac/merge.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace chac;
using chac::testing::vec;

namespace {

// modes: 0 open+unlocked, 1 closed+unlocked, 2 closed+locked, 3 armed,
// 4 alarm, 5 silenced
HybridAutomaton car_alarm_truth() {
    HybridAutomaton a;
    a.dim = 1;
    a.init_mode = 0;
    a.init_x = Vec::Zero(1);
    for (ModeId m = 0; m < 6; ++m) {
        a.modes.insert(m);
        a.flow.emplace(m, Rect::singular(Vec::Ones(1)));  // the clock
        a.alpha.emplace(m, m <= 2 ? "idle" : (m == 3 ? "armed" : "alarm"));
    }
    auto edge = [&](ModeId s, const char* l, ModeId d, Rect g) {
        Edge e{s, l, d};
        a.edges.insert(e);
        a.guard.emplace(std::move(e), std::move(g));
    };
    edge(0, "close", 1, Rect::full(1));
    edge(1, "open", 0, Rect::full(1));
    edge(1, "lock", 2, Rect::full(1));
    edge(2, "unlock", 1, Rect::full(1));
    edge(2, "arm", 3, Rect{{20, kInf}});  // arming only after the timeout
    edge(3, "breach", 4, Rect::full(1));
    edge(4, "silence", 5, Rect::full(1));
    return a;
}

// a deterministic trace along a label path, mode-annotated, fixed delays
OmniscientTrace drive(const HybridAutomaton& a, const std::vector<std::string>& labels,
                      double delay) {
    Adjacency adj(a);
    OmniscientTrace t;
    t.x0 = a.init_x;
    Vec x = a.init_x;
    ModeId mode = a.init_mode;
    for (std::size_t i = 0; i <= labels.size(); ++i) {
        TraceStep s;
        if (i > 0)
            s.label = labels[i - 1];
        s.delay = delay;
        s.x = x + delay * Vec(a.flow.at(mode).lo());
        x = s.x;
        t.steps.push_back(std::move(s));
        if (i < labels.size()) {
            const Edge* found = nullptr;
            for (const Edge* e : adj.out(mode))
                if (e->label == labels[i])
                    found = e;
            REQUIRE(found != nullptr);
            t.edges.push_back(*found);
            mode = found->dst;
        }
    }
    return t;
}

} // namespace

TEST_CASE("car-alarm-style construction is conservative") {
    HybridAutomaton truth = car_alarm_truth();
    SpecModel spec = parse_spec(
        "dim 1\nstates idle armed alarm\ninit idle\n"
        "trigger idle -> armed on arm when x0 >= 20\n"
        "trigger armed -> alarm on breach when true\n");

    // seven traces of length twelve (eleven labeled steps, delay 3 each)
    std::vector<std::vector<std::string>> paths{
        {"close", "open", "close", "open", "close", "lock", "unlock", "lock", "arm", "breach",
         "silence"},
        {"close", "lock", "unlock", "lock", "unlock", "open", "close", "lock", "arm", "breach",
         "silence"},
        {"close", "open", "close", "lock", "unlock", "lock", "unlock", "lock", "arm", "breach",
         "silence"},
        {"close", "lock", "unlock", "open", "close", "open", "close", "lock", "arm", "breach",
         "silence"},
        {"close", "open", "close", "open", "close", "open", "close", "lock", "arm", "breach",
         "silence"},
        {"close", "lock", "unlock", "lock", "unlock", "lock", "unlock", "lock", "arm", "breach",
         "silence"},
        {"close", "open", "close", "lock", "unlock", "open", "close", "lock", "arm", "breach",
         "silence"}};
    std::vector<OmniscientTrace> traces;
    for (const auto& p : paths) {
        OmniscientTrace t = drive(truth, p, 3);
        REQUIRE(t.length() == 12);
        REQUIRE(validate_omniscient(truth, t));
        traces.push_back(std::move(t));
    }

    std::vector<ObservableTrace> obs;
    for (const auto& t : traces)
        obs.push_back(observe(t));
    HybridAutomaton merged = merge_modes(run_construction(obs, spec).aut);

    // every input trace stays in the language
    Acceptor accept(merged);
    for (const ObservableTrace& t : obs)
        CHECK(accept(t).has_value());

    // and the construction over-approximates the projection on samples
    HybridAutomaton projection = project(truth, traces);
    ConservativeReport rep = conservative_check(merged, projection, 1000, 23, 16, 1);
    CHECK(rep.ok());
}
