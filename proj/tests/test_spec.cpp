#include "chac/spec.hpp"

#include "chac/io.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace chac;
using chac::testing::vec;

TEST_CASE("parse the aircraft spec") {
    SpecModel s = load_spec(chac::testing::fixture("aircraft.hspec"));
    CHECK(s.dim == 3);
    CHECK(s.states == std::vector<std::string>{"takeoff", "travel", "landing"});
    CHECK(s.init == "takeoff");
    REQUIRE(s.triggers.size() == 2);
    CHECK(s.triggers[0].src == "takeoff");
    CHECK(s.triggers[0].label == "cruise");
    CHECK(s.triggers[0].dst == "travel");
    CHECK(s.triggers[0].guard == Rect{{-kInf, kInf}, {-kInf, kInf}, {300, kInf}});
    CHECK(s.triggers[1].guard == Rect::full(3));
}

TEST_CASE("unreachable states are pruned") {
    SpecModel s = parse_spec("dim 1\nstates a b orphan\ninit a\ntrigger a -> b on go when true\n");
    CHECK(s.states == std::vector<std::string>{"a", "b"});

    // triggers hanging off unreachable states disappear with them
    SpecModel t = parse_spec(
        "dim 1\nstates a b c\ninit a\n"
        "trigger a -> b on go when true\n"
        "trigger c -> b on back when true\n");
    CHECK(t.states == std::vector<std::string>{"a", "b"});
    CHECK(t.triggers.size() == 1);

    SpecModel lonely = parse_spec("dim 2\nstates only other\ninit only\n");
    CHECK(lonely.states == std::vector<std::string>{"only"});
    CHECK(lonely.triggers.empty());
}

TEST_CASE("parse diagnostics") {
    using doctest::Contains;
    CHECK_THROWS_WITH_AS(parse_spec("dim 1\nstates a\ninit a\nfrobnicate\n"), Contains("spec:4"),
                         input_error);
    CHECK_THROWS_WITH_AS(
        parse_spec("dim 1\nstates a b\ninit a\ntrigger a -> b on go when x3 >= 1\n"),
        Contains("dimension"), input_error);
    CHECK_THROWS_AS(parse_spec("dim 1\nstates a b\ninit c\n"), input_error);
    CHECK_THROWS_AS(parse_spec("states a\ninit a\n"), input_error);  // missing dim
    // deterministic per (state, label)
    CHECK_THROWS_WITH_AS(parse_spec("dim 1\nstates a b c\ninit a\n"
                                    "trigger a -> b on go when true\n"
                                    "trigger a -> c on go when x0 >= 5\n"),
                         Contains("deterministic"), input_error);
    // contradictory bounds
    CHECK_THROWS_AS(
        parse_spec("dim 1\nstates a b\ninit a\ntrigger a -> b on go when x0 >= 2 and x0 <= 1\n"),
        input_error);
    // dimension cross-check
    CHECK_THROWS_AS(parse_spec("dim 2\nstates a\ninit a\n", 3), input_error);
}

TEST_CASE("monitor_fires") {
    SpecModel s = load_spec(chac::testing::fixture("aircraft.hspec"));
    const SpecModel::Trigger* t = monitor_fires(s, "takeoff", "cruise", vec({1000, 0, 300}));
    REQUIRE(t != nullptr);
    CHECK(t->dst == "travel");
    CHECK(monitor_fires(s, "takeoff", "turnLeft", vec({0, 0, 0})) == nullptr);
    // altitude below the bound: the trigger exists but does not fire
    CHECK(monitor_fires(s, "takeoff", "cruise", vec({10, 0, 5})) == nullptr);
    // boundary altitude fires
    CHECK(monitor_fires(s, "takeoff", "cruise", vec({300, 0, 300})) != nullptr);
}

TEST_CASE("guard_lookup") {
    SpecModel s = load_spec(chac::testing::fixture("aircraft.hspec"));
    CHECK(guard_lookup(s, "takeoff", "cruise", "travel", 3) ==
          Rect{{-kInf, kInf}, {-kInf, kInf}, {300, kInf}});
    CHECK(guard_lookup(s, "travel", "adjust", "travel", 3) == Rect::full(3));
    CHECK(guard_lookup(s, "landing", "cruise", "takeoff", 3) == Rect::full(3));
}

TEST_CASE("dump round-trips") {
    SpecModel s = load_spec(chac::testing::fixture("aircraft.hspec"));
    SpecModel again = parse_spec(dump_spec(s));
    CHECK(again.dim == s.dim);
    CHECK(again.states == s.states);
    CHECK(again.init == s.init);
    REQUIRE(again.triggers.size() == s.triggers.size());
    for (std::size_t i = 0; i < s.triggers.size(); ++i) {
        CHECK(again.triggers[i].src == s.triggers[i].src);
        CHECK(again.triggers[i].label == s.triggers[i].label);
        CHECK(again.triggers[i].dst == s.triggers[i].dst);
        CHECK(again.triggers[i].guard == s.triggers[i].guard);
    }

    // equality constraints and awkward constants survive the round trip
    SpecModel odd = parse_spec(
        "dim 2\nstates a b\ninit a\n"
        "trigger a -> b on go when x0 = 0.1 and x1 >= -3.333333333333333\n");
    SpecModel odd2 = parse_spec(dump_spec(odd));
    CHECK(odd2.triggers[0].guard == odd.triggers[0].guard);
}

TEST_CASE("spec_to_automaton") {
    SpecModel s = load_spec(chac::testing::fixture("aircraft.hspec"));
    HybridAutomaton a = spec_to_automaton(s);
    CHECK(a.modes.size() == 3);
    CHECK(a.edges.size() == 2);
    CHECK(a.init_mode == 0);
    CHECK(a.alpha_of(0) == "takeoff");
    CHECK(a.labels() == std::set<std::string>{"cruise", "descend"});
}
