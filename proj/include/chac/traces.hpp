#ifndef CHAC_TRACES_HPP
#define CHAC_TRACES_HPP

#include "chac/automaton.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace chac {

/// One timed transition: the (optional) discrete action taken at the start
/// of the step, the delay spent in the mode entered, and the state reached.
/// Only the very first step of a trace carries no label.
struct TraceStep {
    std::optional<std::string> label;
    double delay = 0;
    Vec x;
};

/// An observable trace x0, d0, x1, (a1, d1, x2), ...: mode identities hidden.
struct ObservableTrace {
    Vec x0;
    std::vector<TraceStep> steps;

    /// Number of timed transitions (k+1 for k labeled steps).
    std::size_t length() const { return steps.size(); }
};

/// An observable trace plus the traversed edges; edges[i] annotates
/// steps[i+1] and carries that step's label.
struct OmniscientTrace {
    Vec x0;
    std::vector<TraceStep> steps;
    std::vector<Edge> edges;

    std::size_t length() const { return steps.size(); }

    /// Mode occupied during delay i (the automaton's initial mode for i = 0).
    ModeId mode_during(std::size_t i, ModeId init_mode) const {
        return i == 0 ? init_mode : edges[i - 1].dst;
    }
};

/// An omniscient trace certifying membership of its observable counterpart.
using Witness = OmniscientTrace;

/// Drops the edge annotations.
ObservableTrace observe(const OmniscientTrace& t);

enum class TraceDefect { none, bad_init, bad_chain, guard, flow };

struct ValidationResult {
    TraceDefect defect = TraceDefect::none;
    std::size_t at_step = 0;

    explicit operator bool() const { return defect == TraceDefect::none; }
    const char* reason() const;
};

/// Checks the validity conditions: correct initial state, first edge at the
/// initial mode, chained edges present in the automaton, every crossing
/// point inside its guard, every delay consistent with the current flow.
ValidationResult validate_omniscient(const HybridAutomaton& a, const OmniscientTrace& t);

/// Membership query: searches for a mode assignment making t valid.
/// Depth-first over (step, mode) with memoized failures; edge candidates are
/// tried in (label, dst) order so the returned witness is deterministic.
/// eps optionally widens guard and flow checks (exact by default).
std::optional<Witness> accepts(const HybridAutomaton& a, const ObservableTrace& t,
                               double eps = 0.0);

/// Reusable membership checker; builds the adjacency index once.
class Acceptor {
public:
    explicit Acceptor(const HybridAutomaton& a, double eps = 0.0);

    std::optional<Witness> operator()(const ObservableTrace& t) const;

private:
    const HybridAutomaton& aut_;
    Adjacency adj_;
    double eps_;
};

/// Number of strict traversals of m: indices i with dst(e_i) = m = src(e_i+1).
/// Entering a mode without leaving it again is not a traversal.
std::size_t traverses(const OmniscientTrace& t, ModeId m);

/// Delay sampling range for random walks.
struct WalkDelays {
    double delay_min = 1.0;
    double delay_max = 10.0;
};

/// Uniform random walk: per delay, a flow vector is drawn per dimension from
/// the current flow rectangle and a delay from the configured range; then an
/// enabled edge (guard contains the reached point) is picked uniformly. Stops
/// after max_steps delays or when no edge is enabled. Deterministic per seed;
/// the output always validates. Unbounded flow components are an input error.
OmniscientTrace random_walk(const HybridAutomaton& a, std::size_t max_steps, std::uint64_t seed,
                            const WalkDelays& delays = {});

} // namespace chac

#endif
