#ifndef CHAC_CONSTRUCT_HPP
#define CHAC_CONSTRUCT_HPP

#include "chac/spec.hpp"
#include "chac/traces.hpp"

#include <vector>

namespace chac {

/// The singular rectangle of linear dynamics carrying x to x2 in time delta:
/// component d is (x2[d] - x[d]) / delta. Requires delta > 0.
Rect solve(const Vec& x, const Vec& x2, double delta);

/// The growing automaton H_k together with the per-trace mode map and the
/// step counter. Abstract-state tags live in aut.alpha; before merging the
/// edge graph is a tree rooted at the initial mode.
struct ConstructionState {
    HybridAutomaton aut;
    std::vector<ModeId> mode_map;  // trace index -> current mode
    SpecModel spec;
    std::size_t k = 1;
};

/// The quasi-empty automaton: one initial mode whose flow is the box hull of
/// solve over every trace's first delay, no edges, alpha(m0) = spec init.
/// All traces must share x0 and have at least one step.
ConstructionState init_construction(const std::vector<ObservableTrace>& traces,
                                    const SpecModel& spec);

/// Folds the k-th labeled step of every trace into the automaton: one fresh
/// mode and edge per trace, flow from solve, guard and abstract state from
/// the monitor when it fires (vacuous guard and inherited abstract state
/// otherwise). Existing modes, edges, flows and guards are never touched.
/// Traces shorter than k are skipped.
void construction_step(ConstructionState& st, const std::vector<ObservableTrace>& traces);

/// init_construction followed by steps up to the longest trace. The result
/// has 1 + sum(|t| - 1) modes and accepts every input trace.
ConstructionState run_construction(const std::vector<ObservableTrace>& traces,
                                   const SpecModel& spec);

} // namespace chac

#endif
