#ifndef CHAC_ANALYSIS_HPP
#define CHAC_ANALYSIS_HPP

#include "chac/spec.hpp"
#include "chac/traces.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace chac {

/// The projection of a onto a trace set: modes, labels, and edges restricted
/// to those occurring in the traces; guards tightened to the per-dimension
/// min/max of observed crossing points, flows to the min/max of observed
/// rates. The initial state is unchanged. Every trace must validate on a.
HybridAutomaton project(const HybridAutomaton& a, const std::vector<OmniscientTrace>& ts);

/// Per-mode traversal accounting plus the guard-permissiveness and
/// coarseness checks of the adequacy criteria.
struct AdequacyReport {
    struct ModeRecord {
        ModeId mode;
        std::size_t indeg = 0;
        std::size_t outdeg = 0;
        std::size_t a = 0;           // indeg + outdeg
        std::size_t threshold = 0;   // a(a-1)/2
        std::size_t needed = 0;      // threshold + 1 (minimum passing count)
        std::size_t traversals = 0;  // strict; entries for outdeg-0 modes
        bool traversable = true;     // false iff indeg = 0 and outdeg > 0
        bool pass = false;           // traversals > threshold
    };
    struct GuardViolation {
        Edge edge;
        std::string detail;
    };

    std::vector<ModeRecord> per_mode;
    bool criterion3_pass = false;              // every mode passes
    bool criterion3_pass_traversable = false;  // every structurally traversable mode passes
    std::vector<GuardViolation> criterion2_violations;
    bool criterion2_pass = false;
    std::optional<bool> criterion1_bisimilar;
};

/// Checks the three adequacy criteria of the inputs against a known
/// automaton: (1) the abstraction-quotient of a is discretely bisimilar to
/// the spec automaton, (2) spec guards are at least as permissive as the
/// guards of abstract-state-crossing edges (missing spec edges are reported
/// as structural violations, not exceptions), (3) per-mode traversal counts
/// strictly exceed a(a-1)/2. Modes that can never be exited count entries
/// instead; modes that can never be entered are flagged untraversable.
AdequacyReport adequacy_check(const HybridAutomaton& a, const std::vector<OmniscientTrace>& ts,
                              const SpecModel& s, const std::map<ModeId, std::string>& abstraction);

/// The trace-connectivity property: every truth mode with incoming label li
/// and outgoing label lo has some built mode carrying both, with matching
/// alpha. The trace set is the adequacy context and is not inspected here.
bool connectivity_holds(const HybridAutomaton& built, const HybridAutomaton& truth,
                        const std::vector<OmniscientTrace>& ts);

/// A finite trace set whose projection reproduces the automaton: per edge a
/// covering trace; per mode and dimension five traces (extremal flow,
/// extremal exit value, nominal); per mode, outgoing edge, and dimension one
/// trace maximizing the pre-transition value. Cardinality is exactly
/// |E| + n(5|M| + sum outdeg). Requires an acyclic automaton with bounded
/// flows and every mode reachable; guard minima are realized through the
/// exit-minimizing traces of downstream modes, which is exact on tree-shaped
/// graphs. Every emitted trace validates (error otherwise).
std::vector<OmniscientTrace> perfect_trace_set(const HybridAutomaton& a,
                                               const WalkDelays& delays = {});

/// Result of the sampled conservativeness check. Sampling is sound for
/// refutation only: an empty report means no counterexample was found, not
/// that inclusion holds.
struct ConservativeReport {
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    struct Counterexample {
        std::size_t walk_index;
        OmniscientTrace walk;
    };
    std::vector<Counterexample> rejected;

    bool ok() const { return rejected.empty(); }
};

/// Draws `samples` random walks from reference (seeded seed + index, so the
/// report is independent of the worker count) and reports every observable
/// trace rejected by built.
ConservativeReport conservative_check(const HybridAutomaton& built,
                                      const HybridAutomaton& reference, std::size_t samples,
                                      std::uint64_t seed, std::size_t max_steps = 64,
                                      unsigned jobs = 0);

} // namespace chac

#endif
