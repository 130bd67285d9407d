#ifndef CHAC_SPEC_HPP
#define CHAC_SPEC_HPP

#include "chac/automaton.hpp"

#include <optional>
#include <string>
#include <vector>

namespace chac {

/// The abstract specification automaton extracted from a monitoring spec:
/// abstract states, one edge per trigger, and the guard condition table.
/// After parsing, every state is reachable from the initial one and the
/// model is deterministic per (state, label).
struct SpecModel {
    struct Trigger {
        std::string src;
        std::string label;
        std::string dst;
        Rect guard;
    };

    Eigen::Index dim = 0;
    std::vector<std::string> states;  // declaration order, pruned
    std::string init;
    std::vector<Trigger> triggers;

    bool has_state(const std::string& name) const;

    /// The unique trigger for (state, label), if declared.
    const Trigger* find_trigger(const std::string& state, const std::string& label) const;
};

/// Parses the spec DSL:
///   dim <n>
///   states <name>+
///   init <name>
///   trigger <src> -> <dst> on <label> when <atom> (and <atom>)*
/// with atom ::= x<i> (<=|>=|=) <number> | true. '#' starts a comment.
/// Unreachable states and their triggers are pruned. Diagnostics carry line
/// numbers; expect_dim cross-checks the declared dimension when given.
SpecModel parse_spec(const std::string& text,
                     std::optional<Eigen::Index> expect_dim = std::nullopt);

/// Pretty-prints a SpecModel back to the DSL; parse_spec(dump_spec(s)) == s.
std::string dump_spec(const SpecModel& s);

/// The monitor for the supported trigger subset: the trigger for
/// (state, label) fires iff it exists and its condition holds at the
/// pre-transition state x. At most one trigger can fire (determinism is
/// enforced at parse time).
const SpecModel::Trigger* monitor_fires(const SpecModel& s, const std::string& state,
                                        const std::string& label, const Vec& x);

/// Guard of the abstract edge (src, label, dst): the declared rectangle if a
/// trigger matches, the vacuous full rectangle when src == dst or no trigger
/// is declared.
Rect guard_lookup(const SpecModel& s, const std::string& src, const std::string& label,
                  const std::string& dst, Eigen::Index n);

/// The spec as a labels-only hybrid automaton (full guards, zero flows,
/// states numbered in declaration order). Used for discrete comparisons.
HybridAutomaton spec_to_automaton(const SpecModel& s);

} // namespace chac

#endif
