#ifndef CHAC_MERGE_HPP
#define CHAC_MERGE_HPP

#include "chac/automaton.hpp"

#include <iosfwd>
#include <set>
#include <utility>

namespace chac {

/// A symmetric relation over modes; only relates modes with equal alpha.
struct SimilarityRelation {
    std::set<std::pair<ModeId, ModeId>> pairs;  // stored as (min, max)

    void insert(ModeId a, ModeId b) {
        if (a != b)
            pairs.emplace(std::min(a, b), std::max(a, b));
    }
    bool related(ModeId a, ModeId b) const {
        return a != b && pairs.count({std::min(a, b), std::max(a, b)}) > 0;
    }
};

/// Action similarity: equal alpha and a shared incoming or outgoing edge
/// label. Materializes all pairs; quadratic in the bucket sizes, meant for
/// desk-scale inspection (the merge itself goes through merge_partition).
SimilarityRelation action_similarity(const HybridAutomaton& a);

/// Terminal similarity: equal alpha and outdegree 0.
SimilarityRelation terminal_similarity(const HybridAutomaton& a);

/// The finest equivalence containing action and terminal similarity, via
/// union-find over (alpha, label) buckets. The written relation is not
/// transitive; the quotient needs its closure.
Partition merge_partition(const HybridAutomaton& a);

struct MergeOptions {
    /// Re-run similarity + quotient until a fixed point. Off by default:
    /// the construction algorithm applies a single round, and the
    /// correctness properties are only claimed for that.
    bool fixpoint = false;
    /// When set, one line per union performed: "<m1> <m2> <justification>".
    std::ostream* explain = nullptr;
};

/// Quotient by merge similarity, then canonicalize. Alpha carries onto the
/// representatives; a class mixing alpha values is impossible by
/// construction and raises invariant_error.
HybridAutomaton merge_modes(const HybridAutomaton& a, const MergeOptions& opts = {});

} // namespace chac

#endif
