#ifndef CHAC_AUTOMATON_HPP
#define CHAC_AUTOMATON_HPP

#include "chac/geometry.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace chac {

using ModeId = std::uint32_t;

/// A labeled discrete transition. Ordered lexicographically by
/// (src, label, dst) so edge sets have a canonical iteration order.
struct Edge {
    ModeId src;
    std::string label;
    ModeId dst;

    auto operator<=>(const Edge&) const = default;
};

/// An n-dimensional multi-rectangular hybrid automaton: modes with flow
/// rectangles, labeled edges with guard rectangles, and one initial state.
/// Modes may optionally carry an abstract-state tag (alpha).
struct HybridAutomaton {
    Eigen::Index dim = 0;
    std::set<ModeId> modes;
    std::set<Edge> edges;
    std::map<ModeId, Rect> flow;
    std::map<Edge, Rect> guard;
    ModeId init_mode = 0;
    Vec init_x;
    std::map<ModeId, std::string> alpha;

    /// Action labels, derived from the edge set.
    std::set<std::string> labels() const;

    /// Abstract-state tag of a mode, or "" when untagged.
    const std::string& alpha_of(ModeId m) const;

    /// Checks the structural invariants (totality of flow/guard, endpoint
    /// membership, dimension agreement); throws invariant_error.
    void check() const;

    bool operator==(const HybridAutomaton& o) const;
};

/// Outgoing/incoming adjacency built once from the edge set.
class Adjacency {
public:
    explicit Adjacency(const HybridAutomaton& a);

    const std::vector<const Edge*>& out(ModeId m) const;
    const std::vector<const Edge*>& in(ModeId m) const;

private:
    std::map<ModeId, std::vector<const Edge*>> out_;
    std::map<ModeId, std::vector<const Edge*>> in_;
    std::vector<const Edge*> empty_;
};

/// Union-find over dense mode ids [0, n). The representative of a class is
/// its minimum ModeId.
class Partition {
public:
    explicit Partition(std::size_t n);

    ModeId find(ModeId m) const;
    bool unite(ModeId a, ModeId b);
    bool same(ModeId a, ModeId b) const { return find(a) == find(b); }
    std::size_t size() const { return parent_.size(); }

    /// Representative -> members (sorted), for all ids in [0, n).
    std::map<ModeId, std::vector<ModeId>> classes() const;

private:
    mutable std::vector<ModeId> parent_;
};

/// (indeg, outdeg) of a mode.
std::pair<std::size_t, std::size_t> degrees(const HybridAutomaton& a, ModeId m);

/// Discrete bisimilarity of the initial modes, restricted to shared labels.
/// Computed by partition refinement over the disjoint union of both mode
/// sets; edges with non-shared labels are disregarded.
bool discretely_bisimilar(const HybridAutomaton& a, const HybridAutomaton& b);

/// Renumbers modes in breadth-first order from the initial mode, visiting
/// out-edges in sorted (label, alpha-of-target, old id) order. Unreachable
/// modes keep their relative order and sort last. Idempotent; the result is
/// isomorphic to the input.
HybridAutomaton canonicalize(const HybridAutomaton& a);

/// The quotient automaton: modes become class representatives, flows and
/// guards of merged elements are box-hulled, edges collapse with set
/// semantics, alpha carries over. Throws invariant_error if a class mixes
/// distinct alpha tags.
HybridAutomaton quotient(const HybridAutomaton& a, const Partition& p);

} // namespace chac

#endif
