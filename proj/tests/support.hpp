#ifndef CHAC_TESTS_SUPPORT_HPP
#define CHAC_TESTS_SUPPORT_HPP

#include "chac/analysis.hpp"
#include "chac/automaton.hpp"
#include "chac/traces.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace chac::testing {

inline std::string fixture(const std::string& name) {
    return std::string(CHAC_FIXTURE_DIR) + "/" + name;
}

inline Vec vec(std::initializer_list<double> vs) {
    Vec v(static_cast<Eigen::Index>(vs.size()));
    Eigen::Index i = 0;
    for (double x : vs)
        v[i++] = x;
    return v;
}

/// A fixture family on which projections can be made perfect: automata whose
/// reachable graph is a tree, with bounded (non-singular) random flows and
/// guards equal to the exact box of states reachable before each edge under
/// the walk delay range. On these, every guard and flow bound is attainable
/// and random walks are never blocked.
struct ProjectionFixture {
    /// children_per_node = 1 builds a chain; 2 a binary tree. Flow bounds
    /// are dyadic rationals (multiples of 1/16) so every derived quantity —
    /// reachable boxes, midpoints, observed rates — is computed exactly in
    /// binary floating point and the projection equalities hold bit for bit.
    static HybridAutomaton build(std::size_t depth, Eigen::Index dim, std::size_t fanout,
                                 std::uint64_t seed, const WalkDelays& delays = {}) {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> lo_dist(-16, 15);   // lo in [-1, 1)
        std::uniform_int_distribution<int> width_dist(2, 16);  // width in [1/8, 1]

        HybridAutomaton a;
        a.dim = dim;
        a.init_mode = 0;
        a.init_x = Vec::Zero(dim);

        struct Node {
            ModeId id;
            std::size_t level;
        };
        std::vector<Node> frontier{{0, 0}};
        ModeId next = 0;
        auto add_mode = [&](ModeId m) {
            a.modes.insert(m);
            Eigen::ArrayXd lo(dim), hi(dim);
            for (Eigen::Index d = 0; d < dim; ++d) {
                lo[d] = lo_dist(rng) / 16.0;
                hi[d] = lo[d] + width_dist(rng) / 16.0;
            }
            a.flow.emplace(m, Rect(lo, hi));
        };
        add_mode(next++);

        // exit box of a mode = entry box + per-step contribution range
        auto exit_box = [&](ModeId m, const Rect& entry) {
            const Rect& f = a.flow.at(m);
            Eigen::ArrayXd cmin =
                (f.lo() >= 0).select(delays.delay_min * f.lo(), delays.delay_max * f.lo());
            Eigen::ArrayXd cmax =
                (f.hi() >= 0).select(delays.delay_max * f.hi(), delays.delay_min * f.hi());
            return Rect(entry.lo() + cmin, entry.hi() + cmax);
        };

        std::vector<Rect> entry{Rect::singular(a.init_x)};
        while (!frontier.empty()) {
            std::vector<Node> next_frontier;
            for (const Node& node : frontier) {
                if (node.level == depth)
                    continue;
                Rect crossing = exit_box(node.id, entry[node.id]);
                for (std::size_t c = 0; c < fanout; ++c) {
                    ModeId child = next++;
                    add_mode(child);
                    entry.push_back(crossing);
                    Edge e{node.id, "a" + std::to_string(node.level + 1), child};
                    a.edges.insert(e);
                    a.guard.emplace(std::move(e), crossing);
                    next_frontier.push_back({child, node.level + 1});
                }
            }
            frontier = std::move(next_frontier);
        }
        return a;
    }
};

/// Shrinks one guard of the automaton so that it excludes part of the
/// behavior exercised by the given reference walks: the interval is cut 10%
/// past the smallest observed crossing value (finite guard ends shrink by
/// 10% of their width). Returns false if the walks never cross any edge.
inline bool shrink_one_guard(HybridAutomaton& a, const std::vector<OmniscientTrace>& walks) {
    // pick the most-crossed edge so the mutation is observable
    std::map<Edge, std::size_t> crossings;
    std::map<Edge, std::pair<double, double>> observed;  // dim-0 min/max of crossing points
    for (const OmniscientTrace& w : walks) {
        for (std::size_t i = 0; i < w.edges.size(); ++i) {
            double v = w.steps[i].x[0];
            auto [it, fresh] = observed.emplace(w.edges[i], std::make_pair(v, v));
            if (!fresh) {
                it->second.first = std::min(it->second.first, v);
                it->second.second = std::max(it->second.second, v);
            }
            ++crossings[w.edges[i]];
        }
    }
    if (crossings.empty())
        return false;
    Edge target = crossings.begin()->first;
    for (const auto& [e, n] : crossings)
        if (n > crossings.at(target))
            target = e;

    // A built automaton need not carry the reference's mode ids, so the
    // guard of every built edge wearing the target's label is cut. Raising
    // the lower end 10% into the observed crossing span guarantees that the
    // walk attaining the minimum gets rejected.
    auto [obs_lo, obs_hi] = observed.at(target);
    double span = obs_hi - obs_lo;
    double cut = obs_lo + (span > 0 ? 0.1 * span : 1.0);
    bool changed = false;
    for (const Edge& e : a.edges) {
        if (e.label != target.label)
            continue;
        const Rect& g = a.guard.at(e);
        Eigen::ArrayXd lo = g.lo(), hi = g.hi();
        lo[0] = std::max(lo[0], cut);
        hi[0] = std::max(hi[0], lo[0]);
        a.guard.at(e) = Rect(lo, hi);
        changed = true;
    }
    return changed;
}

} // namespace chac::testing

#endif
