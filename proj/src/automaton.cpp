#include "chac/automaton.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace chac {

std::set<std::string> HybridAutomaton::labels() const {
    std::set<std::string> out;
    for (const Edge& e : edges)
        out.insert(e.label);
    return out;
}

const std::string& HybridAutomaton::alpha_of(ModeId m) const {
    static const std::string empty;
    auto it = alpha.find(m);
    return it == alpha.end() ? empty : it->second;
}

void HybridAutomaton::check() const {
    if (dim < 1)
        throw invariant_error("automaton: dimension must be at least 1");
    if (!modes.count(init_mode))
        throw invariant_error("automaton: initial mode is not a mode");
    if (init_x.size() != dim)
        throw invariant_error("automaton: initial state has wrong dimension");
    for (const Edge& e : edges) {
        if (!modes.count(e.src) || !modes.count(e.dst))
            throw invariant_error("automaton: edge endpoint is not a mode");
        auto g = guard.find(e);
        if (g == guard.end())
            throw invariant_error("automaton: edge without guard");
        if (g->second.dim() != dim)
            throw invariant_error("automaton: guard has wrong dimension");
    }
    for (ModeId m : modes) {
        auto f = flow.find(m);
        if (f == flow.end())
            throw invariant_error("automaton: mode without flow");
        if (f->second.dim() != dim)
            throw invariant_error("automaton: flow has wrong dimension");
    }
}

bool HybridAutomaton::operator==(const HybridAutomaton& o) const {
    return dim == o.dim && modes == o.modes && edges == o.edges && flow == o.flow &&
           guard == o.guard && init_mode == o.init_mode && init_x == o.init_x && alpha == o.alpha;
}

Adjacency::Adjacency(const HybridAutomaton& a) {
    for (const Edge& e : a.edges) {
        out_[e.src].push_back(&e);
        in_[e.dst].push_back(&e);
    }
}

const std::vector<const Edge*>& Adjacency::out(ModeId m) const {
    auto it = out_.find(m);
    return it == out_.end() ? empty_ : it->second;
}

const std::vector<const Edge*>& Adjacency::in(ModeId m) const {
    auto it = in_.find(m);
    return it == in_.end() ? empty_ : it->second;
}

Partition::Partition(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), ModeId{0});
}

ModeId Partition::find(ModeId m) const {
    if (m >= parent_.size())
        throw input_error("Partition::find: id out of range");
    ModeId root = m;
    while (parent_[root] != root)
        root = parent_[root];
    while (parent_[m] != root) {  // path compression
        ModeId next = parent_[m];
        parent_[m] = root;
        m = next;
    }
    return root;
}

bool Partition::unite(ModeId a, ModeId b) {
    ModeId ra = find(a);
    ModeId rb = find(b);
    if (ra == rb)
        return false;
    // Representative is the class minimum.
    if (rb < ra)
        std::swap(ra, rb);
    parent_[rb] = ra;
    return true;
}

std::map<ModeId, std::vector<ModeId>> Partition::classes() const {
    std::map<ModeId, std::vector<ModeId>> out;
    for (ModeId m = 0; m < parent_.size(); ++m)
        out[find(m)].push_back(m);
    return out;
}

std::pair<std::size_t, std::size_t> degrees(const HybridAutomaton& a, ModeId m) {
    if (!a.modes.count(m))
        throw input_error("degrees: unknown mode");
    std::size_t indeg = 0;
    std::size_t outdeg = 0;
    for (const Edge& e : a.edges) {
        if (e.dst == m)
            ++indeg;
        if (e.src == m)
            ++outdeg;
    }
    return {indeg, outdeg};
}

namespace {

// Partition refinement on the disjoint union of two automata. Block ids are
// refined until the signature map (label, successor block) stabilizes.
struct BisimState {
    // modes of a get ids [0, |Ma|), modes of b follow
    std::vector<std::vector<std::pair<std::string, std::size_t>>> succ;  // per united id
    std::vector<std::size_t> block;
};

} // namespace

bool discretely_bisimilar(const HybridAutomaton& a, const HybridAutomaton& b) {
    std::set<std::string> shared;
    {
        std::set<std::string> la = a.labels();
        std::set<std::string> lb = b.labels();
        std::set_intersection(la.begin(), la.end(), lb.begin(), lb.end(),
                              std::inserter(shared, shared.begin()));
    }

    std::map<ModeId, std::size_t> ida;
    std::map<ModeId, std::size_t> idb;
    for (ModeId m : a.modes)
        ida.emplace(m, ida.size());
    std::size_t na = ida.size();
    for (ModeId m : b.modes)
        idb.emplace(m, na + idb.size());
    std::size_t total = na + idb.size();

    std::vector<std::vector<std::pair<std::string, std::size_t>>> succ(total);
    for (const Edge& e : a.edges)
        if (shared.count(e.label))
            succ[ida.at(e.src)].emplace_back(e.label, ida.at(e.dst));
    for (const Edge& e : b.edges)
        if (shared.count(e.label))
            succ[idb.at(e.src)].emplace_back(e.label, idb.at(e.dst));

    std::vector<std::size_t> block(total, 0);
    for (;;) {
        // signature: sorted, deduplicated set of (label, block of successor)
        std::map<std::pair<std::size_t, std::vector<std::pair<std::string, std::size_t>>>,
                 std::size_t>
            sig_to_block;
        std::vector<std::size_t> next(total);
        for (std::size_t v = 0; v < total; ++v) {
            std::vector<std::pair<std::string, std::size_t>> sig;
            sig.reserve(succ[v].size());
            for (const auto& [label, w] : succ[v])
                sig.emplace_back(label, block[w]);
            std::sort(sig.begin(), sig.end());
            sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
            auto key = std::make_pair(block[v], std::move(sig));
            auto [it, inserted] = sig_to_block.emplace(std::move(key), sig_to_block.size());
            next[v] = it->second;
        }
        if (next == block)
            break;
        block = std::move(next);
    }

    return block[ida.at(a.init_mode)] == block[idb.at(b.init_mode)];
}

HybridAutomaton canonicalize(const HybridAutomaton& a) {
    Adjacency adj(a);

    std::map<ModeId, ModeId> renum;
    std::deque<ModeId> queue;
    queue.push_back(a.init_mode);
    renum.emplace(a.init_mode, 0);
    while (!queue.empty()) {
        ModeId m = queue.front();
        queue.pop_front();
        std::vector<const Edge*> out = adj.out(m);
        std::stable_sort(out.begin(), out.end(), [&](const Edge* x, const Edge* y) {
            return std::tie(x->label, a.alpha_of(x->dst), x->dst) <
                   std::tie(y->label, a.alpha_of(y->dst), y->dst);
        });
        for (const Edge* e : out) {
            if (renum.emplace(e->dst, static_cast<ModeId>(renum.size())).second)
                queue.push_back(e->dst);
        }
    }
    for (ModeId m : a.modes)  // unreachable modes sort last, in old order
        renum.emplace(m, static_cast<ModeId>(renum.size()));

    HybridAutomaton out;
    out.dim = a.dim;
    out.init_mode = renum.at(a.init_mode);
    out.init_x = a.init_x;
    for (ModeId m : a.modes) {
        ModeId nm = renum.at(m);
        out.modes.insert(nm);
        out.flow.emplace(nm, a.flow.at(m));
        auto it = a.alpha.find(m);
        if (it != a.alpha.end())
            out.alpha.emplace(nm, it->second);
    }
    for (const Edge& e : a.edges) {
        Edge ne{renum.at(e.src), e.label, renum.at(e.dst)};
        out.edges.insert(ne);
        out.guard.emplace(std::move(ne), a.guard.at(e));
    }
    return out;
}

HybridAutomaton quotient(const HybridAutomaton& a, const Partition& p) {
    HybridAutomaton out;
    out.dim = a.dim;
    out.init_x = a.init_x;
    out.init_mode = p.find(a.init_mode);

    for (ModeId m : a.modes) {
        ModeId rep = p.find(m);
        out.modes.insert(rep);
        const Rect& f = a.flow.at(m);
        auto [it, fresh] = out.flow.emplace(rep, f);
        if (!fresh)
            it->second = box_hull(it->second, f);
        auto al = a.alpha.find(m);
        if (al != a.alpha.end()) {
            auto [ai, first] = out.alpha.emplace(rep, al->second);
            if (!first && ai->second != al->second)
                throw invariant_error("quotient: class mixes distinct abstract states");
        }
    }
    for (const Edge& e : a.edges) {
        Edge ne{p.find(e.src), e.label, p.find(e.dst)};
        const Rect& g = a.guard.at(e);
        auto [it, fresh] = out.guard.emplace(ne, g);
        if (!fresh)
            it->second = box_hull(it->second, g);
        out.edges.insert(std::move(ne));
    }
    return out;
}

} // namespace chac
