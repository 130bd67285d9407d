#include "chac/analysis.hpp"

#include <algorithm>
#include <deque>
#include <thread>

namespace chac {

namespace {

struct MinMax {
    Eigen::ArrayXd lo;
    Eigen::ArrayXd hi;
    bool any = false;

    explicit MinMax(Eigen::Index n)
        : lo(Eigen::ArrayXd::Constant(n, kInf)), hi(Eigen::ArrayXd::Constant(n, -kInf)) {}

    void feed(const Vec& v) {
        lo = lo.min(v.array());
        hi = hi.max(v.array());
        any = true;
    }
    Rect rect() const { return Rect(lo, hi); }
};

} // namespace

HybridAutomaton project(const HybridAutomaton& a, const std::vector<OmniscientTrace>& ts) {
    if (ts.empty())
        throw input_error("project: empty trace set");

    std::map<ModeId, MinMax> rates;
    std::map<Edge, MinMax> crossings;
    std::set<ModeId> visited;

    for (std::size_t ti = 0; ti < ts.size(); ++ti) {
        const OmniscientTrace& t = ts[ti];
        ValidationResult v = validate_omniscient(a, t);
        if (!v)
            throw input_error("project: trace " + std::to_string(ti) +
                              " is not valid on the automaton (" + v.reason() + " at step " +
                              std::to_string(v.at_step) + ")");
        visited.insert(a.init_mode);
        const Vec* x = &t.x0;
        for (std::size_t i = 0; i < t.steps.size(); ++i) {
            ModeId m = t.mode_during(i, a.init_mode);
            visited.insert(m);
            const TraceStep& s = t.steps[i];
            if (s.delay > 0) {
                Vec rate = (s.x - *x) / s.delay;
                rates.emplace(m, MinMax(a.dim)).first->second.feed(rate);
            }
            if (i < t.edges.size())
                crossings.emplace(t.edges[i], MinMax(a.dim)).first->second.feed(s.x);
            x = &s.x;
        }
    }

    HybridAutomaton out;
    out.dim = a.dim;
    out.init_mode = a.init_mode;
    out.init_x = a.init_x;
    for (ModeId m : visited) {
        auto it = rates.find(m);
        if (it == rates.end() || !it->second.any)
            throw input_error("project: mode " + std::to_string(m) +
                              " occurs without a usable rate observation");
        out.modes.insert(m);
        out.flow.emplace(m, it->second.rect());
        auto al = a.alpha.find(m);
        if (al != a.alpha.end())
            out.alpha.emplace(m, al->second);
    }
    for (const auto& [e, mm] : crossings) {
        out.edges.insert(e);
        out.guard.emplace(e, mm.rect());
    }
    return out;
}

AdequacyReport adequacy_check(const HybridAutomaton& a, const std::vector<OmniscientTrace>& ts,
                              const SpecModel& s,
                              const std::map<ModeId, std::string>& abstraction) {
    AdequacyReport rep;

    for (ModeId m : a.modes)
        if (!abstraction.count(m))
            throw input_error("adequacy_check: abstraction is not total on the modes");

    std::map<ModeId, std::size_t> indeg;
    std::map<ModeId, std::size_t> outdeg;
    for (const Edge& e : a.edges) {
        ++outdeg[e.src];
        ++indeg[e.dst];
    }

    // strict traversals plus entry/start counts in one pass
    std::map<ModeId, std::size_t> traversals;
    std::map<ModeId, std::size_t> entries;
    for (const OmniscientTrace& t : ts) {
        ++entries[a.init_mode];  // the trace starts there
        for (std::size_t i = 0; i < t.edges.size(); ++i) {
            ++entries[t.edges[i].dst];
            if (i + 1 < t.edges.size() && t.edges[i].dst == t.edges[i + 1].src)
                ++traversals[t.edges[i].dst];
        }
    }

    auto count_of = [](const std::map<ModeId, std::size_t>& m, ModeId k) -> std::size_t {
        auto it = m.find(k);
        return it == m.end() ? 0 : it->second;
    };

    rep.criterion3_pass = true;
    rep.criterion3_pass_traversable = true;
    for (ModeId m : a.modes) {
        AdequacyReport::ModeRecord r;
        r.mode = m;
        r.indeg = count_of(indeg, m);
        r.outdeg = count_of(outdeg, m);
        r.a = r.indeg + r.outdeg;
        r.threshold = r.a * (r.a - (r.a ? 1 : 0)) / 2;
        r.needed = r.threshold + 1;
        if (r.outdeg == 0) {
            // a mode that cannot be exited counts how often it is reached
            r.traversals = count_of(entries, m);
        } else {
            r.traversals = count_of(traversals, m);
            r.traversable = r.indeg > 0;
        }
        r.pass = r.traversals > r.threshold;
        rep.criterion3_pass = rep.criterion3_pass && r.pass;
        if (r.traversable)
            rep.criterion3_pass_traversable = rep.criterion3_pass_traversable && r.pass;
        rep.per_mode.push_back(std::move(r));
    }

    // criterion 2: spec guards must be at least as permissive as the guards
    // of edges that cross abstract states
    for (const Edge& e : a.edges) {
        const std::string& va = abstraction.at(e.src);
        const std::string& vb = abstraction.at(e.dst);
        if (va == vb)
            continue;
        const SpecModel::Trigger* t = s.find_trigger(va, e.label);
        if (!t || t->dst != vb) {
            rep.criterion2_violations.push_back(
                {e, "no spec edge (" + va + ", " + e.label + ", " + vb + ")"});
        } else if (!subset(a.guard.at(e), t->guard)) {
            rep.criterion2_violations.push_back({e, "guard is not included in the spec guard"});
        }
    }
    rep.criterion2_pass = rep.criterion2_violations.empty();

    // criterion 1: the abstraction-quotient must be discretely bisimilar to
    // the spec automaton
    {
        HybridAutomaton tagged = a;
        tagged.alpha.clear();
        for (ModeId m : a.modes)
            tagged.alpha.emplace(m, abstraction.at(m));
        ModeId max_id = *a.modes.rbegin();
        Partition p(max_id + 1);
        std::map<std::string, ModeId> first;
        for (ModeId m : a.modes) {
            auto [it, fresh] = first.emplace(abstraction.at(m), m);
            if (!fresh)
                p.unite(it->second, m);
        }
        rep.criterion1_bisimilar = discretely_bisimilar(quotient(tagged, p), spec_to_automaton(s));
    }

    return rep;
}

bool connectivity_holds(const HybridAutomaton& built, const HybridAutomaton& truth,
                        const std::vector<OmniscientTrace>& ts) {
    (void)ts;  // adequacy context; the check itself is structural

    std::map<ModeId, std::set<std::string>> built_in;
    std::map<ModeId, std::set<std::string>> built_out;
    for (const Edge& e : built.edges) {
        built_out[e.src].insert(e.label);
        built_in[e.dst].insert(e.label);
    }

    std::map<ModeId, std::set<std::string>> truth_in;
    std::map<ModeId, std::set<std::string>> truth_out;
    for (const Edge& e : truth.edges) {
        truth_out[e.src].insert(e.label);
        truth_in[e.dst].insert(e.label);
    }

    for (ModeId mu : truth.modes) {
        const std::string& want_alpha = truth.alpha_of(mu);
        for (const std::string& li : truth_in[mu]) {
            for (const std::string& lo : truth_out[mu]) {
                bool found = false;
                for (ModeId m : built.modes) {
                    if (!want_alpha.empty() && built.alpha_of(m) != want_alpha)
                        continue;
                    auto in_it = built_in.find(m);
                    auto out_it = built_out.find(m);
                    if (in_it != built_in.end() && in_it->second.count(li) &&
                        out_it != built_out.end() && out_it->second.count(lo)) {
                        found = true;
                        break;
                    }
                }
                if (!found)
                    return false;
            }
        }
    }
    return true;
}

namespace {

// Data for realizing extremal traces on an acyclic automaton: per mode and
// dimension, the least/greatest state value attainable on exit (after the
// mode's delay), with the in-edge and per-step choices that attain it.
struct ExtremeDp {
    const HybridAutomaton& a;
    const WalkDelays& delays;
    Adjacency adj;
    std::vector<ModeId> topo;  // reachable modes, init first

    // per-step contribution bounds delta*f for delta in the range, f in flow
    std::map<ModeId, Eigen::ArrayXd> cmin, cmax;
    std::map<ModeId, Eigen::ArrayXd> arr_min, arr_max;    // value on entry
    std::map<ModeId, Eigen::ArrayXd> exit_min, exit_max;  // value after the delay
    std::map<ModeId, std::vector<const Edge*>> pred_min, pred_max;  // per dimension

    ExtremeDp(const HybridAutomaton& aut, const WalkDelays& d) : a(aut), delays(d), adj(aut) {
        toposort();
        run();
    }

    void toposort() {
        // Kahn over the reachable part; a leftover mode means a cycle.
        std::set<ModeId> reachable{a.init_mode};
        std::deque<ModeId> queue{a.init_mode};
        while (!queue.empty()) {
            ModeId m = queue.front();
            queue.pop_front();
            for (const Edge* e : adj.out(m))
                if (reachable.insert(e->dst).second)
                    queue.push_back(e->dst);
        }
        if (reachable.size() != a.modes.size())
            throw input_error("perfect_trace_set: automaton has unreachable modes");

        std::map<ModeId, std::size_t> pending;
        for (const Edge& e : a.edges)
            ++pending[e.dst];
        std::deque<ModeId> ready;
        for (ModeId m : a.modes)
            if (!pending.count(m))
                ready.push_back(m);
        while (!ready.empty()) {
            ModeId m = ready.front();
            ready.pop_front();
            topo.push_back(m);
            for (const Edge* e : adj.out(m))
                if (--pending.at(e->dst) == 0)
                    ready.push_back(e->dst);
        }
        if (topo.size() != a.modes.size())
            throw unsupported_error("perfect_trace_set: automaton is cyclic");
    }

    void run() {
        for (ModeId m : a.modes) {
            const Rect& f = a.flow.at(m);
            if (!f.is_bounded())
                throw input_error("perfect_trace_set: unbounded flow in mode " +
                                  std::to_string(m));
            Eigen::ArrayXd lo = f.lo(), hi = f.hi();
            cmin.emplace(m, (lo >= 0).select(delays.delay_min * lo, delays.delay_max * lo));
            cmax.emplace(m, (hi >= 0).select(delays.delay_max * hi, delays.delay_min * hi));
        }
        Eigen::Index n = a.dim;
        for (ModeId m : topo) {
            Eigen::ArrayXd amin(n), amax(n);
            std::vector<const Edge*> pmin(n, nullptr), pmax(n, nullptr);
            if (m == a.init_mode) {
                amin = a.init_x.array();
                amax = a.init_x.array();
            } else {
                amin = Eigen::ArrayXd::Constant(n, kInf);
                amax = Eigen::ArrayXd::Constant(n, -kInf);
                for (const Edge* e : adj.in(m)) {
                    const Eigen::ArrayXd& emin = exit_min.at(e->src);
                    const Eigen::ArrayXd& emax = exit_max.at(e->src);
                    for (Eigen::Index d = 0; d < n; ++d) {
                        if (emin[d] < amin[d]) {
                            amin[d] = emin[d];
                            pmin[d] = e;
                        }
                        if (emax[d] > amax[d]) {
                            amax[d] = emax[d];
                            pmax[d] = e;
                        }
                    }
                }
            }
            exit_min.emplace(m, amin + cmin.at(m));
            exit_max.emplace(m, amax + cmax.at(m));
            arr_min.emplace(m, std::move(amin));
            arr_max.emplace(m, std::move(amax));
            pred_min.emplace(m, std::move(pmin));
            pred_max.emplace(m, std::move(pmax));
        }
    }

    // per-step choice attaining the extremal contribution of mode m in dim d
    std::pair<double, double> extreme_choice(ModeId m, Eigen::Index d, bool maximize) const {
        const Rect& f = a.flow.at(m);
        if (maximize) {
            double hi = f.hi()[d];
            return {hi >= 0 ? delays.delay_max : delays.delay_min, hi};
        }
        double lo = f.lo()[d];
        return {lo >= 0 ? delays.delay_min : delays.delay_max, lo};
    }

    // in-edge path init -> m following the extremal predecessors for (d, dir)
    std::vector<const Edge*> extreme_path(ModeId m, Eigen::Index d, bool maximize) const {
        std::vector<const Edge*> path;
        while (m != a.init_mode) {
            const Edge* e = (maximize ? pred_max : pred_min).at(m)[d];
            path.push_back(e);
            m = e->src;
        }
        std::reverse(path.begin(), path.end());
        return path;
    }
};

// Assembles a valid omniscient trace along `path`, where per-step delay and
// flow choices come from `choose(mode, step_index)`; the trace ends with one
// delay in the final mode.
template <typename Choose>
OmniscientTrace assemble(const HybridAutomaton& a, const std::vector<const Edge*>& path,
                         Choose&& choose) {
    OmniscientTrace t;
    t.x0 = a.init_x;
    Vec x = a.init_x;
    ModeId mode = a.init_mode;
    for (std::size_t i = 0; i <= path.size(); ++i) {
        auto [delay, rate] = choose(mode, i);
        TraceStep s;
        if (i > 0)
            s.label = path[i - 1]->label;
        s.delay = delay;
        s.x = x + delay * rate;
        x = s.x;
        t.steps.push_back(std::move(s));
        if (i < path.size()) {
            t.edges.push_back(*path[i]);
            mode = path[i]->dst;
        }
    }
    return t;
}

} // namespace

std::vector<OmniscientTrace> perfect_trace_set(const HybridAutomaton& a,
                                               const WalkDelays& delays) {
    ExtremeDp dp(a, delays);
    Eigen::Index n = a.dim;

    // BFS parents give the nominal path to each mode
    std::map<ModeId, const Edge*> parent;
    {
        std::deque<ModeId> queue{a.init_mode};
        std::set<ModeId> seen{a.init_mode};
        while (!queue.empty()) {
            ModeId m = queue.front();
            queue.pop_front();
            for (const Edge* e : dp.adj.out(m))
                if (seen.insert(e->dst).second) {
                    parent.emplace(e->dst, e);
                    queue.push_back(e->dst);
                }
        }
    }
    auto nominal_path = [&](ModeId m) {
        std::vector<const Edge*> path;
        while (m != a.init_mode) {
            const Edge* e = parent.at(m);
            path.push_back(e);
            m = e->src;
        }
        std::reverse(path.begin(), path.end());
        return path;
    };
    auto nominal_choice = [&](ModeId m) -> std::pair<double, Vec> {
        const Rect& f = a.flow.at(m);
        return {delays.delay_min, Vec((f.lo() + f.hi()) / 2.0)};
    };
    // extremal choice in dimension d, nominal in the others
    auto mixed_choice = [&](ModeId m, Eigen::Index d, bool maximize) -> std::pair<double, Vec> {
        auto [delay, fd] = dp.extreme_choice(m, d, maximize);
        const Rect& f = a.flow.at(m);
        Vec rate = (f.lo() + f.hi()) / 2.0;
        rate[d] = fd;
        return {delay, rate};
    };

    std::vector<OmniscientTrace> out;

    // one covering trace per edge
    for (const Edge& e : a.edges) {
        std::vector<const Edge*> path = nominal_path(e.src);
        path.push_back(&e);
        out.push_back(assemble(a, path, [&](ModeId m, std::size_t) { return nominal_choice(m); }));
    }

    // per mode and dimension: extremal flow (2), extremal exit value (2),
    // and one nominal trace
    for (ModeId m : a.modes) {
        std::vector<const Edge*> nom = nominal_path(m);
        for (Eigen::Index d = 0; d < n; ++d) {
            for (bool maximize : {false, true}) {
                // flow extreme: nominal approach, extremal final delay
                out.push_back(assemble(a, nom, [&](ModeId mm, std::size_t i) {
                    return i == nom.size() ? mixed_choice(mm, d, maximize) : nominal_choice(mm);
                }));
                // exit-value extreme: extremal choices along the extremal path
                std::vector<const Edge*> path = dp.extreme_path(m, d, maximize);
                out.push_back(assemble(a, path, [&](ModeId mm, std::size_t) {
                    return mixed_choice(mm, d, maximize);
                }));
            }
            out.push_back(
                assemble(a, nom, [&](ModeId mm, std::size_t) { return nominal_choice(mm); }));
        }
    }

    // per mode, outgoing edge, and dimension: one trace maximizing the
    // pre-transition value (minima are realized by the exit-minimal traces of
    // the downstream modes)
    for (const Edge& e : a.edges) {
        for (Eigen::Index d = 0; d < n; ++d) {
            std::vector<const Edge*> path = dp.extreme_path(e.src, d, true);
            path.push_back(&e);
            out.push_back(assemble(a, path, [&](ModeId mm, std::size_t i) {
                return i < path.size() ? mixed_choice(mm, d, true) : nominal_choice(mm);
            }));
        }
    }

    for (std::size_t i = 0; i < out.size(); ++i) {
        ValidationResult v = validate_omniscient(a, out[i]);
        if (!v)
            throw unsupported_error(
                "perfect_trace_set: guards are too restrictive to realize trace " +
                std::to_string(i) + " (" + v.reason() + ")");
    }
    return out;
}

ConservativeReport conservative_check(const HybridAutomaton& built,
                                      const HybridAutomaton& reference, std::size_t samples,
                                      std::uint64_t seed, std::size_t max_steps, unsigned jobs) {
    ConservativeReport rep;
    rep.samples = samples;
    rep.seed = seed;
    if (samples == 0)
        return rep;

    if (jobs == 0)
        jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, samples));

    Acceptor accept(built);
    std::vector<std::uint8_t> rejected_flags(samples, 0);
    std::vector<std::optional<OmniscientTrace>> walks(samples);

    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            OmniscientTrace walk = random_walk(reference, max_steps, seed + i);
            if (!accept(observe(walk))) {
                rejected_flags[i] = 1;
                walks[i] = std::move(walk);
            }
        }
    };

    if (jobs == 1) {
        worker(0, samples);
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (samples + jobs - 1) / jobs;
        for (unsigned j = 0; j < jobs; ++j) {
            std::size_t begin = j * chunk;
            std::size_t end = std::min(samples, begin + chunk);
            if (begin < end)
                pool.emplace_back(worker, begin, end);
        }
        for (std::thread& t : pool)
            t.join();
    }

    for (std::size_t i = 0; i < samples; ++i)
        if (rejected_flags[i])
            rep.rejected.push_back({i, std::move(*walks[i])});
    return rep;
}

} // namespace chac
