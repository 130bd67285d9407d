#include "chac/traces.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace chac {

ObservableTrace observe(const OmniscientTrace& t) {
    return ObservableTrace{t.x0, t.steps};
}

const char* ValidationResult::reason() const {
    switch (defect) {
        case TraceDefect::none: return "ok";
        case TraceDefect::bad_init: return "bad-init";
        case TraceDefect::bad_chain: return "bad-chain";
        case TraceDefect::guard: return "guard";
        case TraceDefect::flow: return "flow";
    }
    return "?";
}

ValidationResult validate_omniscient(const HybridAutomaton& a, const OmniscientTrace& t) {
    if (t.x0.size() != a.dim)
        throw input_error("validate_omniscient: trace dimension mismatch");
    if (t.steps.empty() ? !t.edges.empty() : t.edges.size() + 1 != t.steps.size())
        throw input_error("validate_omniscient: annotation count mismatch");

    if (t.x0 != a.init_x)
        return {TraceDefect::bad_init, 0};

    // edge chain: starts at the initial mode, consecutive edges connect,
    // every edge exists in the automaton
    for (std::size_t i = 0; i < t.edges.size(); ++i) {
        const Edge& e = t.edges[i];
        ModeId expected_src = i == 0 ? a.init_mode : t.edges[i - 1].dst;
        if (e.src != expected_src || !a.edges.count(e))
            return {TraceDefect::bad_chain, i + 1};
    }

    const Vec* x = &t.x0;
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
        ModeId m = t.mode_during(i, a.init_mode);
        const TraceStep& s = t.steps[i];
        if (!contains_point(scale_translate(a.flow.at(m), *x, s.delay), s.x))
            return {TraceDefect::flow, i};
        if (i + 1 < t.steps.size()) {
            // the next edge fires at s.x
            if (!contains_point(a.guard.at(t.edges[i]), s.x))
                return {TraceDefect::guard, i + 1};
        }
        x = &s.x;
    }
    return {};
}

namespace {

struct SearchCtx {
    const HybridAutomaton& a;
    const Adjacency& adj;
    const ObservableTrace& t;
    double eps;
    std::set<std::pair<std::size_t, ModeId>> failed;
    std::vector<Edge> path;

    bool delay_ok(ModeId m, const Vec& from, double delay, const Vec& to) const {
        return contains_point(inflate(scale_translate(a.flow.at(m), from, delay), eps), to);
    }

    // search from delay index i residing in mode m, with state x reached
    bool dfs(std::size_t i, ModeId m, const Vec& x) {
        if (failed.count({i, m}))
            return false;
        const TraceStep& s = t.steps[i];
        if (!delay_ok(m, x, s.delay, s.x)) {
            failed.emplace(i, m);
            return false;
        }
        if (i + 1 == t.steps.size())
            return true;
        const std::string& label = *t.steps[i + 1].label;
        // adj.out is in (label, dst) order already, keeping witnesses deterministic
        std::vector<const Edge*> cands;
        for (const Edge* e : adj.out(m))
            if (e->label == label && contains_point(inflate(a.guard.at(*e), eps), s.x))
                cands.push_back(e);
        for (const Edge* e : cands) {
            path.push_back(*e);
            if (dfs(i + 1, e->dst, s.x))
                return true;
            path.pop_back();
        }
        failed.emplace(i, m);
        return false;
    }
};

} // namespace

Acceptor::Acceptor(const HybridAutomaton& a, double eps) : aut_(a), adj_(a), eps_(eps) {}

std::optional<Witness> Acceptor::operator()(const ObservableTrace& t) const {
    if (t.x0.size() != aut_.dim)
        throw input_error("accepts: trace dimension mismatch");
    if (t.x0 != aut_.init_x)
        return std::nullopt;
    if (t.steps.empty())
        return Witness{t.x0, {}, {}};
    if (t.steps[0].label)
        throw input_error("accepts: first step must be unlabeled");
    for (std::size_t i = 1; i < t.steps.size(); ++i)
        if (!t.steps[i].label)
            throw input_error("accepts: unlabeled step after the first");

    SearchCtx ctx{aut_, adj_, t, eps_, {}, {}};
    if (!ctx.dfs(0, aut_.init_mode, t.x0))
        return std::nullopt;
    return Witness{t.x0, t.steps, std::move(ctx.path)};
}

std::optional<Witness> accepts(const HybridAutomaton& a, const ObservableTrace& t, double eps) {
    return Acceptor(a, eps)(t);
}

std::size_t traverses(const OmniscientTrace& t, ModeId m) {
    std::size_t count = 0;
    for (std::size_t i = 0; i + 1 < t.edges.size(); ++i)
        if (t.edges[i].dst == m && t.edges[i + 1].src == m)
            ++count;
    return count;
}

OmniscientTrace random_walk(const HybridAutomaton& a, std::size_t max_steps, std::uint64_t seed,
                            const WalkDelays& delays) {
    if (max_steps < 1)
        throw input_error("random_walk: max_steps must be at least 1");
    if (delays.delay_min < 0 || delays.delay_max < delays.delay_min)
        throw input_error("random_walk: bad delay range");

    Adjacency adj(a);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> delay_dist(delays.delay_min, delays.delay_max);

    OmniscientTrace t;
    t.x0 = a.init_x;
    ModeId mode = a.init_mode;
    Vec x = a.init_x;

    for (std::size_t step = 0; step < max_steps; ++step) {
        const Rect& f = a.flow.at(mode);
        if (!f.is_bounded())
            throw input_error("random_walk: unbounded flow component in mode " +
                              std::to_string(mode));
        Vec rate(a.dim);
        for (Eigen::Index d = 0; d < a.dim; ++d) {
            std::uniform_real_distribution<double> fd(f.lo()[d], f.hi()[d]);
            rate[d] = f.at(d).singular() ? f.lo()[d] : fd(rng);
        }
        double delay = delay_dist(rng);
        Vec next = x + delay * rate;

        TraceStep s;
        if (!t.edges.empty())  // label of the edge that opened this step
            s.label = t.edges.back().label;
        s.delay = delay;
        s.x = next;
        t.steps.push_back(std::move(s));
        x = std::move(next);

        if (step + 1 == max_steps)
            break;
        std::vector<const Edge*> enabled;
        for (const Edge* e : adj.out(mode))
            if (contains_point(a.guard.at(*e), x))
                enabled.push_back(e);
        if (enabled.empty())
            break;
        std::uniform_int_distribution<std::size_t> pick(0, enabled.size() - 1);
        const Edge* e = enabled[pick(rng)];
        t.edges.push_back(*e);
        mode = e->dst;
    }
    return t;
}

} // namespace chac
