#include "chac/construct.hpp"

#include <algorithm>

namespace chac {

Rect solve(const Vec& x, const Vec& x2, double delta) {
    if (x.size() != x2.size())
        throw input_error("solve: dimension mismatch");
    if (delta <= 0)
        throw input_error("solve: delay must be positive");
    return Rect::singular((x2 - x) / delta);
}

ConstructionState init_construction(const std::vector<ObservableTrace>& traces,
                                    const SpecModel& spec) {
    if (traces.empty())
        throw input_error("construction: empty trace set");
    const Vec& x0 = traces.front().x0;
    std::vector<Rect> first_rates;
    first_rates.reserve(traces.size());
    for (const ObservableTrace& t : traces) {
        if (t.x0.size() != spec.dim)
            throw input_error("construction: trace dimension does not match spec");
        if (t.x0 != x0)
            throw input_error("construction: traces disagree on the initial state");
        if (t.steps.empty())
            throw input_error("construction: trace without steps");
        first_rates.push_back(solve(x0, t.steps[0].x, t.steps[0].delay));
    }

    ConstructionState st;
    st.spec = spec;
    st.k = 1;
    st.aut.dim = spec.dim;
    st.aut.init_mode = 0;
    st.aut.init_x = x0;
    st.aut.modes.insert(0);
    st.aut.flow.emplace(0, box_hull(first_rates));
    st.aut.alpha.emplace(0, spec.init);
    st.mode_map.assign(traces.size(), 0);
    return st;
}

void construction_step(ConstructionState& st, const std::vector<ObservableTrace>& traces) {
    if (traces.size() != st.mode_map.size())
        throw input_error("construction: trace set changed between steps");
    const std::size_t k = st.k;
    ModeId next_id = static_cast<ModeId>(st.aut.modes.size());

    for (std::size_t i = 0; i < traces.size(); ++i) {
        const ObservableTrace& t = traces[i];
        if (t.steps.size() <= k)
            continue;  // exhausted traces freeze
        const TraceStep& step = t.steps[k];
        if (!step.label)
            throw input_error("construction: unlabeled step after the first");
        const Vec& x_pre = t.steps[k - 1].x;

        ModeId src = st.mode_map[i];
        ModeId fresh = next_id++;
        st.aut.modes.insert(fresh);
        st.aut.flow.emplace(fresh, solve(x_pre, step.x, step.delay));

        const std::string& src_alpha = st.aut.alpha.at(src);
        const SpecModel::Trigger* fired = monitor_fires(st.spec, src_alpha, *step.label, x_pre);
        Rect guard = fired ? fired->guard : Rect::full(st.aut.dim);
        st.aut.alpha.emplace(fresh, fired ? fired->dst : src_alpha);

        Edge e{src, *step.label, fresh};
        st.aut.edges.insert(e);
        st.aut.guard.emplace(std::move(e), std::move(guard));
        st.mode_map[i] = fresh;
    }
    ++st.k;
}

ConstructionState run_construction(const std::vector<ObservableTrace>& traces,
                                   const SpecModel& spec) {
    ConstructionState st = init_construction(traces, spec);
    std::size_t longest = 0;
    for (const ObservableTrace& t : traces)
        longest = std::max(longest, t.length());
    for (std::size_t k = 1; k < longest; ++k)
        construction_step(st, traces);
    return st;
}

} // namespace chac
