#include "chac/spec.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace chac {

bool SpecModel::has_state(const std::string& name) const {
    return std::find(states.begin(), states.end(), name) != states.end();
}

const SpecModel::Trigger* SpecModel::find_trigger(const std::string& state,
                                                  const std::string& label) const {
    for (const Trigger& t : triggers)
        if (t.src == state && t.label == label)
            return &t;
    return nullptr;
}

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
    throw input_error("spec:" + std::to_string(line) + ": " + msg);
}

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) {
        if (tok[0] == '#')
            break;
        toks.push_back(tok);
    }
    return toks;
}

double parse_number(const std::string& tok, int line) {
    try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size())
            fail(line, "malformed number '" + tok + "'");
        return v;
    } catch (const std::logic_error&) {
        fail(line, "malformed number '" + tok + "'");
    }
}

// atom: x<i> (<=|>=|=) <number>; tightens one bound of the rectangle
void apply_atom(Eigen::ArrayXd& lo, Eigen::ArrayXd& hi, const std::string& var,
                const std::string& op, const std::string& num, Eigen::Index dim, int line) {
    if (var.size() < 2 || var[0] != 'x')
        fail(line, "expected variable of the form x<i>, got '" + var + "'");
    Eigen::Index idx = 0;
    auto [p, ec] = std::from_chars(var.data() + 1, var.data() + var.size(), idx);
    if (ec != std::errc() || p != var.data() + var.size())
        fail(line, "malformed variable '" + var + "'");
    if (idx < 0 || idx >= dim)
        fail(line, "variable x" + std::to_string(idx) + " exceeds dimension " +
                       std::to_string(dim));
    double c = parse_number(num, line);
    if (op == "<=") {
        hi[idx] = std::min(hi[idx], c);
    } else if (op == ">=") {
        lo[idx] = std::max(lo[idx], c);
    } else if (op == "=") {
        lo[idx] = std::max(lo[idx], c);
        hi[idx] = std::min(hi[idx], c);
    } else {
        fail(line, "expected <=, >= or =, got '" + op + "'");
    }
    if (lo[idx] > hi[idx])
        fail(line, "contradictory bounds on x" + std::to_string(idx));
}

} // namespace

SpecModel parse_spec(const std::string& text, std::optional<Eigen::Index> expect_dim) {
    std::optional<Eigen::Index> dim;
    std::vector<std::string> states;
    std::optional<std::string> init;
    struct RawTrigger {
        std::string src, label, dst;
        std::vector<std::string> cond;  // tokens after 'when'
        int line;
    };
    std::vector<RawTrigger> raw;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::vector<std::string> toks = tokenize(line);
        if (toks.empty())
            continue;
        const std::string& kw = toks[0];
        if (kw == "dim") {
            if (toks.size() != 2)
                fail(lineno, "expected 'dim <n>'");
            if (dim)
                fail(lineno, "duplicate dim declaration");
            double v = parse_number(toks[1], lineno);
            if (v < 1 || v != static_cast<Eigen::Index>(v))
                fail(lineno, "dimension must be a positive integer");
            dim = static_cast<Eigen::Index>(v);
        } else if (kw == "states") {
            if (toks.size() < 2)
                fail(lineno, "expected 'states <name>+'");
            for (std::size_t i = 1; i < toks.size(); ++i) {
                if (std::find(states.begin(), states.end(), toks[i]) != states.end())
                    fail(lineno, "state '" + toks[i] + "' declared twice");
                states.push_back(toks[i]);
            }
        } else if (kw == "init") {
            if (toks.size() != 2)
                fail(lineno, "expected 'init <name>'");
            if (init)
                fail(lineno, "duplicate init declaration");
            init = toks[1];
        } else if (kw == "trigger") {
            // trigger <src> -> <dst> on <label> when <atom> (and <atom>)*
            if (toks.size() < 8 || toks[2] != "->" || toks[4] != "on" || toks[6] != "when")
                fail(lineno, "expected 'trigger <src> -> <dst> on <label> when ...'");
            RawTrigger t{toks[1], toks[5], toks[3],
                         std::vector<std::string>(toks.begin() + 7, toks.end()), lineno};
            raw.push_back(std::move(t));
        } else {
            fail(lineno, "unknown directive '" + kw + "'");
        }
    }

    if (!dim)
        throw input_error("spec: missing 'dim' declaration");
    if (expect_dim && *dim != *expect_dim)
        throw input_error("spec: declared dim " + std::to_string(*dim) +
                          " does not match expected " + std::to_string(*expect_dim));
    if (states.empty())
        throw input_error("spec: missing 'states' declaration");
    if (!init)
        throw input_error("spec: missing 'init' declaration");
    if (std::find(states.begin(), states.end(), *init) == states.end())
        throw input_error("spec: initial state '" + *init + "' is not declared");

    SpecModel model;
    model.dim = *dim;
    model.init = *init;

    std::set<std::pair<std::string, std::string>> seen;
    std::vector<SpecModel::Trigger> triggers;
    for (const RawTrigger& t : raw) {
        auto known = [&](const std::string& s) {
            return std::find(states.begin(), states.end(), s) != states.end();
        };
        if (!known(t.src))
            fail(t.line, "undeclared state '" + t.src + "'");
        if (!known(t.dst))
            fail(t.line, "undeclared state '" + t.dst + "'");
        if (!seen.emplace(t.src, t.label).second)
            fail(t.line, "duplicate trigger for (" + t.src + ", " + t.label +
                             "); specs must be deterministic per label");

        Eigen::ArrayXd lo = Eigen::ArrayXd::Constant(*dim, -kInf);
        Eigen::ArrayXd hi = Eigen::ArrayXd::Constant(*dim, kInf);
        if (t.cond.size() == 1 && t.cond[0] == "true") {
            // vacuous condition
        } else {
            // <atom> (and <atom>)*, each atom three tokens
            std::size_t i = 0;
            while (i < t.cond.size()) {
                if (i + 3 > t.cond.size())
                    fail(t.line, "truncated condition");
                apply_atom(lo, hi, t.cond[i], t.cond[i + 1], t.cond[i + 2], *dim, t.line);
                i += 3;
                if (i < t.cond.size()) {
                    if (t.cond[i] != "and")
                        fail(t.line, "expected 'and' between atoms");
                    ++i;
                    if (i == t.cond.size())
                        fail(t.line, "dangling 'and'");
                }
            }
        }
        triggers.push_back({t.src, t.label, t.dst, Rect(std::move(lo), std::move(hi))});
    }

    // prune states unreachable from init, and their triggers
    std::set<std::string> reachable{model.init};
    std::deque<std::string> queue{model.init};
    while (!queue.empty()) {
        std::string s = queue.front();
        queue.pop_front();
        for (const auto& t : triggers)
            if (t.src == s && reachable.insert(t.dst).second)
                queue.push_back(t.dst);
    }
    for (const std::string& s : states)
        if (reachable.count(s))
            model.states.push_back(s);
    for (auto& t : triggers)
        if (reachable.count(t.src))
            model.triggers.push_back(std::move(t));

    return model;
}

std::string dump_spec(const SpecModel& s) {
    std::ostringstream out;
    out << "dim " << s.dim << "\n";
    out << "states";
    for (const std::string& st : s.states)
        out << ' ' << st;
    out << "\ninit " << s.init << "\n";
    for (const SpecModel::Trigger& t : s.triggers) {
        out << "trigger " << t.src << " -> " << t.dst << " on " << t.label << " when ";
        bool any = false;
        for (Eigen::Index d = 0; d < t.guard.dim(); ++d) {
            Interval iv = t.guard.at(d);
            auto emit = [&](const char* op, double c) {
                if (any)
                    out << " and ";
                std::ostringstream num;
                num.precision(17);
                num << c;
                out << 'x' << d << ' ' << op << ' ' << num.str();
                any = true;
            };
            if (iv.singular()) {
                emit("=", iv.lo);
            } else {
                if (iv.lo != -kInf)
                    emit(">=", iv.lo);
                if (iv.hi != kInf)
                    emit("<=", iv.hi);
            }
        }
        if (!any)
            out << "true";
        out << "\n";
    }
    return out.str();
}

const SpecModel::Trigger* monitor_fires(const SpecModel& s, const std::string& state,
                                        const std::string& label, const Vec& x) {
    const SpecModel::Trigger* t = s.find_trigger(state, label);
    if (t && contains_point(t->guard, x))
        return t;
    return nullptr;
}

Rect guard_lookup(const SpecModel& s, const std::string& src, const std::string& label,
                  const std::string& dst, Eigen::Index n) {
    if (src != dst) {
        for (const SpecModel::Trigger& t : s.triggers)
            if (t.src == src && t.label == label && t.dst == dst)
                return t.guard;
    }
    return Rect::full(n);
}

HybridAutomaton spec_to_automaton(const SpecModel& s) {
    HybridAutomaton a;
    a.dim = s.dim;
    a.init_x = Vec::Zero(s.dim);
    std::map<std::string, ModeId> id;
    for (const std::string& st : s.states) {
        ModeId m = static_cast<ModeId>(id.size());
        id.emplace(st, m);
        a.modes.insert(m);
        a.flow.emplace(m, Rect::singular(Vec::Zero(s.dim)));
        a.alpha.emplace(m, st);
    }
    a.init_mode = id.at(s.init);
    for (const SpecModel::Trigger& t : s.triggers) {
        Edge e{id.at(t.src), t.label, id.at(t.dst)};
        a.edges.insert(e);
        a.guard.emplace(std::move(e), Rect::full(s.dim));
    }
    return a;
}

} // namespace chac
