#include "chac/io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace chac {

using nlohmann::json;

namespace {

json bound_to_json(double v) {
    if (v == kInf)
        return "inf";
    if (v == -kInf)
        return "-inf";
    return v;
}

double bound_from_json(const json& j) {
    if (j.is_string()) {
        const std::string& s = j.get_ref<const std::string&>();
        if (s == "inf")
            return kInf;
        if (s == "-inf")
            return -kInf;
        throw input_error("bad interval bound '" + s + "'");
    }
    if (!j.is_number())
        throw input_error("interval bound must be a number or \"inf\"/\"-inf\"");
    return j.get<double>();
}

json vec_to_json(const Vec& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(v[i]);
    return out;
}

Vec vec_from_json(const json& j, Eigen::Index expect_dim, const char* what) {
    if (!j.is_array())
        throw input_error(std::string(what) + " must be an array");
    if (expect_dim >= 0 && static_cast<Eigen::Index>(j.size()) != expect_dim)
        throw input_error(std::string(what) + " has wrong dimension");
    Vec v(j.size());
    Eigen::Index i = 0;
    for (const json& c : j) {
        if (!c.is_number())
            throw input_error(std::string(what) + " must contain numbers");
        v[i++] = c.get<double>();
    }
    return v;
}

} // namespace

json rect_to_json(const Rect& r) {
    json out = json::array();
    for (Eigen::Index d = 0; d < r.dim(); ++d)
        out.push_back(json::array({bound_to_json(r.lo()[d]), bound_to_json(r.hi()[d])}));
    return out;
}

Rect rect_from_json(const json& j) {
    if (!j.is_array() || j.empty())
        throw input_error("rectangle must be a nonempty array of [lo, hi] pairs");
    Eigen::ArrayXd lo(j.size());
    Eigen::ArrayXd hi(j.size());
    Eigen::Index d = 0;
    for (const json& pair : j) {
        if (!pair.is_array() || pair.size() != 2)
            throw input_error("rectangle component must be a [lo, hi] pair");
        lo[d] = bound_from_json(pair[0]);
        hi[d] = bound_from_json(pair[1]);
        ++d;
    }
    return Rect(std::move(lo), std::move(hi));
}

json automaton_to_json(const HybridAutomaton& a) {
    json modes = json::array();
    for (ModeId m : a.modes) {
        json jm{{"id", m}, {"flow", rect_to_json(a.flow.at(m))}};
        auto al = a.alpha.find(m);
        if (al != a.alpha.end())
            jm["alpha"] = al->second;
        modes.push_back(std::move(jm));
    }
    json edges = json::array();
    for (const Edge& e : a.edges)
        edges.push_back({{"src", e.src},
                         {"label", e.label},
                         {"dst", e.dst},
                         {"guard", rect_to_json(a.guard.at(e))}});
    return json{{"dim", a.dim},
                {"modes", std::move(modes)},
                {"edges", std::move(edges)},
                {"init", json{{"mode", a.init_mode}, {"x", vec_to_json(a.init_x)}}}};
}

HybridAutomaton automaton_from_json(const json& j) {
    if (!j.is_object())
        throw input_error("automaton file must be a JSON object");
    HybridAutomaton a;
    a.dim = j.at("dim").get<Eigen::Index>();
    if (a.dim < 1)
        throw input_error("automaton dimension must be at least 1");
    for (const json& jm : j.at("modes")) {
        ModeId m = jm.at("id").get<ModeId>();
        if (!a.modes.insert(m).second)
            throw input_error("duplicate mode id " + std::to_string(m));
        Rect flow = rect_from_json(jm.at("flow"));
        if (flow.dim() != a.dim)
            throw input_error("flow of mode " + std::to_string(m) + " has wrong dimension");
        a.flow.emplace(m, std::move(flow));
        if (jm.contains("alpha"))
            a.alpha.emplace(m, jm.at("alpha").get<std::string>());
    }
    for (const json& je : j.at("edges")) {
        Edge e{je.at("src").get<ModeId>(), je.at("label").get<std::string>(),
               je.at("dst").get<ModeId>()};
        Rect guard = rect_from_json(je.at("guard"));
        if (guard.dim() != a.dim)
            throw input_error("edge guard has wrong dimension");
        if (!a.edges.insert(e).second)
            throw input_error("duplicate edge");
        a.guard.emplace(std::move(e), std::move(guard));
    }
    const json& init = j.at("init");
    a.init_mode = init.at("mode").get<ModeId>();
    a.init_x = vec_from_json(init.at("x"), a.dim, "initial state");
    try {
        a.check();
    } catch (const invariant_error& e) {
        throw input_error(e.what());
    }
    return a;
}

namespace {

json steps_to_json(const std::vector<TraceStep>& steps, const std::vector<Edge>* edges) {
    json out = json::array();
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const TraceStep& s = steps[i];
        json js{{"label", s.label ? json(*s.label) : json(nullptr)},
                {"delay", s.delay},
                {"x", vec_to_json(s.x)}};
        if (edges && i > 0)
            js["edge"] = {{"src", (*edges)[i - 1].src}, {"dst", (*edges)[i - 1].dst}};
        out.push_back(std::move(js));
    }
    return out;
}

} // namespace

json traces_to_json(Eigen::Index dim, const std::vector<ObservableTrace>& ts) {
    json traces = json::array();
    for (const ObservableTrace& t : ts)
        traces.push_back({{"x0", vec_to_json(t.x0)}, {"steps", steps_to_json(t.steps, nullptr)}});
    return json{{"dim", dim}, {"traces", std::move(traces)}};
}

json traces_to_json(Eigen::Index dim, const std::vector<OmniscientTrace>& ts) {
    json traces = json::array();
    for (const OmniscientTrace& t : ts)
        traces.push_back({{"x0", vec_to_json(t.x0)}, {"steps", steps_to_json(t.steps, &t.edges)}});
    return json{{"dim", dim}, {"traces", std::move(traces)}};
}

LoadedTraces traces_from_json(const json& j) {
    if (!j.is_object())
        throw input_error("trace file must be a JSON object");
    LoadedTraces out;
    out.dim = j.at("dim").get<Eigen::Index>();
    if (out.dim < 1)
        throw input_error("trace dimension must be at least 1");

    std::vector<OmniscientTrace> omniscient;
    bool all_annotated = true;
    bool any_annotated = false;

    for (const json& jt : j.at("traces")) {
        OmniscientTrace t;
        t.x0 = vec_from_json(jt.at("x0"), out.dim, "x0");
        std::size_t i = 0;
        for (const json& js : jt.at("steps")) {
            TraceStep s;
            if (js.contains("label") && !js.at("label").is_null())
                s.label = js.at("label").get<std::string>();
            if (i == 0 && s.label)
                throw input_error("first step of a trace must be unlabeled");
            if (i > 0 && !s.label)
                throw input_error("steps after the first must be labeled");
            s.delay = js.at("delay").get<double>();
            if (!(s.delay > 0))
                throw input_error("delays must be positive");
            s.x = vec_from_json(js.at("x"), out.dim, "step state");
            if (i > 0) {
                if (js.contains("edge")) {
                    const json& je = js.at("edge");
                    t.edges.push_back(
                        Edge{je.at("src").get<ModeId>(), *s.label, je.at("dst").get<ModeId>()});
                    any_annotated = true;
                } else {
                    all_annotated = false;
                }
            }
            t.steps.push_back(std::move(s));
            ++i;
        }
        if (t.steps.empty())
            throw input_error("trace without steps");
        for (std::size_t e = 0; e + 1 < t.edges.size(); ++e)
            if (t.edges[e].dst != t.edges[e + 1].src)
                throw input_error("omniscient edge annotations do not chain");
        omniscient.push_back(std::move(t));
    }
    if (any_annotated && !all_annotated)
        throw input_error("trace file mixes omniscient and observable traces");

    for (const OmniscientTrace& t : omniscient)
        out.observable.push_back(observe(t));
    // a file whose every labeled step is annotated is omniscient, vacuously
    // so when the traces are delay-only
    if (all_annotated)
        out.omniscient = std::move(omniscient);
    return out;
}

namespace {

std::string rect_text(const Rect& r) {
    std::ostringstream out;
    out.precision(12);
    for (Eigen::Index d = 0; d < r.dim(); ++d) {
        if (d)
            out << "x";
        Interval iv = r.at(d);
        out << "[" << iv.lo << "," << iv.hi << "]";
    }
    return out.str();
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out;
}

} // namespace

std::string dot_export(const HybridAutomaton& a) {
    // stable color per alpha tag, by sorted order
    static const char* palette[] = {"#a6cee3", "#b2df8a", "#fb9a99", "#fdbf6f", "#cab2d6",
                                    "#ffff99", "#1f78b4", "#33a02c", "#e31a1c", "#ff7f00"};
    std::map<std::string, const char*> color;
    for (const auto& [m, al] : a.alpha)
        if (!color.count(al))
            color.emplace(al, palette[color.size() % 10]);

    std::ostringstream out;
    out << "digraph chac {\n";
    out << "  rankdir=TB;\n  node [shape=box, style=filled, fillcolor=white];\n";
    for (ModeId m : a.modes) {
        out << "  m" << m << " [label=\"m" << m << "\\n flow=" << rect_text(a.flow.at(m)) << "\"";
        auto al = a.alpha.find(m);
        if (al != a.alpha.end())
            out << ", fillcolor=\"" << color.at(al->second) << "\"";
        if (m == a.init_mode)
            out << ", penwidth=2";
        out << "];\n";
    }
    for (const Edge& e : a.edges) {
        out << "  m" << e.src << " -> m" << e.dst << " [label=\"" << dot_escape(e.label)
            << "\\n g=" << rect_text(a.guard.at(e)) << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw input_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw input_error("cannot write '" + path + "'");
    out << content;
    if (!out)
        throw input_error("write to '" + path + "' failed");
}

namespace {

json parse_json_file(const std::string& path) {
    try {
        return json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw input_error(path + ": " + e.what());
    }
}

} // namespace

HybridAutomaton load_automaton(const std::string& path) {
    try {
        return automaton_from_json(parse_json_file(path));
    } catch (const json::exception& e) {
        throw input_error(path + ": " + e.what());
    }
}

void save_automaton(const std::string& path, const HybridAutomaton& a) {
    write_text_file(path, automaton_to_json(a).dump(2) + "\n");
}

LoadedTraces load_traces(const std::string& path) {
    try {
        return traces_from_json(parse_json_file(path));
    } catch (const json::exception& e) {
        throw input_error(path + ": " + e.what());
    }
}

SpecModel load_spec(const std::string& path, std::optional<Eigen::Index> expect_dim) {
    return parse_spec(read_text_file(path), expect_dim);
}

} // namespace chac
