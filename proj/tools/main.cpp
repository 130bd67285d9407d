// chac — conservative hybrid automata from monitoring specs and traces.
//
// Exit codes: 0 success, 1 a checked property was refuted, 2 input or
// usage error. Diagnostics go to stderr, results to stdout or files.

#include "chac/analysis.hpp"
#include "chac/bench.hpp"
#include "chac/construct.hpp"
#include "chac/io.hpp"
#include "chac/merge.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace chac;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitRefuted = 1;
constexpr int kExitInput = 2;

struct ConstructArgs {
    std::string spec_file;
    std::string traces_file;
    std::string out_file;
    std::string dot_file;
    std::string keep_tree_file;
    std::string explain_file;
    bool fixpoint = false;
};

int cmd_construct(const ConstructArgs& args) {
    LoadedTraces traces = load_traces(args.traces_file);
    SpecModel spec = load_spec(args.spec_file, traces.dim);

    ConstructionState st = run_construction(traces.observable, spec);
    if (!args.keep_tree_file.empty())
        save_automaton(args.keep_tree_file, st.aut);

    MergeOptions opts;
    opts.fixpoint = args.fixpoint;
    std::ofstream explain;
    if (!args.explain_file.empty()) {
        explain.open(args.explain_file);
        if (!explain)
            throw input_error("cannot write '" + args.explain_file + "'");
        opts.explain = &explain;
    }
    HybridAutomaton merged = merge_modes(st.aut, opts);
    save_automaton(args.out_file, merged);
    if (!args.dot_file.empty())
        write_text_file(args.dot_file, dot_export(merged));

    std::cout << "constructed " << merged.modes.size() << " modes, " << merged.edges.size()
              << " edges (pre-merge tree: " << st.aut.modes.size() << " modes)\n";
    return kExitOk;
}

int cmd_simulate(const std::string& model_file, std::size_t steps, std::size_t count,
                 std::uint64_t seed, double delay_min, double delay_max,
                 const std::string& out_file) {
    HybridAutomaton a = load_automaton(model_file);
    WalkDelays delays{delay_min, delay_max};
    std::vector<OmniscientTrace> walks;
    walks.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        walks.push_back(random_walk(a, steps, seed + i, delays));
    json out = traces_to_json(a.dim, walks);
    if (out_file.empty())
        std::cout << out.dump(2) << "\n";
    else
        write_text_file(out_file, out.dump(2) + "\n");
    return kExitOk;
}

int cmd_project(const std::string& model_file, const std::string& traces_file,
                const std::string& out_file) {
    HybridAutomaton a = load_automaton(model_file);
    LoadedTraces traces = load_traces(traces_file);
    if (!traces.omniscient)
        throw input_error("project needs omniscient traces (with edge annotations)");
    HybridAutomaton projection = project(a, *traces.omniscient);
    save_automaton(out_file, projection);
    std::cout << "projected onto " << traces.omniscient->size() << " traces: "
              << projection.modes.size() << " modes, " << projection.edges.size() << " edges\n";
    return kExitOk;
}

void print_adequacy(const AdequacyReport& rep, std::ostream& out) {
    out << "criterion 3 (traversals > a(a-1)/2):\n";
    for (const auto& r : rep.per_mode) {
        out << "  mode " << r.mode << ": a=" << r.a << " needed=" << r.needed
            << " traversals=" << r.traversals << (r.pass ? " PASS" : " FAIL");
        if (!r.traversable)
            out << " (never enterable, structurally untraversable)";
        out << "\n";
    }
    out << "criterion 2 (spec guards permissive enough): "
        << (rep.criterion2_pass ? "PASS" : "FAIL") << "\n";
    for (const auto& v : rep.criterion2_violations)
        out << "  edge (" << v.edge.src << ", " << v.edge.label << ", " << v.edge.dst
            << "): " << v.detail << "\n";
    if (rep.criterion1_bisimilar)
        out << "criterion 1 (abstraction quotient bisimilar to spec): "
            << (*rep.criterion1_bisimilar ? "PASS" : "FAIL") << "\n";
}

json adequacy_to_json(const AdequacyReport& rep) {
    json modes = json::array();
    for (const auto& r : rep.per_mode)
        modes.push_back({{"mode", r.mode},
                         {"indeg", r.indeg},
                         {"outdeg", r.outdeg},
                         {"a", r.a},
                         {"threshold", r.threshold},
                         {"needed", r.needed},
                         {"traversals", r.traversals},
                         {"traversable", r.traversable},
                         {"pass", r.pass}});
    json violations = json::array();
    for (const auto& v : rep.criterion2_violations)
        violations.push_back({{"src", v.edge.src},
                              {"label", v.edge.label},
                              {"dst", v.edge.dst},
                              {"detail", v.detail}});
    json out{{"criterion3", {{"per_mode", std::move(modes)}, {"pass", rep.criterion3_pass}}},
             {"criterion2", {{"violations", std::move(violations)}, {"pass", rep.criterion2_pass}}}};
    if (rep.criterion1_bisimilar)
        out["criterion1"] = {{"bisimilar", *rep.criterion1_bisimilar}};
    return out;
}

int cmd_adequacy(const std::string& model_file, const std::string& traces_file,
                 const std::string& spec_file, const std::string& out_file) {
    HybridAutomaton a = load_automaton(model_file);
    LoadedTraces traces = load_traces(traces_file);
    if (!traces.omniscient)
        throw input_error("adequacy needs omniscient traces (with edge annotations)");
    SpecModel spec = load_spec(spec_file, a.dim);
    if (a.alpha.size() != a.modes.size())
        throw input_error("adequacy needs alpha tags on every mode of the model "
                          "(the abstraction map)");
    AdequacyReport rep = adequacy_check(a, *traces.omniscient, spec, a.alpha);
    print_adequacy(rep, std::cout);
    if (!out_file.empty())
        write_text_file(out_file, adequacy_to_json(rep).dump(2) + "\n");
    bool ok = rep.criterion3_pass && rep.criterion2_pass &&
              rep.criterion1_bisimilar.value_or(true);
    return ok ? kExitOk : kExitRefuted;
}

int cmd_check_membership(const std::string& model_file, const std::string& traces_file,
                         double eps) {
    HybridAutomaton a = load_automaton(model_file);
    LoadedTraces traces = load_traces(traces_file);
    Acceptor accept(a, eps);
    bool all = true;
    for (std::size_t i = 0; i < traces.observable.size(); ++i) {
        bool ok = accept(traces.observable[i]).has_value();
        all = all && ok;
        std::cout << "trace " << i << ": " << (ok ? "ACCEPT" : "REJECT") << "\n";
    }
    return all ? kExitOk : kExitRefuted;
}

int cmd_check_conservative(const std::string& built_file, const std::string& reference_file,
                           std::size_t samples, std::uint64_t seed, std::size_t steps,
                           unsigned jobs, const std::string& out_file) {
    HybridAutomaton built = load_automaton(built_file);
    HybridAutomaton reference = load_automaton(reference_file);
    ConservativeReport rep = conservative_check(built, reference, samples, seed, steps, jobs);

    std::cout << "sampled conservativeness check: " << samples << " walks, seed " << seed
              << " (sound for refutation only)\n";
    if (rep.ok()) {
        std::cout << "no counterexample found\n";
    } else {
        std::cout << rep.rejected.size() << " rejected walk(s); first at index "
                  << rep.rejected.front().walk_index << "\n";
    }
    if (!out_file.empty()) {
        json rejected = json::array();
        for (const auto& r : rep.rejected) {
            rejected.push_back(
                {{"walk_index", r.walk_index},
                 {"trace", traces_to_json(built.dim, std::vector<OmniscientTrace>{r.walk})}});
        }
        json out{{"note", "sampling is sound for refutation only"},
                 {"samples", rep.samples},
                 {"seed", rep.seed},
                 {"counterexamples", std::move(rejected)}};
        write_text_file(out_file, out.dump(2) + "\n");
    }
    return rep.ok() ? kExitOk : kExitRefuted;
}

json metrics_to_json(const BenchMetrics& m) {
    return json{{"depth", m.config.depth},
                {"dim", m.config.dim},
                {"spec", to_string(m.config.spec_kind)},
                {"traces_requested", m.config.trace_count},
                {"traces_generated", m.traces_generated},
                {"truth_modes", m.truth_modes},
                {"tree_modes", m.tree_modes},
                {"merged_modes", m.merged_modes},
                {"merged_edges", m.merged_edges},
                {"construct_ms", m.construct_ms},
                {"merge_ms", m.merge_ms},
                {"total_ms", m.total_ms},
                {"replay_ok", m.replay_ok},
                {"conservative_ok", m.conservative_ok}};
}

int cmd_bench_tree(const TreeBenchConfig& config, const std::string& out_dir,
                   std::size_t samples, unsigned jobs) {
    TreeBench bench = gen_tree(config);
    std::vector<OmniscientTrace> traces = gen_adequate_traces(bench, config);

    BenchMetrics metrics = run_benchmark(config, samples, jobs);
    std::cout << "depth " << config.depth << " dim " << config.dim << " spec "
              << to_string(config.spec_kind) << ": tree " << metrics.tree_modes << " -> merged "
              << metrics.merged_modes << " modes, construct " << metrics.construct_ms
              << " ms, merge " << metrics.merge_ms << " ms, replay "
              << (metrics.replay_ok ? "ok" : "FAIL") << ", conservative "
              << (metrics.conservative_ok ? "ok" : "FAIL") << "\n";

    if (!out_dir.empty()) {
        save_automaton(out_dir + "/truth.json", bench.truth);
        write_text_file(out_dir + "/spec.hspec", dump_spec(bench.spec));
        write_text_file(out_dir + "/traces.json",
                        traces_to_json(config.dim, traces).dump(2) + "\n");
        ConstructionState st = run_construction(
            [&] {
                std::vector<ObservableTrace> obs;
                for (const auto& t : traces)
                    obs.push_back(observe(t));
                return obs;
            }(),
            bench.spec);
        save_automaton(out_dir + "/tree.json", st.aut);
        save_automaton(out_dir + "/constructed.json", merge_modes(st.aut));
        write_text_file(out_dir + "/metrics.json", metrics_to_json(metrics).dump(2) + "\n");
    }
    return metrics.replay_ok && metrics.conservative_ok ? kExitOk : kExitRefuted;
}

int cmd_bench_sweep(std::size_t depth_min, std::size_t depth_max, Eigen::Index dim,
                    SpecKind kind, std::uint64_t seed, std::size_t samples, unsigned jobs,
                    const std::string& out_file) {
    std::ostringstream table;
    table << "depth\tdim\tspec\ttraces\ttree_modes\tmerged_modes\tconstruct_ms\tmerge_ms\t"
             "total_ms\treplay\tconservative\n";
    bool all_ok = true;
    for (std::size_t d = depth_min; d <= depth_max; ++d) {
        TreeBenchConfig c;
        c.depth = d;
        c.dim = dim;
        c.spec_kind = kind;
        c.seed = seed;
        BenchMetrics m = run_benchmark(c, samples, jobs);
        all_ok = all_ok && m.replay_ok && m.conservative_ok;
        table << d << '\t' << dim << '\t' << to_string(kind) << '\t' << m.traces_generated
              << '\t' << m.tree_modes << '\t' << m.merged_modes << '\t' << m.construct_ms
              << '\t' << m.merge_ms << '\t' << m.total_ms << '\t'
              << (m.replay_ok ? "ok" : "FAIL") << '\t' << (m.conservative_ok ? "ok" : "FAIL")
              << '\n';
        std::cerr << "done depth " << d << " (" << m.total_ms << " ms)\n";
    }
    if (out_file.empty())
        std::cout << table.str();
    else
        write_text_file(out_file, table.str());
    return all_ok ? kExitOk : kExitRefuted;
}

int cmd_spec_dump(const std::string& spec_file) {
    SpecModel spec = load_spec(spec_file);
    std::cout << dump_spec(spec);
    return kExitOk;
}

int cmd_export_dot(const std::string& model_file, const std::string& out_file) {
    HybridAutomaton a = load_automaton(model_file);
    std::string dot = dot_export(a);
    if (out_file.empty())
        std::cout << dot;
    else
        write_text_file(out_file, dot);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"conservative hybrid automata from monitoring specs and traces"};
    app.require_subcommand(1);

    // construct
    ConstructArgs cargs;
    CLI::App* construct = app.add_subcommand(
        "construct", "build the conservative automaton from a spec and traces");
    construct->add_option("--spec", cargs.spec_file, "monitoring spec file (.hspec DSL)")
        ->required();
    construct->add_option("--traces", cargs.traces_file, "trace file (JSON)")->required();
    construct->add_option("--out", cargs.out_file, "output automaton (JSON)")->required();
    construct->add_option("--dot", cargs.dot_file, "also write a Graphviz rendering");
    construct->add_option("--keep-tree", cargs.keep_tree_file,
                          "dump the pre-merge tree automaton");
    construct->add_option("--explain-merges", cargs.explain_file,
                          "write one line per union performed while merging");
    construct->add_flag("--fixpoint", cargs.fixpoint,
                        "iterate merging to a fixed point (off by default; excluded from the "
                        "conservativeness claims)");

    // simulate
    std::string sim_model, sim_out;
    std::size_t sim_steps = 16, sim_count = 1;
    std::uint64_t sim_seed = 0;
    double sim_dmin = 1.0, sim_dmax = 10.0;
    CLI::App* simulate = app.add_subcommand("simulate", "random walks on an automaton");
    simulate->add_option("--model", sim_model, "automaton file (JSON)")->required();
    simulate->add_option("--steps", sim_steps, "maximum delays per walk");
    simulate->add_option("--count", sim_count, "number of walks");
    simulate->add_option("--seed", sim_seed, "RNG seed (walk i uses seed + i)");
    simulate->add_option("--delay-min", sim_dmin, "delay sampling lower bound");
    simulate->add_option("--delay-max", sim_dmax, "delay sampling upper bound");
    simulate->add_option("--out", sim_out, "output trace file (stdout if omitted)");

    // project
    std::string proj_model, proj_traces, proj_out;
    CLI::App* proj = app.add_subcommand("project", "project an automaton onto omniscient traces");
    proj->add_option("--model", proj_model, "automaton file (JSON)")->required();
    proj->add_option("--traces", proj_traces, "omniscient trace file (JSON)")->required();
    proj->add_option("--out", proj_out, "output automaton (JSON)")->required();

    // adequacy
    std::string adq_model, adq_traces, adq_spec, adq_out;
    CLI::App* adq = app.add_subcommand("adequacy", "check the input adequacy criteria");
    adq->add_option("--model", adq_model, "automaton with alpha tags (the abstraction)")
        ->required();
    adq->add_option("--traces", adq_traces, "omniscient trace file (JSON)")->required();
    adq->add_option("--spec", adq_spec, "monitoring spec file")->required();
    adq->add_option("--out", adq_out, "also write the report as JSON");

    // check membership|conservative
    CLI::App* check = app.add_subcommand("check", "membership / conservativeness checks");
    check->require_subcommand(1);
    std::string mem_model, mem_traces;
    double mem_eps = 0.0;
    CLI::App* mem = check->add_subcommand("membership", "replay traces against an automaton");
    mem->add_option("--model", mem_model, "automaton file (JSON)")->required();
    mem->add_option("--traces", mem_traces, "trace file (JSON)")->required();
    mem->add_option("--eps", mem_eps,
                    "membership tolerance (default 0: exact comparisons; applies to guard and "
                    "flow checks only)");
    std::string con_built, con_ref, con_out;
    std::size_t con_samples = 1000, con_steps = 64;
    std::uint64_t con_seed = 0;
    unsigned con_jobs = 0;
    CLI::App* con = check->add_subcommand(
        "conservative", "sample reference walks and replay them against the built automaton");
    con->add_option("--built", con_built, "constructed automaton (JSON)")->required();
    con->add_option("--reference", con_ref, "reference automaton, e.g. a projection (JSON)")
        ->required();
    con->add_option("--samples", con_samples, "number of walks");
    con->add_option("--seed", con_seed, "RNG seed (walk i uses seed + i)");
    con->add_option("--steps", con_steps, "maximum delays per walk");
    con->add_option("--jobs", con_jobs, "worker threads (0 = all cores)");
    con->add_option("--out", con_out, "write the report as JSON");

    // bench tree|sweep
    CLI::App* bench = app.add_subcommand("bench", "binary-tree scalability harness");
    bench->require_subcommand(1);
    TreeBenchConfig bt;
    std::string bt_out_dir, bt_spec = "layer";
    std::size_t bt_samples = 200;
    unsigned bt_jobs = 0;
    CLI::App* btree = bench->add_subcommand("tree", "one generated instance end to end");
    btree->add_option("--depth", bt.depth, "tree depth (modes: 2^(depth+1) - 1)")->required();
    btree->add_option("--dim", bt.dim, "dimension");
    btree->add_option("--spec", bt_spec, "layer | id")->check(CLI::IsMember({"layer", "id"}));
    btree->add_option("--traces", bt.trace_count,
                      "requested trace count (raised to the adequacy minimum 2 * 2^depth)");
    btree->add_option("--seed", bt.seed, "RNG seed");
    btree->add_option("--samples", bt_samples, "projection walks for the conservativeness check");
    btree->add_option("--jobs", bt_jobs, "worker threads (0 = all cores)");
    btree->add_option("--out-dir", bt_out_dir,
                      "write truth/spec/traces/tree/constructed/metrics files here");
    std::size_t sw_depth_min = 1, sw_depth_max = 6;
    Eigen::Index sw_dim = 3;
    std::string sw_spec = "layer", sw_out;
    std::uint64_t sw_seed = 0;
    std::size_t sw_samples = 200;
    unsigned sw_jobs = 0;
    CLI::App* sweep = bench->add_subcommand("sweep", "a depth grid, emitting a TSV table");
    sweep->add_option("--depth-min", sw_depth_min, "first depth");
    sweep->add_option("--depth-max", sw_depth_max, "last depth");
    sweep->add_option("--dim", sw_dim, "dimension");
    sweep->add_option("--spec", sw_spec, "layer | id")->check(CLI::IsMember({"layer", "id"}));
    sweep->add_option("--seed", sw_seed, "RNG seed");
    sweep->add_option("--samples", sw_samples, "projection walks per instance");
    sweep->add_option("--jobs", sw_jobs, "worker threads (0 = all cores)");
    sweep->add_option("--out", sw_out, "table file (stdout if omitted)");

    // spec dump
    CLI::App* spec_cmd = app.add_subcommand("spec", "spec utilities");
    spec_cmd->require_subcommand(1);
    std::string spdump_file;
    CLI::App* spdump = spec_cmd->add_subcommand(
        "dump", "print the extracted abstract automaton and guard table");
    spdump->add_option("--spec", spdump_file, "monitoring spec file")->required();

    // export dot
    CLI::App* export_cmd = app.add_subcommand("export", "export utilities");
    export_cmd->require_subcommand(1);
    std::string dot_model, dot_out;
    CLI::App* dot = export_cmd->add_subcommand("dot", "Graphviz rendering of an automaton");
    dot->add_option("--model", dot_model, "automaton file (JSON)")->required();
    dot->add_option("--out", dot_out, "output file (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*construct)
            return cmd_construct(cargs);
        if (*simulate)
            return cmd_simulate(sim_model, sim_steps, sim_count, sim_seed, sim_dmin, sim_dmax,
                                sim_out);
        if (*proj)
            return cmd_project(proj_model, proj_traces, proj_out);
        if (*adq)
            return cmd_adequacy(adq_model, adq_traces, adq_spec, adq_out);
        if (*mem)
            return cmd_check_membership(mem_model, mem_traces, mem_eps);
        if (*con)
            return cmd_check_conservative(con_built, con_ref, con_samples, con_seed, con_steps,
                                          con_jobs, con_out);
        if (*btree) {
            bt.spec_kind = spec_kind_from_string(bt_spec);
            return cmd_bench_tree(bt, bt_out_dir, bt_samples, bt_jobs);
        }
        if (*sweep)
            return cmd_bench_sweep(sw_depth_min, sw_depth_max, sw_dim,
                                   spec_kind_from_string(sw_spec), sw_seed, sw_samples, sw_jobs,
                                   sw_out);
        if (*spdump)
            return cmd_spec_dump(spdump_file);
        if (*dot)
            return cmd_export_dot(dot_model, dot_out);
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const unsupported_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const invariant_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
