#ifndef CHAC_BENCH_HPP
#define CHAC_BENCH_HPP

#include "chac/analysis.hpp"
#include "chac/construct.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace chac {

enum class SpecKind { layer, id };

struct TreeBenchConfig {
    std::size_t depth = 3;  // at most 20 (2^21 - 1 modes)
    Eigen::Index dim = 3;
    SpecKind spec_kind = SpecKind::layer;
    std::size_t trace_count = 0;  // floor: the adequacy minimum, 2 * 2^depth
    std::uint64_t seed = 0;
};

/// A generated ground truth: the tree automaton, its specification, and the
/// mode -> abstract-state map (also stored as alpha tags on the truth).
struct TreeBench {
    HybridAutomaton truth;
    SpecModel spec;
    std::map<ModeId, std::string> abstraction;
};

/// A complete binary tree of 2^(depth+1) - 1 modes with random singular
/// flows and vacuous guards. Layer spec: all edges into depth k share label
/// "a<k>" and the spec has one abstract state per depth. Id spec: every edge
/// carries a unique label and every mode is its own abstract state.
TreeBench gen_tree(const TreeBenchConfig& c);

/// Root-to-leaf walks making the trace set adequate: two walks per leaf (so
/// every internal mode below the root is strictly traversed more than
/// a(a-1)/2 times and every leaf is entered), padded with seeded random
/// walks up to trace_count.
std::vector<OmniscientTrace> gen_adequate_traces(const TreeBench& bench,
                                                 const TreeBenchConfig& c);

struct BenchMetrics {
    TreeBenchConfig config;
    std::size_t traces_generated = 0;
    std::size_t truth_modes = 0;
    std::size_t tree_modes = 0;  // pre-merge construction
    std::size_t merged_modes = 0;
    std::size_t merged_edges = 0;
    double construct_ms = 0;
    double merge_ms = 0;
    double total_ms = 0;
    bool replay_ok = false;        // every input trace accepted by the output
    bool conservative_ok = false;  // sampled projection walks accepted
};

/// End-to-end run: generate, construct, merge, verify. `samples` random
/// walks of the projection are replayed against the constructed automaton.
BenchMetrics run_benchmark(const TreeBenchConfig& c, std::size_t samples = 200,
                           unsigned jobs = 0);

std::string to_string(SpecKind k);
SpecKind spec_kind_from_string(const std::string& s);

} // namespace chac

#endif
