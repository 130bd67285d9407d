#ifndef CHAC_IO_HPP
#define CHAC_IO_HPP

#include "chac/spec.hpp"
#include "chac/traces.hpp"

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <string>
#include <vector>

namespace chac {

/// Rect <-> array of [lo, hi] pairs; "-inf"/"inf" encode unbounded ends.
nlohmann::json rect_to_json(const Rect& r);
Rect rect_from_json(const nlohmann::json& j);

/// Automaton file format: { "dim", "modes": [{id, flow, alpha?}],
/// "edges": [{src, label, dst, guard}], "init": {mode, x} }.
nlohmann::json automaton_to_json(const HybridAutomaton& a);
HybridAutomaton automaton_from_json(const nlohmann::json& j);

/// Trace file format: { "dim", "traces": [{x0, steps: [{label, delay, x,
/// edge?}]}] } where "edge" = {src, dst} is present only in omniscient files.
struct LoadedTraces {
    Eigen::Index dim = 0;
    std::vector<ObservableTrace> observable;
    /// Present iff every labeled step of every trace carries an edge.
    std::optional<std::vector<OmniscientTrace>> omniscient;
};

nlohmann::json traces_to_json(Eigen::Index dim, const std::vector<ObservableTrace>& ts);
nlohmann::json traces_to_json(Eigen::Index dim, const std::vector<OmniscientTrace>& ts);
LoadedTraces traces_from_json(const nlohmann::json& j);

/// Graphviz rendering: one node per mode ("m<id>\n flow=<rect>"), one edge
/// per transition ("<label>\n g=<rect>"); equal alpha tags share a fill
/// color.
std::string dot_export(const HybridAutomaton& a);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

HybridAutomaton load_automaton(const std::string& path);
void save_automaton(const std::string& path, const HybridAutomaton& a);
LoadedTraces load_traces(const std::string& path);
SpecModel load_spec(const std::string& path,
                    std::optional<Eigen::Index> expect_dim = std::nullopt);

} // namespace chac

#endif
