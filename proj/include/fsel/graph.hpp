#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace fsel {

/// Directed graph as successor lists over vertices 0..n-1.
using Digraph = std::vector<std::vector<std::size_t>>;

struct Condensation {
    /// Components in reverse topological order (sink components first).
    std::vector<std::vector<std::size_t>> components;
    /// component_of[v] is the index of v's component.
    std::vector<std::size_t> component_of;
    /// Deduplicated edges between distinct components, as (from, to) indices.
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    /// A component is closed when no edge leaves it.
    std::vector<bool> closed;
};

/// Tarjan's algorithm, iterative. Vertices inside a component are sorted.
Condensation condense(const Digraph& graph);

/// Vertices reachable from `source` (including it).
std::vector<bool> reachable_from(const Digraph& graph, std::size_t source);

}  // namespace fsel
