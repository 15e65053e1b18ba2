#include "fsel/graph.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <utility>

namespace fsel {

Condensation condense(const Digraph& graph) {
    constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
    const std::size_t n = graph.size();
    std::vector<std::size_t> index(n, kUnvisited), lowlink(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::size_t next_index = 0;

    Condensation result;
    result.component_of.assign(n, kUnvisited);

    // Explicit DFS frames: (vertex, next successor position).
    std::vector<std::pair<std::size_t, std::size_t>> frames;
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != kUnvisited) continue;
        frames.emplace_back(root, 0);
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;

        while (!frames.empty()) {
            auto& [v, pos] = frames.back();
            if (pos < graph[v].size()) {
                const std::size_t w = graph[v][pos++];
                if (index[w] == kUnvisited) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    lowlink[v] = std::min(lowlink[v], index[w]);
                }
                continue;
            }
            const std::size_t done = v;
            frames.pop_back();
            if (!frames.empty()) {
                const std::size_t parent = frames.back().first;
                lowlink[parent] = std::min(lowlink[parent], lowlink[done]);
            }
            if (lowlink[done] == index[done]) {
                std::vector<std::size_t> component;
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    result.component_of[w] = result.components.size();
                    component.push_back(w);
                } while (w != done);
                std::sort(component.begin(), component.end());
                result.components.push_back(std::move(component));
            }
        }
    }

    std::set<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t w : graph[v])
            if (result.component_of[v] != result.component_of[w])
                edges.emplace(result.component_of[v], result.component_of[w]);
    result.edges.assign(edges.begin(), edges.end());
    result.closed.assign(result.components.size(), true);
    for (const auto& e : result.edges) result.closed[e.first] = false;
    return result;
}

std::vector<bool> reachable_from(const Digraph& graph, std::size_t source) {
    std::vector<bool> seen(graph.size(), false);
    std::vector<std::size_t> todo{source};
    seen[source] = true;
    while (!todo.empty()) {
        const std::size_t v = todo.back();
        todo.pop_back();
        for (std::size_t w : graph[v])
            if (!seen[w]) {
                seen[w] = true;
                todo.push_back(w);
            }
    }
    return seen;
}

}  // namespace fsel
