#pragma once

#include "asmplan/geometry.hpp"

#include <set>
#include <string>
#include <vector>

namespace asmplan {

struct Hyperedge {
    int parent = -1;
    int child_a = -1;
    int child_b = -1;
    int base_override = -1;  // optional: force this child as the base operand
};

/// Task hypergraph: vertices are subassemblies, each hyperedge decomposes a
/// parent into two children whose part sets partition the parent's.
struct AndOrGraph {
    std::vector<Assembly> assemblies;
    std::vector<Hyperedge> hyperedges;

    std::set<std::string> part_set(int vertex) const;
    std::vector<int> edges_of(int vertex) const;
    int root() const;  // -1 when no unique root exists
    bool is_leaf(int vertex) const { return assemblies.at(vertex).single_part(); }
};

std::vector<std::string> validate(const AndOrGraph& graph);

/// One complete decomposition: exactly one hyperedge chosen per included
/// non-leaf vertex, rooted at the graph root.
struct SolutionTree {
    int root = -1;
    std::vector<int> chosen;        // vertex -> hyperedge index, -1 when unused/leaf
    std::vector<int> edge_indices;  // the selected hyperedges, sorted
    int depth = 0;
};

/// All distinct solution trees, ordered by ascending depth then lexicographic
/// selected-hyperedge indices, truncated to `limit`. Empty when the root
/// cannot be decomposed to single-part leaves.
std::vector<SolutionTree> enumerate_solutions(const AndOrGraph& graph, std::size_t limit);

/// One assembly operation of a linearized tree.
struct AssemblyTask {
    int edge = -1;     // hyperedge realized by this task
    int base = -1;     // child placed at the assembly point first
    int attach = -1;   // child fit onto the base
    int result = -1;   // parent vertex
};

/// Post-order tasks: operands of each task are leaves or earlier results; the
/// final task yields the root. The base operand is the child with more parts
/// (ties to the lower assembly index) unless the hyperedge overrides it.
std::vector<AssemblyTask> linearize(const AndOrGraph& graph, const SolutionTree& tree);

/// Base/attach designation for one hyperedge (shared by linearize).
std::pair<int, int> base_attach_of(const AndOrGraph& graph, const Hyperedge& edge);

}  // namespace asmplan
