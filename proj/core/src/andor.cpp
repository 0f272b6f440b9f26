#include "asmplan/andor.hpp"

#include <algorithm>
#include <functional>

namespace asmplan {

std::set<std::string> AndOrGraph::part_set(int vertex) const {
    const auto& parts = assemblies.at(vertex).parts;
    return {parts.begin(), parts.end()};
}

std::vector<int> AndOrGraph::edges_of(int vertex) const {
    std::vector<int> out;
    for (int e = 0; e < static_cast<int>(hyperedges.size()); ++e)
        if (hyperedges[e].parent == vertex) out.push_back(e);
    return out;
}

int AndOrGraph::root() const {
    std::set<std::string> universe;
    for (const auto& a : assemblies) universe.insert(a.parts.begin(), a.parts.end());
    int found = -1;
    for (int i = 0; i < static_cast<int>(assemblies.size()); ++i) {
        if (part_set(i) == universe) {
            if (found >= 0) return -1;
            found = i;
        }
    }
    return found;
}

std::vector<std::string> validate(const AndOrGraph& graph) {
    std::vector<std::string> violations;
    const int n = static_cast<int>(graph.assemblies.size());
    if (n == 0) {
        violations.push_back("and/or graph has no assemblies");
        return violations;
    }
    for (int i = 0; i < n; ++i) {
        const Assembly& a = graph.assemblies[i];
        if (a.parts.empty()) violations.push_back("assembly '" + a.id + "' has no parts");
        if (graph.part_set(i).size() != a.parts.size())
            violations.push_back("assembly '" + a.id + "' lists a part twice");
    }

    std::set<std::string> universe;
    for (const auto& a : graph.assemblies) universe.insert(a.parts.begin(), a.parts.end());
    int root_count = 0;
    for (int i = 0; i < n; ++i)
        if (graph.part_set(i) == universe) ++root_count;
    if (root_count != 1)
        violations.push_back("expected exactly one root (full part set), found " +
                             std::to_string(root_count));

    for (int e = 0; e < static_cast<int>(graph.hyperedges.size()); ++e) {
        const Hyperedge& h = graph.hyperedges[e];
        if (h.parent < 0 || h.parent >= n || h.child_a < 0 || h.child_a >= n || h.child_b < 0 ||
            h.child_b >= n) {
            violations.push_back("hyperedge " + std::to_string(e) + " has out-of-range vertices");
            continue;
        }
        auto pa = graph.part_set(h.child_a);
        auto pb = graph.part_set(h.child_b);
        auto pp = graph.part_set(h.parent);
        std::set<std::string> inter;
        std::set_intersection(pa.begin(), pa.end(), pb.begin(), pb.end(),
                              std::inserter(inter, inter.begin()));
        std::set<std::string> uni;
        std::set_union(pa.begin(), pa.end(), pb.begin(), pb.end(),
                       std::inserter(uni, uni.begin()));
        if (!inter.empty() || uni != pp)
            violations.push_back("hyperedge " + std::to_string(e) +
                                 ": children do not partition the parent part set");
        if (pa.size() >= pp.size() || pb.size() >= pp.size())
            violations.push_back("hyperedge " + std::to_string(e) +
                                 ": child part count not strictly below parent");
    }

    int root = graph.root();
    if (root >= 0) {
        // Vertices reachable from the root; childless ones must be single parts.
        std::vector<bool> reach(n, false);
        std::vector<int> stack{root};
        reach[root] = true;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int e : graph.edges_of(v))
                for (int c : {graph.hyperedges[e].child_a, graph.hyperedges[e].child_b})
                    if (c >= 0 && c < n && !reach[c]) {
                        reach[c] = true;
                        stack.push_back(c);
                    }
        }
        for (int i = 0; i < n; ++i) {
            if (!reach[i]) continue;
            if (graph.edges_of(i).empty() && !graph.is_leaf(i))
                violations.push_back("assembly '" + graph.assemblies[i].id +
                                     "' is reachable, multi-part, and has no decomposition");
        }
    }
    return violations;
}

namespace {

// All selections for a subtree rooted at v, as vertex->edge maps.
void subtree_solutions(const AndOrGraph& graph, int v,
                       std::vector<std::vector<std::pair<int, int>>>& out) {
    out.clear();
    if (graph.is_leaf(v)) {
        out.push_back({});
        return;
    }
    for (int e : graph.edges_of(v)) {
        const Hyperedge& h = graph.hyperedges[e];
        std::vector<std::vector<std::pair<int, int>>> sa, sb;
        subtree_solutions(graph, h.child_a, sa);
        subtree_solutions(graph, h.child_b, sb);
        for (const auto& la : sa)
            for (const auto& lb : sb) {
                std::vector<std::pair<int, int>> sel;
                sel.emplace_back(v, e);
                sel.insert(sel.end(), la.begin(), la.end());
                sel.insert(sel.end(), lb.begin(), lb.end());
                out.push_back(std::move(sel));
            }
    }
}

int tree_depth(const AndOrGraph& graph, const SolutionTree& t, int v) {
    if (graph.is_leaf(v)) return 0;
    int e = t.chosen[v];
    if (e < 0) return 0;
    return 1 + std::max(tree_depth(graph, t, graph.hyperedges[e].child_a),
                        tree_depth(graph, t, graph.hyperedges[e].child_b));
}

}  // namespace

std::vector<SolutionTree> enumerate_solutions(const AndOrGraph& graph, std::size_t limit) {
    std::vector<SolutionTree> trees;
    int root = graph.root();
    if (root < 0) return trees;

    std::vector<std::vector<std::pair<int, int>>> selections;
    subtree_solutions(graph, root, selections);
    for (const auto& sel : selections) {
        SolutionTree t;
        t.root = root;
        t.chosen.assign(graph.assemblies.size(), -1);
        for (auto [v, e] : sel) {
            t.chosen[v] = e;
            t.edge_indices.push_back(e);
        }
        std::sort(t.edge_indices.begin(), t.edge_indices.end());
        t.depth = tree_depth(graph, t, root);
        trees.push_back(std::move(t));
    }
    std::sort(trees.begin(), trees.end(), [](const SolutionTree& a, const SolutionTree& b) {
        if (a.depth != b.depth) return a.depth < b.depth;
        return a.edge_indices < b.edge_indices;
    });
    trees.erase(std::unique(trees.begin(), trees.end(),
                            [](const SolutionTree& a, const SolutionTree& b) {
                                return a.edge_indices == b.edge_indices;
                            }),
                trees.end());
    if (trees.size() > limit) trees.resize(limit);
    return trees;
}

std::pair<int, int> base_attach_of(const AndOrGraph& graph, const Hyperedge& edge) {
    if (edge.base_override == edge.child_a) return {edge.child_a, edge.child_b};
    if (edge.base_override == edge.child_b) return {edge.child_b, edge.child_a};
    std::size_t na = graph.assemblies.at(edge.child_a).parts.size();
    std::size_t nb = graph.assemblies.at(edge.child_b).parts.size();
    if (na > nb) return {edge.child_a, edge.child_b};
    if (nb > na) return {edge.child_b, edge.child_a};
    return edge.child_a < edge.child_b ? std::pair{edge.child_a, edge.child_b}
                                       : std::pair{edge.child_b, edge.child_a};
}

std::vector<AssemblyTask> linearize(const AndOrGraph& graph, const SolutionTree& tree) {
    std::vector<AssemblyTask> tasks;
    std::function<void(int)> visit = [&](int v) {
        if (graph.is_leaf(v)) return;
        int e = tree.chosen.at(v);
        const Hyperedge& h = graph.hyperedges.at(e);
        auto [base, attach] = base_attach_of(graph, h);
        visit(base);
        visit(attach);
        tasks.push_back({e, base, attach, v});
    };
    visit(tree.root);
    return tasks;
}

}  // namespace asmplan
