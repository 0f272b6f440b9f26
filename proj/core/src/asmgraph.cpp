#include "asmplan/asmgraph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace asmplan {

const char* to_string(NodeKind k) {
    switch (k) {
        case NodeKind::Base: return "base";
        case NodeKind::AssemblyNode: return "assembly";
        case NodeKind::Escape: return "escape";
        case NodeKind::Initial: return "initial";
    }
    return "?";
}

const char* to_string(EdgeKind k) {
    switch (k) {
        case EdgeKind::Transit: return "transit";
        case EdgeKind::TransferAssembly: return "transfer";
        case EdgeKind::ToolExchange: return "tool_exchange";
    }
    return "?";
}

int AssemblyGraph::state_index(int circle, const std::string& gripper) const {
    for (int i = 0; i < static_cast<int>(states.size()); ++i)
        if (states[i].circle == circle && states[i].gripper == gripper) return i;
    return -1;
}

std::vector<int> AssemblyGraph::states_of(int circle) const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(states.size()); ++i)
        if (states[i].circle == circle) out.push_back(i);
    return out;
}

std::vector<int> AssemblyGraph::circles_of(int vertex, NodeKind kind) const {
    std::vector<int> out;
    for (const auto& c : circles)
        if (c.vertex == vertex && c.kind == kind) out.push_back(c.id);
    return out;
}

std::vector<int> AssemblyGraph::initial_states() const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(states.size()); ++i)
        if (circles[states[i].circle].kind == NodeKind::Initial) out.push_back(i);
    return out;
}

std::vector<int> AssemblyGraph::goal_states() const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(states.size()); ++i) {
        const Circle& c = circles[states[i].circle];
        if (c.kind == NodeKind::AssemblyNode && c.vertex == tree.root) out.push_back(i);
    }
    return out;
}

const Gripper& AssemblyGraph::gripper_by_id(const std::string& id) const {
    for (const auto& g : grippers)
        if (g.id == id) return g;
    throw std::runtime_error("unknown gripper: " + id);
}

double AssemblyGraph::stability_of(const GraspRef& ref, const std::string& gripper) const {
    auto it = stability.find({ref.part_id, gripper});
    if (it == stability.end() || ref.db_index < 0 ||
        ref.db_index >= static_cast<int>(it->second.size()))
        return 0.0;
    return it->second[ref.db_index];
}

std::vector<GraspRef> AssemblyGraph::shared_alive(const BoldEdge& e, const CutSet& cuts) const {
    std::vector<GraspRef> out;
    if (cuts.edges.count(e.id)) return out;
    const CircleState& from = states[e.from_state];
    const CircleState& to = states[e.to_state];
    for (const auto& g : e.shared) {
        if (cuts.banned(e.id, g)) continue;
        if (cuts.banned_at(from.circle, from.gripper, g)) continue;
        if (cuts.banned_at(to.circle, to.gripper, g)) continue;
        out.push_back(g);
    }
    return out;
}

const AssemblyTask* AssemblyGraph::task_of_result(int vertex) const {
    for (const auto& t : tasks)
        if (t.result == vertex) return &t;
    return nullptr;
}

namespace {

std::vector<GraspRef> sorted_refs(const FilteredGraspSet& set) {
    std::vector<GraspRef> refs;
    refs.reserve(set.grasps.size());
    for (const auto& e : set.grasps) refs.push_back(e.ref);
    std::sort(refs.begin(), refs.end());
    return refs;
}

std::vector<GraspRef> intersect_refs(const std::vector<GraspRef>& a,
                                     const std::vector<GraspRef>& b) {
    std::vector<GraspRef> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

AssemblyGraph build_assembly_graph(const GraphBuildInput& input) {
    if (!input.andor || !input.db) throw std::runtime_error("build_assembly_graph: null input");
    AssemblyGraph g;
    g.andor = *input.andor;
    g.tree = input.tree;
    g.tasks = linearize(g.andor, g.tree);
    g.parts_db = input.parts_db;
    g.workspace = input.workspace;
    g.grippers = input.grippers;
    std::sort(g.grippers.begin(), g.grippers.end(),
              [](const Gripper& a, const Gripper& b) { return a.id < b.id; });

    // Vertices of the solution tree and their roles.
    std::set<int> in_tree{g.tree.root};
    for (const auto& t : g.tasks) {
        in_tree.insert(t.base);
        in_tree.insert(t.attach);
        in_tree.insert(t.result);
    }
    std::map<int, int> base_child_of_task;  // vertex -> task index where it is base
    for (int ti = 0; ti < static_cast<int>(g.tasks.size()); ++ti)
        base_child_of_task[g.tasks[ti].base] = ti;

    // Per-vertex geometry.
    std::map<int, ConvexHull> hulls;
    std::map<int, Vec3> cogs;
    std::map<int, std::vector<int>> stables;
    for (int v : in_tree) {
        const Assembly& a = g.andor.assemblies[v];
        hulls.emplace(v, assembly_hull(a, g.parts_db));
        cogs.emplace(v, composite_cog(a, g.parts_db));
        stables.emplace(v, stable_facets(hulls.at(v), cogs.at(v)));
        if (stables.at(v).empty())
            g.diagnostics.push_back("NoStablePlacement: assembly '" + a.id + "'");
    }

    std::map<std::string, CollisionHull> part_hulls;
    for (const auto& [pid, part] : g.parts_db)
        part_hulls.emplace(pid, CollisionHull::from_points(part.vertices));
    auto placement_clear = [&](int vertex, const Pose& world) {
        const Assembly& a = g.andor.assemblies[vertex];
        for (std::size_t i = 0; i < a.parts.size(); ++i) {
            Pose pw = world.compose(a.part_pose(i));
            for (const auto& obs : input.static_obstacles)
                if (collide(part_hulls.at(a.parts[i]), pw, obs, Pose::identity())) return false;
        }
        return true;
    };

    auto add_circle = [&](int vertex, NodeKind kind, const PlacementPose& placement,
                          const Pose& world, bool derived, int base_circle) {
        if (!placement_clear(vertex, world)) {
            g.diagnostics.push_back("DroppedPlacement: assembly '" +
                                    g.andor.assemblies[vertex].id + "' " + to_string(kind) +
                                    " collides with a static obstacle");
            return -1;
        }
        Circle c;
        c.id = static_cast<int>(g.circles.size());
        c.vertex = vertex;
        c.kind = kind;
        c.placement = placement;
        c.world = world;
        c.derived = derived;
        c.base_circle = base_circle;
        g.circles.push_back(std::move(c));
        return g.circles.back().id;
    };

    // Pass 1: initial, base, and escape circles, vertex by vertex.
    for (int v : in_tree) {
        const Assembly& a = g.andor.assemblies[v];
        const ConvexHull& hull = hulls.at(v);
        const Vec3& cog = cogs.at(v);
        if (g.andor.is_leaf(v)) {
            auto it = input.initial_placements.find(a.parts.front());
            if (it == input.initial_placements.end())
                throw std::runtime_error("no initial placement for part '" + a.parts.front() +
                                         "'");
            Pose world = placement_pose_to_world(it->second, hull, cog, g.workspace);
            add_circle(v, NodeKind::Initial, it->second, world, false, -1);
        }
        if (base_child_of_task.count(v)) {
            for (int f : stables.at(v))
                for (double yaw : input.yaw_set) {
                    PlacementPose p{g.workspace.assembly_point, f, yaw};
                    add_circle(v, NodeKind::Base, p,
                               placement_pose_to_world(p, hull, cog, g.workspace), false, -1);
                }
        }
        if (v != g.tree.root) {
            for (const GridPoint& e : g.workspace.escape_points)
                for (int f : stables.at(v))
                    for (double yaw : input.yaw_set) {
                        PlacementPose p{e, f, yaw};
                        add_circle(v, NodeKind::Escape, p,
                                   placement_pose_to_world(p, hull, cog, g.workspace), false, -1);
                    }
        }
    }

    // Pass 2: fitted circles, one per base circle of the task's base child.
    // The fitted pose of the result extends the base placement: the base
    // subassembly stays exactly where it was placed.
    for (const auto& t : g.tasks) {
        const Assembly& result = g.andor.assemblies[t.result];
        const Assembly& base = g.andor.assemblies[t.base];
        auto anchor_idx = result.part_index(base.parts.front());
        if (!anchor_idx)
            throw std::runtime_error("assembly '" + result.id + "' misses base anchor part");
        Pose base_in_result = result.part_pose(*anchor_idx);
        for (int bc : g.circles_of(t.base, NodeKind::Base)) {
            const Circle& b = g.circles[bc];
            Pose world = b.world.compose(base_in_result.inverse());
            PlacementPose p = b.placement;
            p.grid_point = g.workspace.assembly_point;
            add_circle(t.result, NodeKind::AssemblyNode, p, world, true, bc);
        }
    }

    // Grasp filtering per circle and gripper.
    for (auto& c : g.circles) {
        const Assembly& a = g.andor.assemblies[c.vertex];
        GraspCheckers checkers;
        if (input.checkers_for) checkers = input.checkers_for(a, c.world);
        bool any = false;
        for (const auto& gr : g.grippers) {
            auto set = filter_grasps_at(a, c.world, c.placement, gr, *input.db, checkers);
            any = any || !set.grasps.empty();
            c.grasp_sets.emplace(gr.id, std::move(set));
        }
        if (!any) {
            std::ostringstream os;
            os << "EmptyGraspSet: assembly '" << a.id << "' " << to_string(c.kind) << " grid("
               << c.placement.grid_point.i << "," << c.placement.grid_point.j << ") facet "
               << c.placement.facet_id << " yaw " << c.placement.yaw;
            g.diagnostics.push_back(os.str());
        }
    }

    // Stability per database entry, cached for grasp assignment.
    for (const auto& [key, entries] : input.db->entries) {
        auto pit = g.parts_db.find(key.first);
        if (pit == g.parts_db.end()) continue;
        const Gripper& gr = g.gripper_by_id(key.second);
        std::vector<double> vals;
        vals.reserve(entries.size());
        for (const auto& e : entries) {
            double s = 0.0;
            try {
                s = stability_index(e, pit->second, gr);
            } catch (const NoContact&) {
                s = 0.0;
            }
            vals.push_back(s);
        }
        g.stability.emplace(key, std::move(vals));
    }

    // Search states: (circle, gripper) with a nonempty filtered set.
    for (const auto& c : g.circles)
        for (const auto& gr : g.grippers)
            if (c.has_grasps(gr.id)) g.states.push_back({c.id, gr.id});
    g.out_edges.assign(g.states.size(), {});

    std::map<std::pair<int, std::string>, std::vector<GraspRef>> refs;
    for (const auto& c : g.circles)
        for (const auto& gr : g.grippers)
            refs[{c.id, gr.id}] = sorted_refs(c.grasp_sets.at(gr.id));

    auto add_transfer = [&](int c1, int c2) {
        for (const auto& gr : g.grippers) {
            int s1 = g.state_index(c1, gr.id);
            int s2 = g.state_index(c2, gr.id);
            if (s1 < 0 || s2 < 0) continue;
            auto shared = intersect_refs(refs.at({c1, gr.id}), refs.at({c2, gr.id}));
            if (shared.empty()) continue;
            BoldEdge e;
            e.id = static_cast<int>(g.edges.size());
            e.kind = EdgeKind::TransferAssembly;
            e.from_state = s1;
            e.to_state = s2;
            e.shared = std::move(shared);
            g.out_edges[s1].push_back(e.id);
            g.edges.push_back(std::move(e));
        }
    };

    for (int v : in_tree) {
        auto initials = g.circles_of(v, NodeKind::Initial);
        auto escapes = g.circles_of(v, NodeKind::Escape);
        auto bases = g.circles_of(v, NodeKind::Base);
        auto fitted = g.circles_of(v, NodeKind::AssemblyNode);
        for (int ci : initials) {
            for (int ce : escapes) add_transfer(ci, ce);
            for (int cb : bases) add_transfer(ci, cb);
        }
        for (int ce1 : escapes)
            for (int ce2 : escapes)
                if (ce1 != ce2) add_transfer(ce1, ce2);
        for (int ce : escapes)
            for (int cb : bases) add_transfer(ce, cb);
        // A3: a finished subassembly leaves the assembly point for the escape
        // area before anything else happens to it.
        for (int ca : fitted)
            for (int ce : escapes) add_transfer(ca, ce);
    }
    // Fitting carries: the attach child moves from rest onto the placed base.
    for (const auto& t : g.tasks) {
        std::vector<int> rests = g.circles_of(t.attach, NodeKind::Initial);
        for (int ce : g.circles_of(t.attach, NodeKind::Escape)) rests.push_back(ce);
        for (int cr : rests)
            for (int ca : g.circles_of(t.result, NodeKind::AssemblyNode)) add_transfer(cr, ca);
    }
    // Tool exchanges at resting circles: the object stays put, the hand swaps.
    for (const auto& c : g.circles) {
        if (c.kind == NodeKind::Base) continue;
        for (const auto& g1 : g.grippers)
            for (const auto& g2 : g.grippers) {
                if (g1.id == g2.id) continue;
                int s1 = g.state_index(c.id, g1.id);
                int s2 = g.state_index(c.id, g2.id);
                if (s1 < 0 || s2 < 0) continue;
                BoldEdge e;
                e.id = static_cast<int>(g.edges.size());
                e.kind = EdgeKind::ToolExchange;
                e.from_state = s1;
                e.to_state = s2;
                g.out_edges[s1].push_back(e.id);
                g.edges.push_back(std::move(e));
            }
    }
    return g;
}

std::optional<SearchPath> dijkstra_search(const SearchGraph& graph, const std::vector<int>& roots,
                                          const std::vector<int>& goals) {
    const int n = static_cast<int>(graph.adj.size());
    if (n == 0 || roots.empty() || goals.empty()) return std::nullopt;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, inf);
    std::vector<int> pred_state(n, -1), pred_edge(n, -1);
    std::set<std::pair<double, int>> queue;  // ordered by (dist, state): deterministic
    for (int r : roots) {
        if (r < 0 || r >= n) continue;
        if (dist[r] > 0.0) {
            dist[r] = 0.0;
            queue.insert({0.0, r});
        }
    }
    while (!queue.empty()) {
        auto [d, u] = *queue.begin();
        queue.erase(queue.begin());
        for (const auto& e : graph.adj[u]) {
            double nd = d + e.cost;
            if (nd < dist[e.to]) {
                queue.erase({dist[e.to], e.to});
                dist[e.to] = nd;
                pred_state[e.to] = u;
                pred_edge[e.to] = e.id;
                queue.insert({nd, e.to});
            }
        }
    }
    int best_goal = -1;
    for (int gl : goals) {
        if (gl < 0 || gl >= n || dist[gl] == inf) continue;
        if (best_goal < 0 || dist[gl] < dist[best_goal] ||
            (dist[gl] == dist[best_goal] && gl < best_goal))
            best_goal = gl;
    }
    if (best_goal < 0) return std::nullopt;
    SearchPath path;
    path.cost = dist[best_goal];
    for (int cur = best_goal; cur >= 0; cur = pred_state[cur]) {
        path.states.push_back(cur);
        if (pred_edge[cur] >= 0) path.edges.push_back(pred_edge[cur]);
        if (pred_state[cur] < 0) break;
    }
    std::reverse(path.states.begin(), path.states.end());
    std::reverse(path.edges.begin(), path.edges.end());
    return path;
}

SearchGraph make_search_graph(const AssemblyGraph& graph, const CostConfig& costs,
                              const CutSet& cuts) {
    SearchGraph sg;
    sg.adj.resize(graph.states.size());
    for (const auto& e : graph.edges) {
        if (cuts.edges.count(e.id)) continue;
        double cost = 0.0;
        if (e.kind == EdgeKind::TransferAssembly) {
            if (graph.shared_alive(e, cuts).empty()) continue;
            cost = costs.transfer;
        } else if (e.kind == EdgeKind::ToolExchange) {
            cost = costs.tool_exchange;
        } else {
            cost = costs.transit;
        }
        sg.adj[e.from_state].push_back({e.to_state, cost, e.id});
    }
    return sg;
}

std::optional<SearchPath> dijkstra_search(const AssemblyGraph& graph,
                                          const std::vector<int>& roots,
                                          const std::vector<int>& goals, const CostConfig& costs,
                                          const CutSet& cuts) {
    return dijkstra_search(make_search_graph(graph, costs, cuts), roots, goals);
}

AssignResult assign_grasps(const AssemblyGraph& graph, const SearchPath& path,
                           const CostConfig& costs, const CutSet& cuts) {
    AssignResult result;
    AssignedPath out;
    out.path = path;
    std::vector<AssignedHop> transfers;
    for (std::size_t k = 0; k < path.edges.size(); ++k) {
        const BoldEdge& e = graph.edges[path.edges[k]];
        AssignedHop hop;
        hop.kind = e.kind;
        hop.edge = e.id;
        hop.from_state = e.from_state;
        hop.to_state = e.to_state;
        if (e.kind == EdgeKind::TransferAssembly) {
            auto alive = graph.shared_alive(e, cuts);
            if (alive.empty()) {
                result.failed_edge = e.id;
                return result;
            }
            const std::string& gripper = graph.states[e.from_state].gripper;
            GraspRef best = alive.front();
            double best_s = graph.stability_of(best, gripper);
            for (const auto& g : alive) {
                double s = graph.stability_of(g, gripper);
                if (s > best_s) {
                    best = g;
                    best_s = s;
                }
            }
            hop.grasp = best;
            out.cost += costs.transfer;
        } else {
            out.cost += costs.tool_exchange;
        }
        transfers.push_back(hop);
    }
    // Insert transit hops where consecutive carries under one gripper switch
    // grasps at the junction circle.
    for (std::size_t k = 0; k < transfers.size(); ++k) {
        if (k > 0) {
            const AssignedHop& prev = transfers[k - 1];
            const AssignedHop& next = transfers[k];
            if (prev.kind == EdgeKind::TransferAssembly &&
                next.kind == EdgeKind::TransferAssembly && !(prev.grasp == next.grasp)) {
                AssignedHop transit;
                transit.kind = EdgeKind::Transit;
                transit.edge = -1;
                transit.from_state = next.from_state;
                transit.to_state = next.from_state;
                transit.grasp = next.grasp;
                transit.prev_grasp = prev.grasp;
                out.hops.push_back(transit);
                out.cost += costs.transit;
            }
        }
        out.hops.push_back(transfers[k]);
    }
    result.path = std::move(out);
    return result;
}

ReplanOutcome validate_and_replan(const AssemblyGraph& graph, const AssignedPath& start,
                                  const std::vector<int>& roots, const std::vector<int>& goals,
                                  const CostConfig& costs, const HopValidator& validator,
                                  int budget, CutSet& cuts) {
    ReplanOutcome out;
    AssignedPath cur = start;
    int used = 0;
    while (true) {
        const AssignedHop* failed = nullptr;
        for (const auto& hop : cur.hops) {
            if (hop.kind == EdgeKind::ToolExchange) continue;  // tool stand abstracted
            if (!validator(graph, hop)) {
                failed = &hop;
                break;
            }
        }
        if (!failed) {
            out.validated = true;
            out.path = cur;
            return out;
        }
        if (failed->edge >= 0) {
            cuts.edge_grasps.insert({failed->edge, failed->grasp});
            out.cut_history.push_back({failed->edge, failed->grasp, "motion infeasible"});
        } else {
            const CircleState& s = graph.states[failed->from_state];
            cuts.circle_grasps.insert({s.circle, s.gripper, failed->grasp});
            out.cut_history.push_back({-1, failed->grasp, "regrasp motion infeasible"});
        }
        if (++used >= budget) return out;

        auto res = assign_grasps(graph, cur.path, costs, cuts);
        while (!res.path) {
            if (res.failed_edge >= 0) {
                cuts.edges.insert(res.failed_edge);
                out.cut_history.push_back({res.failed_edge, {}, "no common grasp left"});
                if (++used >= budget) return out;
            }
            auto p = dijkstra_search(graph, roots, goals, costs, cuts);
            if (!p) return out;  // nothing reachable: exhausted for this tree
            res = assign_grasps(graph, *p, costs, cuts);
        }
        cur = *res.path;
    }
}

std::vector<FullEdgeRecord> full_graph_edges(const AssemblyGraph& graph) {
    std::vector<FullEdgeRecord> out;
    // Transit edges: every grasp pair within one (circle, gripper) state.
    for (const auto& s : graph.states) {
        const auto& set = graph.circles[s.circle].grasp_sets.at(s.gripper);
        for (std::size_t i = 0; i < set.grasps.size(); ++i)
            for (std::size_t j = i + 1; j < set.grasps.size(); ++j)
                out.push_back({EdgeKind::Transit, s.circle, s.circle, s.gripper, s.gripper,
                               set.grasps[i].ref, set.grasps[j].ref});
    }
    for (const auto& e : graph.edges) {
        const CircleState& a = graph.states[e.from_state];
        const CircleState& b = graph.states[e.to_state];
        if (e.kind == EdgeKind::TransferAssembly) {
            for (const auto& g : e.shared)
                out.push_back({e.kind, a.circle, b.circle, a.gripper, b.gripper, g, g});
        } else {
            const auto& sa = graph.circles[a.circle].grasp_sets.at(a.gripper);
            const auto& sb = graph.circles[b.circle].grasp_sets.at(b.gripper);
            for (const auto& ga : sa.grasps)
                for (const auto& gb : sb.grasps)
                    out.push_back({e.kind, a.circle, b.circle, a.gripper, b.gripper, ga.ref,
                                   gb.ref});
        }
    }
    return out;
}

bool edge_kind_predicate_holds(const AssemblyGraph& graph, const FullEdgeRecord& rec) {
    const Circle& ca = graph.circles[rec.circle_a];
    const Circle& cb = graph.circles[rec.circle_b];
    switch (rec.kind) {
        case EdgeKind::Transit:
            // Same object placing pose, same gripper, different grasping pose.
            return rec.circle_a == rec.circle_b && rec.gripper_a == rec.gripper_b &&
                   !(rec.grasp_a == rec.grasp_b);
        case EdgeKind::TransferAssembly:
            // Same gripper and grasping pose, different object placing pose.
            return rec.gripper_a == rec.gripper_b && rec.grasp_a == rec.grasp_b &&
                   rec.circle_a != rec.circle_b &&
                   (ca.vertex != cb.vertex || !ca.world.approx_equal(cb.world, 1e-9));
        case EdgeKind::ToolExchange:
            return rec.gripper_a != rec.gripper_b;
    }
    return false;
}

namespace {

std::string circle_label(const AssemblyGraph& g, const Circle& c) {
    std::ostringstream os;
    os << g.andor.assemblies[c.vertex].id << "\\n" << to_string(c.kind) << " ("
       << c.placement.grid_point.i << "," << c.placement.grid_point.j << ") f"
       << c.placement.facet_id << " y" << c.placement.yaw;
    return os.str();
}

const char* kind_shape(NodeKind k) {
    switch (k) {
        case NodeKind::Base: return "box";
        case NodeKind::AssemblyNode: return "doublecircle";
        case NodeKind::Escape: return "ellipse";
        case NodeKind::Initial: return "diamond";
    }
    return "ellipse";
}

const char* edge_color(EdgeKind k) {
    switch (k) {
        case EdgeKind::Transit: return "gray";
        case EdgeKind::TransferAssembly: return "red";
        case EdgeKind::ToolExchange: return "blue";
    }
    return "black";
}

}  // namespace

std::string export_simplified_dot(const AssemblyGraph& graph) {
    std::ostringstream os;
    os << "digraph simplified_assembly_graph {\n";
    for (int i = 0; i < static_cast<int>(graph.states.size()); ++i) {
        const CircleState& s = graph.states[i];
        const Circle& c = graph.circles[s.circle];
        os << "  s" << i << " [shape=" << kind_shape(c.kind) << ",label=\""
           << circle_label(graph, c) << "\\n" << s.gripper << "\"];\n";
    }
    for (const auto& e : graph.edges) {
        os << "  s" << e.from_state << " -> s" << e.to_state << " [color="
           << edge_color(e.kind) << ",label=\"" << to_string(e.kind);
        if (e.kind == EdgeKind::TransferAssembly) os << " x" << e.shared.size();
        os << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

std::string export_full_dot(const AssemblyGraph& graph) {
    std::ostringstream os;
    os << "digraph assembly_graph {\n";
    auto node_name = [&](int circle, const std::string& gripper, const GraspRef& g) {
        std::ostringstream n;
        n << "c" << circle << "_" << gripper << "_" << g.part_id << "_" << g.db_index;
        return n.str();
    };
    for (const auto& c : graph.circles) {
        os << "  subgraph cluster_c" << c.id << " {\n    label=\"" << circle_label(graph, c)
           << "\";\n";
        for (const auto& [gid, set] : c.grasp_sets)
            for (const auto& e : set.grasps)
                os << "    " << node_name(c.id, gid, e.ref) << " [shape=" << kind_shape(c.kind)
                   << ",label=\"" << gid << ":" << e.ref.part_id << "#" << e.ref.db_index
                   << "\"];\n";
        os << "  }\n";
    }
    for (const auto& rec : full_graph_edges(graph)) {
        os << "  " << node_name(rec.circle_a, rec.gripper_a, rec.grasp_a) << " -> "
           << node_name(rec.circle_b, rec.gripper_b, rec.grasp_b) << " [color="
           << edge_color(rec.kind) << "];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace asmplan
