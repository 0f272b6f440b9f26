#pragma once

#include "asmplan/andor.hpp"
#include "asmplan/grasp.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace asmplan {

enum class NodeKind { Base, AssemblyNode, Escape, Initial };
enum class EdgeKind { Transit, TransferAssembly, ToolExchange };

const char* to_string(NodeKind k);
const char* to_string(EdgeKind k);

/// A circle of the manipulation graph: one assembly at one placing pose, with
/// its filtered grasp sets per gripper. Fitted (AssemblyNode) circles take
/// their world pose from the corresponding base circle; their symbolic
/// placement mirrors the base placement and is marked derived.
struct Circle {
    int id = -1;
    int vertex = -1;  // AND/OR vertex whose assembly this is
    NodeKind kind = NodeKind::Initial;
    PlacementPose placement;
    Pose world;
    bool derived = false;
    int base_circle = -1;  // AssemblyNode only: the determining base circle
    std::map<std::string, FilteredGraspSet> grasp_sets;

    bool has_grasps(const std::string& gripper) const {
        auto it = grasp_sets.find(gripper);
        return it != grasp_sets.end() && !it->second.grasps.empty();
    }
};

/// Search node of the simplified graph: a circle held by one gripper.
struct CircleState {
    int circle = -1;
    std::string gripper;
};

/// Merged edge bundle of the simplified graph. Transfer bundles list the
/// grasp identities shared by both endpoint circles; exchange bundles connect
/// co-located circles under different grippers.
struct BoldEdge {
    int id = -1;
    EdgeKind kind = EdgeKind::TransferAssembly;
    int from_state = -1;
    int to_state = -1;
    std::vector<GraspRef> shared;
};

struct CostConfig {
    double transit = 1.0;
    double transfer = 1.0;
    double tool_exchange = 5.0;
};

/// Grasp/edge availability removed by the replanning loop.
struct CutSet {
    std::set<std::pair<int, GraspRef>> edge_grasps;  // (bold edge id, grasp)
    std::set<int> edges;
    std::set<std::tuple<int, std::string, GraspRef>> circle_grasps;

    bool banned(int edge, const GraspRef& g) const {
        return edges.count(edge) || edge_grasps.count({edge, g});
    }
    bool banned_at(int circle, const std::string& gripper, const GraspRef& g) const {
        return circle_grasps.count({circle, gripper, g});
    }
    std::size_t size() const {
        return edge_grasps.size() + edges.size() + circle_grasps.size();
    }
};

struct GraphBuildInput {
    const AndOrGraph* andor = nullptr;
    SolutionTree tree;
    PartsDb parts_db;
    Workspace workspace;
    std::vector<Gripper> grippers;
    const GraspDatabase* db = nullptr;
    std::vector<double> yaw_set = {0.0, M_PI_2, M_PI, 3.0 * M_PI_2};
    std::map<std::string, PlacementPose> initial_placements;  // per leaf part id
    std::function<GraspCheckers(const Assembly&, const Pose&)> checkers_for;
    // Circles whose assembly would penetrate these (table, walls) are dropped;
    // fitted poses derived from a base placement can clip them.
    std::vector<CollisionHull> static_obstacles;
};

struct AssemblyGraph {
    AndOrGraph andor;
    SolutionTree tree;
    std::vector<AssemblyTask> tasks;
    PartsDb parts_db;
    Workspace workspace;
    std::vector<Gripper> grippers;

    std::vector<Circle> circles;
    std::vector<CircleState> states;
    std::vector<BoldEdge> edges;
    std::vector<std::vector<int>> out_edges;  // per state
    std::vector<std::string> diagnostics;     // EmptyGraspSet records etc.

    std::map<std::pair<std::string, std::string>, std::vector<double>> stability;  // per db entry

    int state_index(int circle, const std::string& gripper) const;
    std::vector<int> states_of(int circle) const;
    std::vector<int> circles_of(int vertex, NodeKind kind) const;
    std::vector<int> initial_states() const;
    std::vector<int> goal_states() const;  // assembly states of the root vertex
    const Gripper& gripper_by_id(const std::string& id) const;
    double stability_of(const GraspRef& ref, const std::string& gripper) const;
    std::vector<GraspRef> shared_alive(const BoldEdge& e, const CutSet& cuts) const;
    const AssemblyTask* task_of_result(int vertex) const;
};

/// Applies the AND/OR -> assembly graph replacement rules for one solution
/// tree: leaves get initial + escape circles, base children get base circles
/// at the assembly point, every non-leaf gets fitted circles determined by its
/// base child's base circles, and non-root vertices get escape circles.
/// Transfer bundles connect placements reachable by one carry (including the
/// fitting carry from an attach child into the parent's fitted circle);
/// exchange bundles connect co-located circles under different grippers.
AssemblyGraph build_assembly_graph(const GraphBuildInput& input);

// --- search ---

struct SearchPath {
    std::vector<int> states;
    std::vector<int> edges;  // size = states.size() - 1
    double cost = 0.0;
};

/// Plain directed graph fed to Dijkstra; kept separate so oracles and tests
/// can search synthetic graphs.
struct SearchGraph {
    struct Edge {
        int to = -1;
        double cost = 0.0;
        int id = -1;
    };
    std::vector<std::vector<Edge>> adj;
};

std::optional<SearchPath> dijkstra_search(const SearchGraph& graph, const std::vector<int>& roots,
                                          const std::vector<int>& goals);

SearchGraph make_search_graph(const AssemblyGraph& graph, const CostConfig& costs,
                              const CutSet& cuts);

/// Least-cost path over all roots; deterministic tie-breaks.
std::optional<SearchPath> dijkstra_search(const AssemblyGraph& graph,
                                          const std::vector<int>& roots,
                                          const std::vector<int>& goals, const CostConfig& costs,
                                          const CutSet& cuts = {});

// --- grasp assignment ---

struct AssignedHop {
    EdgeKind kind = EdgeKind::TransferAssembly;
    int edge = -1;  // -1 for inserted transit hops
    int from_state = -1;
    int to_state = -1;
    GraspRef grasp;      // transfer hops: the carried grasp
    GraspRef prev_grasp; // transit hops: the grasp being released
};

struct AssignedPath {
    SearchPath path;
    std::vector<AssignedHop> hops;
    double cost = 0.0;
};

struct AssignResult {
    std::optional<AssignedPath> path;
    int failed_edge = -1;  // set on NoCommonGrasp
};

/// Per transfer hop, picks the shared grasp of maximum stability valid at both
/// endpoints (ties to the lowest grasp identity); inserts transit hops where
/// consecutive transfers under one gripper need different grasps.
AssignResult assign_grasps(const AssemblyGraph& graph, const SearchPath& path,
                           const CostConfig& costs, const CutSet& cuts = {});

// --- motion validation + replanning ---

struct CutRecord {
    int edge = -1;
    GraspRef grasp;
    std::string reason;
};

struct ReplanOutcome {
    bool validated = false;
    AssignedPath path;
    std::vector<CutRecord> cut_history;
};

/// True when the hop's motion is feasible.
using HopValidator = std::function<bool(const AssemblyGraph&, const AssignedHop&)>;

/// Validates hops in path order; on failure cuts the offending (edge, grasp),
/// reassigns, and re-searches when no assignment survives. Gives up after
/// `budget` cuts so the caller can advance to the next solution tree.
ReplanOutcome validate_and_replan(const AssemblyGraph& graph, const AssignedPath& start,
                                  const std::vector<int>& roots, const std::vector<int>& goals,
                                  const CostConfig& costs, const HopValidator& validator,
                                  int budget, CutSet& cuts);

// --- full-graph view (exploded grasp nodes), for export and auditing ---

struct FullEdgeRecord {
    EdgeKind kind;
    int circle_a = -1, circle_b = -1;
    std::string gripper_a, gripper_b;
    GraspRef grasp_a, grasp_b;
};

std::vector<FullEdgeRecord> full_graph_edges(const AssemblyGraph& graph);

/// Re-checks the defining predicate of an edge's kind from its endpoints.
bool edge_kind_predicate_holds(const AssemblyGraph& graph, const FullEdgeRecord& rec);

std::string export_simplified_dot(const AssemblyGraph& graph);
std::string export_full_dot(const AssemblyGraph& graph);

}  // namespace asmplan
