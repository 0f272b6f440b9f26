#pragma once

#include "asmplan/scene.hpp"
#include "asmplan/sequence.hpp"

#include <map>
#include <memory>
#include <string>

namespace asmplan {

enum class PlanStatus {
    Success = 0,
    InvalidScene = 2,
    NoSolution = 3,   // the AND/OR graph admits no solution tree
    Exhausted = 4,    // every tree failed search/validation within budget
    Internal = 5,
};

struct PlanResult {
    PlanStatus status = PlanStatus::Internal;
    AssemblyPlan plan;
    std::map<std::string, MotionTrace> motions;
    std::vector<std::string> messages;
    int tree_index = -1;
    int trees_tried = 0;
    double wall_seconds = 0.0;
    std::shared_ptr<AssemblyGraph> graph;  // graph the plan was found in
};

/// Per-circle grasp checkers: reachability plus collision against the table,
/// the static obstacles, and the non-grasped parts of the same assembly.
GraspCheckers make_circle_checkers(const Scene& scene, const Assembly& assembly,
                                   const Pose& world);

GraphBuildInput make_build_input(const Scene& scene, const GraspDatabase& db,
                                 const SolutionTree& tree);

/// Full pipeline: enumerate solution trees, build the assembly graph, search,
/// assign grasps, generate the sequence, and validate every step's motion,
/// cutting and replanning on failures until the budget forces the next tree.
PlanResult plan_scene(const Scene& scene, const GraspDatabase& db);

/// Builds the graph for one tree (the first by default), for export/audit.
AssemblyGraph build_graph_for_tree(const Scene& scene, const GraspDatabase& db, int tree_index);

std::string plan_to_json(const PlanResult& result, const Scene& scene);

}  // namespace asmplan
