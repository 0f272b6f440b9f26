#pragma once

#include "asmplan/asmgraph.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace asmplan {

enum class StepKind { Pick, Place, Assemble, ToolExchange, Retreat };

const char* to_string(StepKind k);

struct PlanStep {
    StepKind kind = StepKind::Pick;
    std::string assembly_id;  // assembly handled by this step
    std::string gripper_id;
    GraspRef grasp_ref;
    GraspPose grasp;          // part-frame grasp (Pick/Place/Assemble)
    int from_circle = -1;
    int to_circle = -1;
    PlacementPose from_placement;
    PlacementPose to_placement;
    Pose wrist_from;          // wrist world pose before the motion
    Pose wrist_to;            // wrist world pose after the motion
    bool carries_object = false;  // motion moves the grasped assembly
    std::string motion_ref;   // filled once the motion is validated
    int task_index = -1;

    // Cut attribution for the replanning loop.
    int origin_edge = -1;
    GraspRef origin_grasp;
    int origin_circle = -1;   // set for regrasp approaches banned per circle
};

struct AssemblyPlan {
    std::vector<PlanStep> steps;
    int solution_tree = -1;
    double total_cost = 0.0;
    int stack_iterations = 0;
    std::uint64_t seed = 0;
    std::vector<CutRecord> cut_history;
};

struct SequenceParams {
    double retreat_dist = 0.08;
};

struct SequenceFailure {
    int task_index = -1;
    int goal_circle = -1;   // fitted circle whose chain could not be resolved
    int failed_edge = -1;   // set when an edge bundle ran out of grasps
};

struct SequenceResult {
    std::optional<AssemblyPlan> plan;
    SequenceFailure failure;
};

/// Stack-based sequence generation over the searched graph: starting from the
/// spine's fitted circle of the root, each task contributes its base-child
/// delivery to the corresponding base circle, the attach-child delivery into
/// the fitted circle, and (recursively) the formation of both children.
/// Sub-chains are found with Dijkstra on the simplified graph and connected
/// with tool exchanges wherever consecutive picks need different grippers.
SequenceResult generate_sequence(const AssemblyGraph& graph, const SearchPath& spine,
                                 const CostConfig& costs, const CutSet& cuts,
                                 const SequenceParams& params = {});

int count_tool_exchanges(const AssemblyPlan& plan);

/// Symbolic replay of the plan: tracks placements, the gripper in hand, and
/// formed assemblies; reports ordering, occupancy, and grasp/gripper
/// mismatches as violations. Empty result means the plan is sound.
std::vector<std::string> verify_plan(const AssemblyPlan& plan, const AssemblyGraph& graph);

}  // namespace asmplan
