#include "asmplan/planner.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <sstream>

namespace asmplan {

using json = nlohmann::ordered_json;

GraspCheckers make_circle_checkers(const Scene& scene, const Assembly& assembly,
                                   const Pose& world) {
    GraspCheckers checkers;
    const Workspace ws = scene.workspace;
    const ReachParams reach = scene.reach;
    checkers.reachable = [ws, reach](const Pose& wrist) {
        return default_reachability(wrist, ws, reach);
    };

    auto env = std::make_shared<std::vector<CollisionHull>>();
    env->push_back(scene.table_hull());
    for (const auto& o : scene.obstacles) env->push_back(o);
    auto part_hulls = std::make_shared<std::map<std::string, CollisionHull>>();
    for (std::size_t i = 0; i < assembly.parts.size(); ++i) {
        const Part& part = scene.parts.at(assembly.parts[i]);
        (*part_hulls)[assembly.parts[i]] = transformed(
            CollisionHull::from_points(part.vertices), world.compose(assembly.part_pose(i)));
    }
    checkers.collides = [env, part_hulls](const std::vector<AttachedHull>& body,
                                          const Pose& wrist, const std::string& grasped) {
        for (const auto& obs : *env)
            if (collide_any(body, wrist, {obs})) return true;
        for (const auto& [pid, hull] : *part_hulls) {
            if (pid == grasped) continue;
            if (collide_any(body, wrist, {hull})) return true;
        }
        return false;
    };
    return checkers;
}

GraphBuildInput make_build_input(const Scene& scene, const GraspDatabase& db,
                                 const SolutionTree& tree) {
    GraphBuildInput in;
    in.andor = &scene.andor;
    in.tree = tree;
    in.parts_db = scene.parts;
    in.workspace = scene.workspace;
    in.grippers = scene.grippers;
    in.db = &db;
    in.yaw_set = scene.yaw_set;
    for (const auto& a : scene.andor.assemblies)
        if (a.single_part())
            in.initial_placements[a.parts.front()] = scene.initial_placement(a.parts.front());
    in.checkers_for = [&scene](const Assembly& a, const Pose& world) {
        return make_circle_checkers(scene, a, world);
    };
    in.static_obstacles = scene.obstacles;
    in.static_obstacles.push_back(scene.table_hull());
    return in;
}

AssemblyGraph build_graph_for_tree(const Scene& scene, const GraspDatabase& db, int tree_index) {
    auto trees = enumerate_solutions(scene.andor, static_cast<std::size_t>(tree_index) + 1);
    if (tree_index < 0 || tree_index >= static_cast<int>(trees.size()))
        throw SceneError("solution tree " + std::to_string(tree_index) + " does not exist");
    return build_assembly_graph(make_build_input(scene, db, trees[tree_index]));
}

namespace {

/// Symbolic world state while motions are validated step by step.
struct WorldState {
    // vertex -> (circle, anchor world pose)
    std::map<int, std::pair<int, Pose>> placed;

    std::vector<CollisionHull> obstacle_hulls(const Scene& scene, const AssemblyGraph& graph,
                                              int except_vertex) const {
        std::vector<CollisionHull> out;
        out.push_back(scene.table_hull());
        for (const auto& o : scene.obstacles) out.push_back(o);
        for (const auto& [vertex, loc] : placed) {
            if (vertex == except_vertex) continue;
            const Assembly& a = graph.andor.assemblies[vertex];
            for (std::size_t i = 0; i < a.parts.size(); ++i)
                out.push_back(transformed(
                    CollisionHull::from_points(scene.parts.at(a.parts[i]).vertices),
                    loc.second.compose(a.part_pose(i))));
        }
        return out;
    }
};

std::vector<AttachedHull> carried_hulls(const Scene& scene, const AssemblyGraph& graph,
                                        const PlanStep& step) {
    // Gripper body plus the grasped assembly's parts, all relative to the wrist.
    const Gripper& gr = graph.gripper_by_id(step.gripper_id);
    std::vector<AttachedHull> moving = gripper_body_hulls(gr, step.grasp.jaw_width);
    const Circle& from = graph.circles[step.from_circle];
    const Assembly& a = graph.andor.assemblies[from.vertex];
    auto grasped_idx = a.part_index(step.grasp_ref.part_id);
    if (!grasped_idx) return moving;
    Pose grasp_part_pose = a.part_pose(*grasped_idx);
    for (std::size_t i = 0; i < a.parts.size(); ++i) {
        Pose offset = step.grasp.wrist_pose.inverse()
                          .compose(grasp_part_pose.inverse())
                          .compose(a.part_pose(i));
        moving.push_back(
            {CollisionHull::from_points(scene.parts.at(a.parts[i]).vertices), offset});
    }
    return moving;
}

std::vector<AttachedHull> free_gripper_hulls(const AssemblyGraph& graph, const PlanStep& step) {
    const Gripper& gr = graph.gripper_by_id(step.gripper_id);
    double width = step.grasp.jaw_width > 0.0 ? step.grasp.jaw_width : gr.max_width;
    return gripper_body_hulls(gr, width);
}

/// World direction the attach child travels along during the final fitting.
Vec3 fit_approach_dir(const AssemblyGraph& graph, const PlanStep& step) {
    const Circle& to = graph.circles[step.to_circle];
    const AssemblyTask* task = graph.task_of_result(to.vertex);
    if (!task) return Vec3(0.0, 0.0, -1.0);
    const Assembly& parent = graph.andor.assemblies[task->result];
    const Assembly& attach = graph.andor.assemblies[task->attach];
    auto idx = parent.part_index(attach.parts.front());
    Vec3 dir(0.0, 0.0, -1.0);
    if (idx && *idx > 0 && *idx - 1 < parent.approach_dirs.size())
        dir = parent.approach_dirs[*idx - 1];
    return to.world.rotation * dir;
}

struct StepMotion {
    bool has_motion = false;
    MotionTrace trace;
};

class MotionValidator {
  public:
    MotionValidator(const Scene& scene, const AssemblyGraph& graph)
        : scene_(scene), graph_(graph) {}

    /// Validates one step against the current symbolic state. Returns nullopt
    /// on infeasibility (including endpoint collisions).
    std::optional<StepMotion> validate(const PlanStep& step, const WorldState& world) {
        StepMotion out;
        if (step.kind == StepKind::ToolExchange) return out;  // tool stand abstracted

        MotionQuery q;
        q.start = step.wrist_from;
        q.goal = step.wrist_to;
        const Circle* from = step.from_circle >= 0 ? &graph_.circles[step.from_circle] : nullptr;
        int carried_vertex = -1;
        if (step.carries_object && from) {
            carried_vertex = from->vertex;
            q.moving = carried_hulls(scene_, graph_, step);
        } else {
            q.moving = free_gripper_hulls(graph_, step);
        }
        q.obstacles = world.obstacle_hulls(scene_, graph_, carried_vertex);

        if ((q.start.translation - q.goal.translation).norm() < 1e-12 &&
            rotation_angle_between(q.start.rotation, q.goal.rotation) < 1e-12)
            return out;  // no movement

        MotionConfig cfg = scene_.motion;
        try {
            if (step.kind == StepKind::Assemble) {
                // Final approach runs straight along the fitting direction.
                Vec3 dir = fit_approach_dir(graph_, step);
                Pose pre = q.goal;
                pre.translation -= dir * scene_.approach_dist;
                MotionQuery to_pre = q;
                to_pre.goal = pre;
                auto trace = check_edge(to_pre, cfg);
                if (!trace) return std::nullopt;
                if (!segment_free(q, pre, q.goal, cfg.resolution, cfg.rot_resolution))
                    return std::nullopt;
                out.trace = *trace;
                out.trace.waypoints.push_back(q.goal);
            } else {
                auto trace = check_edge(q, cfg);
                if (!trace) return std::nullopt;
                out.trace = *trace;
            }
        } catch (const InvalidQuery&) {
            return std::nullopt;  // endpoint blocked by the current state
        }
        out.has_motion = true;
        return out;
    }

  private:
    const Scene& scene_;
    const AssemblyGraph& graph_;
};

void apply_step(WorldState& world, const AssemblyGraph& graph, const PlanStep& step) {
    if (step.kind == StepKind::Place || step.kind == StepKind::Assemble) {
        const Circle& from = graph.circles[step.from_circle];
        const Circle& to = graph.circles[step.to_circle];
        world.placed.erase(from.vertex);
        if (step.kind == StepKind::Assemble) {
            const AssemblyTask* task = graph.task_of_result(to.vertex);
            if (task) {
                world.placed.erase(task->base);
                world.placed.erase(task->attach);
            }
        }
        world.placed[to.vertex] = std::make_pair(to.id, to.world);
    }
}

}  // namespace

PlanResult plan_scene(const Scene& scene, const GraspDatabase& db) {
    auto t0 = std::chrono::steady_clock::now();
    PlanResult result;
    auto finish = [&](PlanStatus st) {
        result.status = st;
        result.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return result;
    };

    auto violations = validate_scene(scene);
    if (!violations.empty()) {
        result.messages = violations;
        return finish(PlanStatus::InvalidScene);
    }

    auto trees = enumerate_solutions(scene.andor, static_cast<std::size_t>(scene.max_trees));
    if (trees.empty()) {
        result.messages.push_back("the AND/OR graph has no solution tree");
        return finish(PlanStatus::NoSolution);
    }

    for (int ti = 0; ti < static_cast<int>(trees.size()); ++ti) {
        result.trees_tried = ti + 1;
        AssemblyGraph graph;
        try {
            graph = build_assembly_graph(make_build_input(scene, db, trees[ti]));
        } catch (const std::exception& e) {
            result.messages.push_back("tree " + std::to_string(ti) + ": " + e.what());
            continue;
        }
        for (const auto& d : graph.diagnostics)
            result.messages.push_back("tree " + std::to_string(ti) + ": " + d);

        // Degenerate single-part product: nothing to assemble.
        if (graph.tasks.empty()) {
            result.tree_index = ti;
            result.plan.solution_tree = ti;
            result.plan.seed = scene.motion.seed;
            result.graph = std::make_shared<AssemblyGraph>(std::move(graph));
            return finish(PlanStatus::Success);
        }

        CutSet cuts;
        std::vector<CutRecord> cut_history;
        MotionValidator validator(scene, graph);
        while (static_cast<int>(cut_history.size()) <= scene.cut_budget) {
            auto spine = dijkstra_search(graph, graph.initial_states(), graph.goal_states(),
                                         scene.costs, cuts);
            if (!spine) {
                result.messages.push_back("tree " + std::to_string(ti) +
                                          ": no path from initial to final assembly nodes");
                break;
            }
            auto seq = generate_sequence(graph, *spine, scene.costs, cuts,
                                         SequenceParams{scene.retreat_dist});
            if (!seq.plan) {
                if (seq.failure.failed_edge >= 0) {
                    cuts.edges.insert(seq.failure.failed_edge);
                    cut_history.push_back({seq.failure.failed_edge, {}, "no common grasp"});
                } else if (seq.failure.goal_circle >= 0) {
                    // No chain reaches this fitted circle: ban its incoming
                    // carries so the search picks another fitted pose.
                    bool any = false;
                    for (const auto& e : graph.edges)
                        if (graph.states[e.to_state].circle == seq.failure.goal_circle &&
                            !cuts.edges.count(e.id)) {
                            cuts.edges.insert(e.id);
                            any = true;
                        }
                    cut_history.push_back(
                        {-1, {}, "unreachable fitted circle " +
                                     std::to_string(seq.failure.goal_circle)});
                    if (!any) break;  // nothing left to ban
                } else {
                    break;
                }
                continue;
            }

            AssemblyPlan plan = std::move(*seq.plan);
            plan.solution_tree = ti;
            plan.seed = scene.motion.seed;

            // Motion validation in execution order against the evolving state.
            WorldState world;
            for (int v = 0; v < static_cast<int>(graph.andor.assemblies.size()); ++v) {
                if (!graph.andor.is_leaf(v)) continue;
                auto initials = graph.circles_of(v, NodeKind::Initial);
                if (!initials.empty())
                    world.placed[v] =
                        std::make_pair(initials.front(), graph.circles[initials.front()].world);
            }
            std::map<std::string, MotionTrace> motions;
            int motion_id = 0;
            bool all_ok = true;
            for (auto& step : plan.steps) {
                auto checked = validator.validate(step, world);
                if (!checked) {
                    if (step.origin_edge >= 0) {
                        cuts.edge_grasps.insert({step.origin_edge, step.origin_grasp});
                        cut_history.push_back(
                            {step.origin_edge, step.origin_grasp, "motion infeasible"});
                    } else if (step.origin_circle >= 0) {
                        cuts.circle_grasps.insert(
                            {step.origin_circle, step.gripper_id, step.origin_grasp});
                        cut_history.push_back(
                            {-1, step.origin_grasp, "regrasp motion infeasible"});
                    } else {
                        cut_history.push_back({-1, {}, "unattributable motion failure"});
                        all_ok = false;
                        break;
                    }
                    all_ok = false;
                    break;
                }
                if (checked->has_motion) {
                    std::ostringstream ref;
                    ref << "m" << motion_id++;
                    step.motion_ref = ref.str();
                    motions.emplace(step.motion_ref, std::move(checked->trace));
                }
                apply_step(world, graph, step);
            }
            if (!all_ok) continue;

            plan.cut_history = cut_history;
            auto issues = verify_plan(plan, graph);
            if (!issues.empty()) {
                for (const auto& msg : issues)
                    result.messages.push_back("plan verification: " + msg);
                return finish(PlanStatus::Internal);
            }
            result.plan = std::move(plan);
            result.motions = std::move(motions);
            result.tree_index = ti;
            result.graph = std::make_shared<AssemblyGraph>(std::move(graph));
            return finish(PlanStatus::Success);
        }
        result.messages.push_back("tree " + std::to_string(ti) + ": exhausted after " +
                                  std::to_string(cut_history.size()) + " cuts");
    }
    return finish(PlanStatus::Exhausted);
}

namespace {

json placement_json(const AssemblyGraph& graph, int circle_id) {
    json j;
    if (circle_id < 0) return j;
    const Circle& c = graph.circles[circle_id];
    j["grid"] = {c.placement.grid_point.i, c.placement.grid_point.j};
    j["facet"] = c.placement.facet_id;
    j["yaw"] = c.placement.yaw;
    j["kind"] = to_string(c.kind);
    json r = json::array();
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) r.push_back(c.world.rotation(i, k));
    j["world"] = {{"R", r}, {"t", {c.world.translation.x(), c.world.translation.y(),
                                   c.world.translation.z()}}};
    return j;
}

json pose_json(const Pose& p) {
    json r = json::array();
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) r.push_back(p.rotation(i, k));
    return {{"R", r}, {"t", {p.translation.x(), p.translation.y(), p.translation.z()}}};
}

}  // namespace

std::string plan_to_json(const PlanResult& result, const Scene& scene) {
    const AssemblyGraph& graph = *result.graph;
    json j;
    j["schema"] = "asmplan-plan-v1";
    j["scene"] = scene.name;
    j["seed"] = result.plan.seed;
    j["solution_tree"] = result.plan.solution_tree;
    j["total_cost"] = result.plan.total_cost;
    j["stack_iterations"] = result.plan.stack_iterations;
    j["tool_exchanges"] = count_tool_exchanges(result.plan);
    json cuts = json::array();
    for (const auto& c : result.plan.cut_history)
        cuts.push_back({{"edge", c.edge},
                        {"part", c.grasp.part_id},
                        {"grasp", c.grasp.db_index},
                        {"reason", c.reason}});
    j["cut_history"] = std::move(cuts);

    json steps = json::array();
    for (const auto& s : result.plan.steps) {
        json sj;
        sj["kind"] = to_string(s.kind);
        sj["assembly"] = s.assembly_id;
        sj["gripper"] = s.gripper_id;
        if (s.kind == StepKind::Pick || s.kind == StepKind::Place ||
            s.kind == StepKind::Assemble) {
            sj["grasp"] = {{"part", s.grasp_ref.part_id},
                           {"index", s.grasp_ref.db_index},
                           {"wrist_pose", pose_json(s.grasp.wrist_pose)},
                           {"width", s.grasp.jaw_width}};
        }
        if (s.from_circle >= 0) sj["from_placement"] = placement_json(graph, s.from_circle);
        if (s.to_circle >= 0) sj["to_placement"] = placement_json(graph, s.to_circle);
        sj["motion_ref"] = s.motion_ref;
        sj["task"] = s.task_index;
        steps.push_back(std::move(sj));
    }
    j["steps"] = std::move(steps);

    json motions;
    for (const auto& [ref, trace] : result.motions) {
        json tj;
        tj["resolution"] = trace.resolution;
        json wps = json::array();
        for (const auto& p : trace.waypoints) wps.push_back(pose_json(p));
        tj["waypoints"] = std::move(wps);
        motions[ref] = std::move(tj);
    }
    j["motions"] = std::move(motions);
    return j.dump(2) + "\n";
}

}  // namespace asmplan
