// Command-line front end: scene validation, grasp-database export, assembly
// graph export, and the end-to-end planner.

#include <CLI11.hpp>

#include "asmplan/planner.hpp"

#include <fstream>
#include <iostream>

namespace {

int write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path);
    if (!os) {
        std::cerr << "cannot write " << path << "\n";
        return 5;
    }
    os << content;
    return 0;
}

int run_plan(const std::string& scene_path, const std::string& out_path, long long seed,
             bool seed_set, int max_trees, int cut_budget) {
    asmplan::Scene scene = asmplan::load_scene(scene_path);
    if (seed_set) scene.motion.seed = static_cast<std::uint64_t>(seed);
    if (max_trees > 0) scene.max_trees = max_trees;
    if (cut_budget > 0) scene.cut_budget = cut_budget;

    auto db = asmplan::build_grasp_database_cached(scene, scene_path);
    auto result = asmplan::plan_scene(scene, db);
    for (const auto& msg : result.messages) std::cerr << msg << "\n";
    if (result.status != asmplan::PlanStatus::Success) {
        std::cerr << "planning failed (status " << static_cast<int>(result.status) << ")\n";
        return static_cast<int>(result.status);
    }
    std::cerr << "planned " << result.plan.steps.size() << " steps, "
              << asmplan::count_tool_exchanges(result.plan) << " tool exchanges, cost "
              << result.plan.total_cost << ", tree " << result.tree_index << ", "
              << result.plan.cut_history.size() << " cuts, " << result.wall_seconds << " s\n";
    return write_file(out_path, asmplan::plan_to_json(result, scene));
}

int run_graph(const std::string& scene_path, const std::string& out_path, bool simplified,
              bool full, int tree_index) {
    asmplan::Scene scene = asmplan::load_scene(scene_path);
    auto violations = asmplan::validate_scene(scene);
    if (!violations.empty()) {
        for (const auto& msg : violations) std::cerr << msg << "\n";
        return 2;
    }
    auto db = asmplan::build_grasp_database_cached(scene, scene_path);
    auto graph = asmplan::build_graph_for_tree(scene, db, tree_index);
    for (const auto& d : graph.diagnostics) std::cerr << d << "\n";
    std::string dot =
        full ? asmplan::export_full_dot(graph) : asmplan::export_simplified_dot(graph);
    (void)simplified;
    return write_file(out_path, dot);
}

int run_validate(const std::string& scene_path) {
    asmplan::Scene scene = asmplan::load_scene(scene_path);
    auto violations = asmplan::validate_scene(scene);
    if (violations.empty()) {
        std::cout << "ok\n";
        return 0;
    }
    for (const auto& msg : violations) std::cout << msg << "\n";
    return 2;
}

int run_grasps(const std::string& scene_path, const std::string& part,
               const std::string& gripper, const std::string& out_path) {
    asmplan::Scene scene = asmplan::load_scene(scene_path);
    auto pit = scene.parts.find(part);
    if (pit == scene.parts.end()) {
        std::cerr << "unknown part '" << part << "'\n";
        return 2;
    }
    const asmplan::Gripper* gr = nullptr;
    for (const auto& g : scene.grippers)
        if (g.id == gripper) gr = &g;
    if (!gr) {
        std::cerr << "unknown gripper '" << gripper << "'\n";
        return 2;
    }
    asmplan::GraspDatabase db;
    db.entries[{part, gripper}] = asmplan::generate_grasps(pit->second, *gr, scene.sampling);
    std::cerr << db.entries[{part, gripper}].size() << " grasps\n";
    return write_file(out_path, asmplan::grasp_db_to_json(db));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grasp/assembly planner with tool exchange"};
    app.require_subcommand(1);

    std::string scene_path, out_path, part_id, gripper_id;
    long long seed = 0;
    int max_trees = -1, cut_budget = -1, tree_index = 0;
    bool simplified = false, full = false;

    auto* plan = app.add_subcommand("plan", "plan an assembly sequence");
    plan->add_option("--scene", scene_path, "scene JSON")->required();
    plan->add_option("--out", out_path, "plan JSON output")->required();
    auto* seed_opt = plan->add_option("--seed", seed, "RNG seed override");
    plan->add_option("--max-trees", max_trees, "solution trees to try");
    plan->add_option("--cut-budget", cut_budget, "edge cuts per tree");

    auto* graph = app.add_subcommand("graph", "export the assembly graph as DOT");
    graph->add_option("--scene", scene_path, "scene JSON")->required();
    graph->add_option("--out", out_path, "DOT output")->required();
    graph->add_option("--tree", tree_index, "solution tree index");
    auto* sflag = graph->add_flag("--simplified", simplified, "simplified view");
    auto* fflag = graph->add_flag("--full", full, "full view with grasp nodes");
    sflag->excludes(fflag);

    auto* validate = app.add_subcommand("validate", "validate a scene file");
    validate->add_option("--scene", scene_path, "scene JSON")->required();

    auto* grasps = app.add_subcommand("grasps", "export a grasp database entry");
    grasps->add_option("--scene", scene_path, "scene JSON")->required();
    grasps->add_option("--part", part_id, "part id")->required();
    grasps->add_option("--gripper", gripper_id, "gripper id")->required();
    grasps->add_option("--out", out_path, "grasp JSON output")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (plan->parsed())
            return run_plan(scene_path, out_path, seed, seed_opt->count() > 0, max_trees,
                            cut_budget);
        if (graph->parsed()) return run_graph(scene_path, out_path, simplified, full, tree_index);
        if (validate->parsed()) return run_validate(scene_path);
        if (grasps->parsed()) return run_grasps(scene_path, part_id, gripper_id, out_path);
    } catch (const asmplan::SceneError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 5;
    }
    return 1;
}
