// Shared construction helpers for tests: box parts, tiny scenes, graphs.
#pragma once

#include "asmplan/planner.hpp"
#include "asmplan/scene.hpp"

#include <string>

namespace asmplan::testing {

std::vector<Vec3> box_vertices(const Vec3& half);
Part box_part(const std::string& id, const Vec3& half, double mass = 0.1,
              const Vec3& cog = Vec3::Zero());

std::string scene_path(const std::string& name);
Scene load_test_scene(const std::string& name);

/// Accept-everything checkers.
GraspCheckers permissive_checkers();

/// Grasp database plus graph for a scene's first (or given) solution tree.
struct BuiltScene {
    Scene scene;
    GraspDatabase db;
    AssemblyGraph graph;
};
BuiltScene build_scene_graph(const std::string& name, int tree_index = 0);

}  // namespace asmplan::testing
