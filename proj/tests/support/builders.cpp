#include "builders.hpp"

namespace asmplan::testing {

std::vector<Vec3> box_vertices(const Vec3& half) {
    std::vector<Vec3> v;
    for (int i = 0; i < 8; ++i)
        v.emplace_back((i & 1 ? 1 : -1) * half.x(), (i & 2 ? 1 : -1) * half.y(),
                       (i & 4 ? 1 : -1) * half.z());
    return v;
}

Part box_part(const std::string& id, const Vec3& half, double mass, const Vec3& cog) {
    return Part{id, box_vertices(half), mass, cog};
}

std::string scene_path(const std::string& name) {
    return std::string(ASMPLAN_SCENE_DIR) + "/" + name;
}

Scene load_test_scene(const std::string& name) { return load_scene(scene_path(name)); }

GraspCheckers permissive_checkers() {
    GraspCheckers c;
    c.reachable = [](const Pose&) { return true; };
    c.collides = [](const std::vector<AttachedHull>&, const Pose&, const std::string&) {
        return false;
    };
    return c;
}

BuiltScene build_scene_graph(const std::string& name, int tree_index) {
    BuiltScene out{load_test_scene(name), {}, {}};
    out.db = build_grasp_database(out.scene);
    out.graph = build_graph_for_tree(out.scene, out.db, tree_index);
    return out;
}

}  // namespace asmplan::testing
