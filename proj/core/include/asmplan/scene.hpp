#pragma once

#include "asmplan/andor.hpp"
#include "asmplan/asmgraph.hpp"
#include "asmplan/grasp.hpp"
#include "asmplan/motion.hpp"

#include <map>
#include <string>
#include <vector>

namespace asmplan {

struct SceneError : std::runtime_error {
    explicit SceneError(const std::string& what) : std::runtime_error(what) {}
};

/// Everything a planning run consumes, aggregated from one scene file.
struct Scene {
    std::string name;
    PartsDb parts;
    std::vector<Gripper> grippers;
    Workspace workspace;
    AndOrGraph andor;
    CostConfig costs;
    MotionConfig motion;
    GraspSampling sampling;
    ReachParams reach;
    std::vector<double> yaw_set = {0.0, M_PI_2, M_PI, 3.0 * M_PI_2};
    std::vector<CollisionHull> obstacles;            // static extras (walls etc.)
    std::map<std::string, Vec3> initial_downs;       // optional: facet normal placed down
    std::map<std::string, double> initial_yaws;      // optional per-part override
    int max_trees = 16;
    int cut_budget = 50;
    double approach_dist = 0.05;  // final fitting approach length
    double retreat_dist = 0.08;

    /// Table top as a collision body (large slab under z = table_height).
    CollisionHull table_hull() const;
    /// Initial placement of a leaf part: the stable facet whose outward normal
    /// is closest to the configured down direction (part-frame -z by default),
    /// at the configured yaw (0 by default).
    PlacementPose initial_placement(const std::string& part_id) const;
};

Scene load_scene(const std::string& path);
Scene parse_scene(const std::string& json_text);

/// Runs all module validators and aggregates their findings.
std::vector<std::string> validate_scene(const Scene& scene);

/// Generates (or loads from the sidecar cache next to `scene_path`, keyed by a
/// content hash of parts, grippers, and sampling) the full grasp database.
GraspDatabase build_grasp_database(const Scene& scene);
GraspDatabase build_grasp_database_cached(const Scene& scene, const std::string& scene_path);

std::string grasp_db_to_json(const GraspDatabase& db);
GraspDatabase grasp_db_from_json(const std::string& json_text);

}  // namespace asmplan
