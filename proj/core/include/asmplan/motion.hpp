#pragma once

#include "asmplan/geometry.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace asmplan {

struct InvalidQuery : std::runtime_error {
    explicit InvalidQuery(const std::string& what) : std::runtime_error(what) {}
};

/// Convex collision body: local vertices plus the unique face normals and edge
/// directions needed for separating-axis tests.
struct CollisionHull {
    std::vector<Vec3> vertices;
    std::vector<Vec3> face_normals;  // unit, deduplicated up to sign
    std::vector<Vec3> edge_dirs;     // unit, deduplicated up to sign

    static CollisionHull from_hull(const ConvexHull& hull);
    static CollisionHull from_points(const std::vector<Vec3>& points);
    static CollisionHull box(const Vec3& lo, const Vec3& hi);
};

/// Exact convex-convex intersection test. Contact is not collision: bodies
/// separated or touching within tol (1e-9 m penetration) do not collide.
bool collide(const CollisionHull& a, const Pose& pose_a, const CollisionHull& b,
             const Pose& pose_b, double tol = 1e-9);

/// A hull carried rigidly at a fixed offset from the moving frame.
struct AttachedHull {
    CollisionHull hull;
    Pose offset;  // hull frame relative to the moving (wrist) frame
};

bool collide_any(const std::vector<AttachedHull>& moving, const Pose& frame,
                 const std::vector<CollisionHull>& obstacles, double tol = 1e-9);

/// Hull with its vertices and axis directions baked into a new frame.
CollisionHull transformed(const CollisionHull& hull, const Pose& pose);

struct MotionConfig {
    double resolution = 0.005;      // collision stepping, meters
    double rot_resolution = 0.05;   // collision stepping, radians
    int node_limit = 5000;
    double goal_bias = 0.1;
    double step_pos = 0.03;         // RRT extension step, meters
    double step_rot = 0.3;          // RRT extension step, radians
    std::uint64_t seed = 0;
    Vec3 bounds_min = Vec3(-1.0, -1.0, -0.5);
    Vec3 bounds_max = Vec3(1.0, 1.0, 1.0);
};

/// One free-flyer feasibility query: the moving set (gripper bodies plus any
/// rigidly attached assembly hulls) travels from start to goal among static
/// obstacles. Start and goal are expected to be collision-free.
struct MotionQuery {
    Pose start;
    Pose goal;
    std::vector<AttachedHull> moving;
    std::vector<CollisionHull> obstacles;  // world frame
};

struct MotionTrace {
    std::vector<Pose> waypoints;
    double resolution = 0.0;
};

/// Geodesic interpolation between rigid poses (position lerp, rotation slerp).
Pose interpolate_pose(const Pose& a, const Pose& b, double t);
double rotation_angle_between(const Mat3& a, const Mat3& b);

/// Straight-line check first, then a goal-biased RRT over SE(3). Deterministic
/// for a fixed config (the RRT owns an RNG seeded from config.seed). Returns
/// nullopt when no solution is found within the node limit. Throws
/// InvalidQuery if start or goal collides.
std::optional<MotionTrace> check_edge(const MotionQuery& query, const MotionConfig& config);

/// True when every interpolated configuration along the segment is free.
bool segment_free(const MotionQuery& query, const Pose& a, const Pose& b,
                  double resolution, double rot_resolution);

}  // namespace asmplan
