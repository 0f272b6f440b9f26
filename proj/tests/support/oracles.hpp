// Independent oracles used by the test suites. Each deliberately takes a
// different computational route than the library code it checks.
#pragma once

#include "asmplan/asmgraph.hpp"
#include "asmplan/geometry.hpp"
#include "asmplan/motion.hpp"

#include <optional>
#include <vector>

namespace asmplan::testing {

/// Brute-force hull containment: recomputes each facet plane from its own
/// boundary vertices and checks every point's signed distance.
bool all_points_on_or_inside(const ConvexHull& hull, const std::vector<Vec3>& points,
                             double tol = 1e-9);

/// Analytic stability of an axis-aligned cuboid (extents, cog in body frame):
/// the set of outward facet normals the cuboid can rest on.
std::vector<Vec3> cuboid_stable_downs(const Vec3& half_extents, const Vec3& cog,
                                      double margin = 1e-4);

/// Support-polygon containment computed with 3D cross products only (no 2D
/// basis): the CoG's gravity line must pierce the facet with `margin`.
bool support_contains(const ConvexHull& hull, int facet_id, const Vec3& cog,
                      double margin = 1e-4);

/// Convex polygon intersection area via candidate-vertex collection and a 2D
/// hull, instead of half-plane clipping.
double polygon_intersection_area(const std::vector<Vec2>& a, const std::vector<Vec2>& b);

/// Exhaustive least-cost path over all simple paths (small graphs only).
std::optional<double> shortest_path_exhaustive(const SearchGraph& g,
                                               const std::vector<int>& roots,
                                               const std::vector<int>& goals);

/// Bellman-Ford style matrix relaxation.
std::optional<double> shortest_path_relaxation(const SearchGraph& g,
                                               const std::vector<int>& roots,
                                               const std::vector<int>& goals);

/// Re-checks a motion trace at `factor` times finer stepping.
bool trace_collision_free(const std::vector<AttachedHull>& moving,
                          const std::vector<CollisionHull>& obstacles, const MotionTrace& trace,
                          double rot_resolution, int factor = 10);

}  // namespace asmplan::testing
