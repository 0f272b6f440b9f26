#include "asmplan/grasp.hpp"

#include <algorithm>
#include <cmath>

namespace asmplan {

namespace {

constexpr double kAntiparallelTol = 1e-6;  // radians
constexpr double kAreaEps = 1e-12;

std::vector<Vec2> ensure_ccw(std::vector<Vec2> poly) {
    if (poly.size() >= 3 && polygon_area_2d(poly) < 0.0)
        std::reverse(poly.begin(), poly.end());
    return poly;
}

std::vector<Vec2> project_poly(const ConvexHull& hull, const HullFacet& facet,
                               const Vec3& origin, const Vec3& u, const Vec3& v) {
    std::vector<Vec2> poly;
    poly.reserve(facet.vertex_ids.size());
    for (int id : facet.vertex_ids) {
        Vec3 d = hull.points[id] - origin;
        poly.emplace_back(u.dot(d), v.dot(d));
    }
    return poly;
}

std::vector<Vec2> pad_corners_2d(const Vec3& contact, const Vec3& yg, const Vec3& zg,
                                 double pw, double pd, const Vec3& origin, const Vec3& u,
                                 const Vec3& v) {
    std::vector<Vec2> out;
    const double sy[4] = {1.0, -1.0, -1.0, 1.0};
    const double sz[4] = {1.0, 1.0, -1.0, -1.0};
    for (int k = 0; k < 4; ++k) {
        Vec3 c = contact + sy[k] * (pw / 2.0) * yg + sz[k] * (pd / 2.0) * zg - origin;
        out.emplace_back(u.dot(c), v.dot(c));
    }
    return out;
}

double pad_face_area(const std::vector<Vec2>& face_ccw, const std::vector<Vec2>& pad) {
    auto clipped = convex_clip(pad, face_ccw);
    if (clipped.size() < 3) return 0.0;
    return std::abs(polygon_area_2d(clipped));
}

}  // namespace

std::vector<std::string> Gripper::validate() const {
    std::vector<std::string> violations;
    if (min_width < 0.0) violations.push_back("gripper '" + id + "': min_width < 0");
    if (max_width <= min_width) violations.push_back("gripper '" + id + "': max_width <= min_width");
    if (pad_width <= 0.0 || pad_depth <= 0.0)
        violations.push_back("gripper '" + id + "': pad dimensions must be > 0");
    if (finger_depth <= 0.0) violations.push_back("gripper '" + id + "': finger_depth must be > 0");
    if (palm_clearance < 0.0) violations.push_back("gripper '" + id + "': palm_clearance < 0");
    return violations;
}

const std::vector<GraspPose>& GraspDatabase::lookup(const std::string& part_id,
                                                    const std::string& gripper_id) const {
    static const std::vector<GraspPose> empty;
    auto it = entries.find({part_id, gripper_id});
    return it == entries.end() ? empty : it->second;
}

std::vector<AttachedHull> gripper_body_hulls(const Gripper& g, double width) {
    const double hw = width / 2.0;
    const double py = g.pad_width / 2.0;
    const double z_tip = g.pad_depth / 2.0;
    const double z_root = -g.pad_depth / 2.0 - g.palm_clearance;
    std::vector<AttachedHull> body;
    body.push_back({CollisionHull::box(Vec3(hw, -py, z_root), Vec3(hw + g.finger_depth, py, z_tip)),
                    Pose::identity()});
    body.push_back({CollisionHull::box(Vec3(-hw - g.finger_depth, -py, z_root), Vec3(-hw, py, z_tip)),
                    Pose::identity()});
    body.push_back({CollisionHull::box(Vec3(-hw - g.finger_depth, -py, z_root - g.finger_depth),
                                       Vec3(hw + g.finger_depth, py, z_root)),
                    Pose::identity()});
    return body;
}

std::vector<GraspPose> generate_grasps(const Part& part, const Gripper& gripper,
                                       const GraspSampling& sampling) {
    std::vector<GraspPose> grasps;
    ConvexHull hull = convex_hull(part.vertices);
    const double cos_anti = std::cos(M_PI - kAntiparallelTol);
    const int nf = static_cast<int>(hull.facets.size());

    for (int f1 = 0; f1 < nf; ++f1) {
        for (int f2 = f1 + 1; f2 < nf; ++f2) {
            const HullFacet& a = hull.facets[f1];
            const HullFacet& b = hull.facets[f2];
            if (a.normal.dot(b.normal) > cos_anti) continue;
            const Vec3 axis = a.normal;  // grasp axis, finger 1 contacts facet f1
            const double d = a.offset - axis.dot(hull.points[b.vertex_ids[0]]);
            if (d < gripper.min_width - 1e-12 || d > gripper.max_width + 1e-12) continue;
            if (d <= 0.0) continue;

            auto [u, v] = plane_basis(axis);
            const Vec3 origin = hull.points[a.vertex_ids[0]];
            auto poly1 = project_poly(hull, a, origin, u, v);
            auto poly2 = ensure_ccw(project_poly(hull, b, origin, u, v));
            auto overlap = ensure_ccw(convex_clip(poly2, poly1));
            if (overlap.size() < 3 || std::abs(polygon_area_2d(overlap)) < kAreaEps) continue;

            // Contact samples: overlap centroid first, then an interior grid.
            std::vector<Vec2> samples;
            Vec2 centroid = Vec2::Zero();
            for (const auto& p : overlap) centroid += p;
            centroid /= static_cast<double>(overlap.size());
            samples.push_back(centroid);
            Vec2 lo = overlap[0], hi = overlap[0];
            for (const auto& p : overlap) {
                lo = lo.cwiseMin(p);
                hi = hi.cwiseMax(p);
            }
            for (double x = lo.x() + sampling.spacing / 2.0; x < hi.x(); x += sampling.spacing)
                for (double y = lo.y() + sampling.spacing / 2.0; y < hi.y(); y += sampling.spacing) {
                    Vec2 s(x, y);
                    if ((s - centroid).norm() < 1e-12) continue;
                    if (convex_polygon_inset_distance(overlap, s) >= 1e-9) samples.push_back(s);
                }

            const Vec3 z0 = u;  // roll-0 approach reference
            for (const Vec2& s : samples) {
                Vec3 contact1 = origin + s.x() * u + s.y() * v;
                Vec3 center = contact1 - axis * (d / 2.0);
                for (int r = 0; r < sampling.rolls; ++r) {
                    const double roll = 2.0 * M_PI * r / sampling.rolls;
                    Vec3 zg = std::cos(roll) * z0 + std::sin(roll) * axis.cross(z0);
                    Vec3 yg = zg.cross(axis);
                    // Projections along the axis coincide for both contacts, so
                    // one pad footprint serves both face checks.
                    auto pad = pad_corners_2d(contact1, yg, zg, gripper.pad_width,
                                              gripper.pad_depth, origin, u, v);
                    if (pad_face_area(poly1, pad) < kAreaEps) continue;
                    if (pad_face_area(poly2, pad) < kAreaEps) continue;

                    GraspPose g;
                    g.part_id = part.id;
                    g.gripper_id = gripper.id;
                    g.jaw_width = d;
                    g.wrist_pose.rotation.col(0) = axis;
                    g.wrist_pose.rotation.col(1) = yg;
                    g.wrist_pose.rotation.col(2) = zg;
                    g.wrist_pose.translation = center;
                    grasps.push_back(std::move(g));
                }
            }
        }
    }
    return grasps;
}

double stability_index(const GraspPose& grasp, const Part& part, const Gripper& gripper) {
    ConvexHull hull = convex_hull(part.vertices);
    const Vec3 axis = grasp.wrist_pose.rotation.col(0);
    const Vec3 yg = grasp.wrist_pose.rotation.col(1);
    const Vec3 zg = grasp.wrist_pose.rotation.col(2);
    const double cos_tol = std::cos(kAntiparallelTol);

    double min_area = std::numeric_limits<double>::infinity();
    for (double side : {1.0, -1.0}) {
        const Vec3 dir = side * axis;
        const Vec3 contact = grasp.wrist_pose.translation + dir * (grasp.jaw_width / 2.0);
        const HullFacet* face = nullptr;
        for (const auto& f : hull.facets) {
            if (f.normal.dot(dir) < cos_tol) continue;
            if (std::abs(f.normal.dot(contact) - f.offset) > 1e-6) continue;
            face = &f;
            break;
        }
        if (!face) throw NoContact("stability_index: no part face under finger");
        auto [u, v] = plane_basis(face->normal);
        const Vec3 origin = hull.points[face->vertex_ids[0]];
        auto poly = ensure_ccw(project_poly(hull, *face, origin, u, v));
        auto pad = pad_corners_2d(contact, yg, zg, gripper.pad_width, gripper.pad_depth,
                                  origin, u, v);
        double area = pad_face_area(poly, pad);
        if (area < kAreaEps) throw NoContact("stability_index: empty pad contact");
        min_area = std::min(min_area, area);
    }
    return min_area;
}

FilteredGraspSet filter_grasps_at(const Assembly& assembly, const Pose& world,
                                  const PlacementPose& placement, const Gripper& gripper,
                                  const GraspDatabase& db, const GraspCheckers& checkers) {
    FilteredGraspSet out;
    out.placement = placement;
    out.gripper_id = gripper.id;
    for (std::size_t i = 0; i < assembly.parts.size(); ++i) {
        const std::string& part_id = assembly.parts[i];
        const Pose part_world = world.compose(assembly.part_pose(i));
        const auto& entries = db.lookup(part_id, gripper.id);
        for (int k = 0; k < static_cast<int>(entries.size()); ++k) {
            const GraspPose& g = entries[k];
            Pose wrist_world = part_world.compose(g.wrist_pose);
            if (checkers.reachable && !checkers.reachable(wrist_world)) continue;
            if (checkers.collides &&
                checkers.collides(gripper_body_hulls(gripper, g.jaw_width), wrist_world, part_id))
                continue;
            out.grasps.push_back({GraspRef{part_id, k}, g, wrist_world});
        }
    }
    return out;
}

FilteredGraspSet filter_grasps(const Assembly& assembly, const PlacementPose& placement,
                               const Gripper& gripper, const GraspDatabase& db,
                               const PartsDb& parts_db, const Workspace& workspace,
                               const GraspCheckers& checkers) {
    Pose world = placement_pose_to_world(placement, assembly, parts_db, workspace);
    return filter_grasps_at(assembly, world, placement, gripper, db, checkers);
}

bool default_reachability(const Pose& wrist_world, const Workspace& workspace,
                          const ReachParams& params) {
    const Vec3& p = wrist_world.translation;
    double r = (p - params.center).norm();
    if (r < params.r_min || r > params.r_max) return false;
    double z = p.z() - workspace.table_height;
    if (z < params.z_min || z > params.z_max) return false;
    // Approach axis points from palm to fingertips; vertical approach is -z.
    double c = wrist_world.rotation.col(2).dot(Vec3(0.0, 0.0, -1.0));
    return std::acos(std::clamp(c, -1.0, 1.0)) <= params.max_tilt + 1e-12;
}

}  // namespace asmplan
