#include "asmplan/motion.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace asmplan {

namespace {

void push_unique_dir(std::vector<Vec3>& dirs, Vec3 d, double tol = 1e-9) {
    double len = d.norm();
    if (len < tol) return;
    d /= len;
    for (const auto& e : dirs)
        if (std::abs(e.dot(d)) > 1.0 - 1e-9) return;
    dirs.push_back(d);
}

void project(const std::vector<Vec3>& verts, const Pose& pose, const Vec3& axis, double& lo,
             double& hi) {
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (const auto& v : verts) {
        double d = axis.dot(pose.apply(v));
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
}

}  // namespace

CollisionHull CollisionHull::from_hull(const ConvexHull& hull) {
    CollisionHull out;
    for (int id : hull.vertex_ids) out.vertices.push_back(hull.points[id]);
    for (const auto& f : hull.facets) {
        push_unique_dir(out.face_normals, f.normal);
        const auto& ids = f.vertex_ids;
        for (std::size_t i = 0; i < ids.size(); ++i)
            push_unique_dir(out.edge_dirs,
                            hull.points[ids[(i + 1) % ids.size()]] - hull.points[ids[i]]);
    }
    return out;
}

CollisionHull CollisionHull::from_points(const std::vector<Vec3>& points) {
    return from_hull(convex_hull(points));
}

CollisionHull CollisionHull::box(const Vec3& lo, const Vec3& hi) {
    std::vector<Vec3> pts;
    for (int i = 0; i < 8; ++i)
        pts.emplace_back(i & 1 ? hi.x() : lo.x(), i & 2 ? hi.y() : lo.y(),
                         i & 4 ? hi.z() : lo.z());
    CollisionHull out;
    out.vertices = std::move(pts);
    out.face_normals = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
    out.edge_dirs = out.face_normals;
    return out;
}

bool collide(const CollisionHull& a, const Pose& pose_a, const CollisionHull& b,
             const Pose& pose_b, double tol) {
    std::vector<Vec3> axes;
    for (const auto& n : a.face_normals) axes.push_back(pose_a.rotation * n);
    for (const auto& n : b.face_normals) axes.push_back(pose_b.rotation * n);
    for (const auto& ea : a.edge_dirs)
        for (const auto& eb : b.edge_dirs) {
            Vec3 c = (pose_a.rotation * ea).cross(pose_b.rotation * eb);
            double len = c.norm();
            if (len > 1e-9) axes.push_back(c / len);
        }
    for (const auto& axis : axes) {
        double alo, ahi, blo, bhi;
        project(a.vertices, pose_a, axis, alo, ahi);
        project(b.vertices, pose_b, axis, blo, bhi);
        double overlap = std::min(ahi, bhi) - std::max(alo, blo);
        if (overlap <= tol) return false;  // separated or merely touching
    }
    return true;
}

bool collide_any(const std::vector<AttachedHull>& moving, const Pose& frame,
                 const std::vector<CollisionHull>& obstacles, double tol) {
    for (const auto& m : moving) {
        Pose world = frame.compose(m.offset);
        for (const auto& obs : obstacles)
            if (collide(m.hull, world, obs, Pose::identity(), tol)) return true;
    }
    return false;
}

CollisionHull transformed(const CollisionHull& hull, const Pose& pose) {
    CollisionHull out;
    out.vertices.reserve(hull.vertices.size());
    for (const auto& v : hull.vertices) out.vertices.push_back(pose.apply(v));
    out.face_normals.reserve(hull.face_normals.size());
    for (const auto& n : hull.face_normals) out.face_normals.push_back(pose.rotation * n);
    out.edge_dirs.reserve(hull.edge_dirs.size());
    for (const auto& e : hull.edge_dirs) out.edge_dirs.push_back(pose.rotation * e);
    return out;
}

Pose interpolate_pose(const Pose& a, const Pose& b, double t) {
    Eigen::Quaterniond qa(a.rotation), qb(b.rotation);
    Pose out;
    out.rotation = qa.slerp(t, qb).toRotationMatrix();
    out.translation = (1.0 - t) * a.translation + t * b.translation;
    return out;
}

double rotation_angle_between(const Mat3& a, const Mat3& b) {
    return Eigen::AngleAxisd(a.transpose() * b).angle();
}

bool segment_free(const MotionQuery& query, const Pose& a, const Pose& b, double resolution,
                  double rot_resolution) {
    double dist = (b.translation - a.translation).norm();
    double angle = rotation_angle_between(a.rotation, b.rotation);
    int steps = std::max(1, static_cast<int>(std::ceil(
                                std::max(dist / resolution, angle / rot_resolution))));
    for (int s = 0; s <= steps; ++s) {
        Pose p = interpolate_pose(a, b, static_cast<double>(s) / steps);
        if (collide_any(query.moving, p, query.obstacles)) return false;
    }
    return true;
}

namespace {

struct FlyerNode {
    Pose pose;
    int parent;
};

double flyer_distance(const Pose& a, const Pose& b, double rot_weight) {
    return (a.translation - b.translation).norm() +
           rot_weight * rotation_angle_between(a.rotation, b.rotation);
}

Pose steer(const Pose& from, const Pose& to, double step_pos, double step_rot) {
    double dist = (to.translation - from.translation).norm();
    double angle = rotation_angle_between(from.rotation, to.rotation);
    double t = 1.0;
    if (dist > step_pos) t = std::min(t, step_pos / dist);
    if (angle > step_rot) t = std::min(t, step_rot / angle);
    return interpolate_pose(from, to, t);
}

Mat3 random_rotation(std::mt19937_64& rng) {
    // Shoemake's uniform quaternion sampling.
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double u1 = uni(rng), u2 = uni(rng), u3 = uni(rng);
    double s1 = std::sqrt(1.0 - u1), s2 = std::sqrt(u1);
    Eigen::Quaterniond q(s2 * std::cos(2.0 * M_PI * u3), s1 * std::sin(2.0 * M_PI * u2),
                         s1 * std::cos(2.0 * M_PI * u2), s2 * std::sin(2.0 * M_PI * u3));
    return q.normalized().toRotationMatrix();
}

}  // namespace

std::optional<MotionTrace> check_edge(const MotionQuery& query, const MotionConfig& config) {
    if (collide_any(query.moving, query.start, query.obstacles))
        throw InvalidQuery("check_edge: start pose in collision");
    if (collide_any(query.moving, query.goal, query.obstacles))
        throw InvalidQuery("check_edge: goal pose in collision");

    MotionTrace trace;
    trace.resolution = config.resolution;
    if (segment_free(query, query.start, query.goal, config.resolution, config.rot_resolution)) {
        trace.waypoints = {query.start, query.goal};
        return trace;
    }

    const double rot_weight = config.step_pos / config.step_rot;
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    std::vector<FlyerNode> nodes;
    nodes.push_back({query.start, -1});
    for (int it = 0; it < config.node_limit; ++it) {
        Pose sample;
        if (uni(rng) < config.goal_bias) {
            sample = query.goal;
        } else {
            for (int k = 0; k < 3; ++k)
                sample.translation[k] =
                    config.bounds_min[k] + uni(rng) * (config.bounds_max[k] - config.bounds_min[k]);
            sample.rotation = random_rotation(rng);
        }
        int nearest = 0;
        double best = flyer_distance(nodes[0].pose, sample, rot_weight);
        for (int i = 1; i < static_cast<int>(nodes.size()); ++i) {
            double d = flyer_distance(nodes[i].pose, sample, rot_weight);
            if (d < best) { best = d; nearest = i; }
        }
        Pose next = steer(nodes[nearest].pose, sample, config.step_pos, config.step_rot);
        if (!segment_free(query, nodes[nearest].pose, next, config.resolution,
                          config.rot_resolution))
            continue;
        nodes.push_back({next, nearest});
        int added = static_cast<int>(nodes.size()) - 1;
        // Attempt a direct goal connection whenever the new node is close.
        if (flyer_distance(next, query.goal, rot_weight) <=
                2.0 * (config.step_pos + rot_weight * config.step_rot) &&
            segment_free(query, next, query.goal, config.resolution, config.rot_resolution)) {
            std::vector<Pose> reversed{query.goal};
            for (int cur = added; cur >= 0; cur = nodes[cur].parent)
                reversed.push_back(nodes[cur].pose);
            trace.waypoints.assign(reversed.rbegin(), reversed.rend());
            return trace;
        }
    }
    return std::nullopt;
}

}  // namespace asmplan
