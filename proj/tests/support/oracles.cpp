#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace asmplan::testing {

bool all_points_on_or_inside(const ConvexHull& hull, const std::vector<Vec3>& points,
                             double tol) {
    for (const auto& f : hull.facets) {
        if (f.vertex_ids.size() < 3) return false;
        const Vec3& a = hull.points[f.vertex_ids[0]];
        const Vec3& b = hull.points[f.vertex_ids[1]];
        const Vec3& c = hull.points[f.vertex_ids[2]];
        Vec3 n = (b - a).cross(c - a);
        double len = n.norm();
        if (len < 1e-15) return false;
        n /= len;
        for (const auto& p : points)
            if (n.dot(p - a) > tol) return false;
    }
    return true;
}

std::vector<Vec3> cuboid_stable_downs(const Vec3& half, const Vec3& cog, double margin) {
    std::vector<Vec3> downs;
    for (int axis = 0; axis < 3; ++axis) {
        for (double sign : {1.0, -1.0}) {
            int u = (axis + 1) % 3, v = (axis + 2) % 3;
            bool ok = std::abs(cog[u]) <= half[u] - margin &&
                      std::abs(cog[v]) <= half[v] - margin;
            if (ok) {
                Vec3 n = Vec3::Zero();
                n[axis] = sign;
                downs.push_back(n);
            }
        }
    }
    return downs;
}

bool support_contains(const ConvexHull& hull, int facet_id, const Vec3& cog, double margin) {
    const HullFacet& f = hull.facets.at(facet_id);
    const Vec3 n = f.normal;
    // Drop the CoG along -n onto the facet plane.
    const Vec3& a0 = hull.points[f.vertex_ids[0]];
    Vec3 p = cog - n * n.dot(cog - a0);
    const std::size_t m = f.vertex_ids.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Vec3& a = hull.points[f.vertex_ids[i]];
        const Vec3& b = hull.points[f.vertex_ids[(i + 1) % m]];
        Vec3 edge = b - a;
        double len = edge.norm();
        if (len < 1e-15) continue;
        // Signed inward distance of p from the edge line, in the facet plane.
        double d = edge.cross(p - a).dot(n) / len;
        if (d < margin) return false;
    }
    return true;
}

namespace {

std::vector<Vec2> hull_2d(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec2& a, const Vec2& b) { return (a - b).norm() < 1e-12; }),
              pts.end());
    if (pts.size() < 3) return pts;
    auto cross = [](const Vec2& o, const Vec2& a, const Vec2& b) {
        return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
    };
    std::vector<Vec2> h(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
        h[k++] = p;
    }
    std::size_t lower = k + 1;
    for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
        while (k >= lower && cross(h[k - 2], h[k - 1], *it) <= 0) --k;
        h[k++] = *it;
    }
    h.resize(k - 1);
    return h;
}

bool point_in_convex(const std::vector<Vec2>& poly, const Vec2& p, double tol = 1e-12) {
    const std::size_t m = poly.size();
    double ref = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % m];
        double c = (b.x() - a.x()) * (p.y() - a.y()) - (b.y() - a.y()) * (p.x() - a.x());
        if (std::abs(c) <= tol) continue;
        if (ref == 0.0)
            ref = c;
        else if ((c > 0) != (ref > 0))
            return false;
    }
    return true;
}

std::optional<Vec2> segment_intersection(const Vec2& p1, const Vec2& p2, const Vec2& q1,
                                         const Vec2& q2) {
    Vec2 r = p2 - p1, s = q2 - q1;
    double denom = r.x() * s.y() - r.y() * s.x();
    if (std::abs(denom) < 1e-15) return std::nullopt;
    Vec2 qp = q1 - p1;
    double t = (qp.x() * s.y() - qp.y() * s.x()) / denom;
    double u = (qp.x() * r.y() - qp.y() * r.x()) / denom;
    if (t < -1e-12 || t > 1.0 + 1e-12 || u < -1e-12 || u > 1.0 + 1e-12) return std::nullopt;
    return p1 + t * r;
}

}  // namespace

double polygon_intersection_area(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
    std::vector<Vec2> candidates;
    for (const auto& p : a)
        if (point_in_convex(b, p)) candidates.push_back(p);
    for (const auto& p : b)
        if (point_in_convex(a, p)) candidates.push_back(p);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            auto hit = segment_intersection(a[i], a[(i + 1) % a.size()], b[j],
                                            b[(j + 1) % b.size()]);
            if (hit) candidates.push_back(*hit);
        }
    auto hull = hull_2d(std::move(candidates));
    if (hull.size() < 3) return 0.0;
    return std::abs(polygon_area_2d(hull));
}

std::optional<double> shortest_path_exhaustive(const SearchGraph& g,
                                               const std::vector<int>& roots,
                                               const std::vector<int>& goals) {
    const int n = static_cast<int>(g.adj.size());
    std::vector<bool> is_goal(n, false);
    for (int gl : goals) is_goal[gl] = true;
    std::optional<double> best;
    std::vector<bool> visited(n, false);
    std::function<void(int, double)> dfs = [&](int u, double cost) {
        if (best && cost >= *best) return;
        if (is_goal[u]) {
            if (!best || cost < *best) best = cost;
            return;
        }
        visited[u] = true;
        for (const auto& e : g.adj[u]) {
            if (visited[e.to]) continue;
            dfs(e.to, cost + e.cost);
        }
        visited[u] = false;
    };
    for (int r : roots) dfs(r, 0.0);
    return best;
}

std::optional<double> shortest_path_relaxation(const SearchGraph& g,
                                               const std::vector<int>& roots,
                                               const std::vector<int>& goals) {
    const int n = static_cast<int>(g.adj.size());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, inf);
    for (int r : roots) dist[r] = 0.0;
    for (int pass = 0; pass < n; ++pass) {
        bool changed = false;
        for (int u = 0; u < n; ++u) {
            if (dist[u] == inf) continue;
            for (const auto& e : g.adj[u])
                if (dist[u] + e.cost < dist[e.to]) {
                    dist[e.to] = dist[u] + e.cost;
                    changed = true;
                }
        }
        if (!changed) break;
    }
    double best = inf;
    for (int gl : goals) best = std::min(best, dist[gl]);
    if (best == inf) return std::nullopt;
    return best;
}

bool trace_collision_free(const std::vector<AttachedHull>& moving,
                          const std::vector<CollisionHull>& obstacles, const MotionTrace& trace,
                          double rot_resolution, int factor) {
    if (trace.waypoints.empty()) return true;
    const double res = trace.resolution / factor;
    const double rot_res = rot_resolution / factor;
    for (std::size_t i = 0; i + 1 < trace.waypoints.size(); ++i) {
        const Pose& a = trace.waypoints[i];
        const Pose& b = trace.waypoints[i + 1];
        double dist = (b.translation - a.translation).norm();
        double angle = rotation_angle_between(a.rotation, b.rotation);
        int steps = std::max(1, static_cast<int>(std::ceil(
                                    std::max(dist / res, angle / rot_res))));
        for (int s = 0; s <= steps; ++s) {
            Pose p = interpolate_pose(a, b, static_cast<double>(s) / steps);
            if (collide_any(moving, p, obstacles)) return false;
        }
    }
    return true;
}

}  // namespace asmplan::testing
