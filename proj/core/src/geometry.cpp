#include "asmplan/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace asmplan {

namespace {

struct Tri {
    int a, b, c;
    Vec3 n;        // unit outward normal
    double off;    // plane: n.x = off
    bool alive = true;
};

Vec3 tri_normal(const Vec3& a, const Vec3& b, const Vec3& c) {
    return (b - a).cross(c - a);
}

double point_scale(const std::vector<Vec3>& pts) {
    Vec3 lo = pts.front(), hi = pts.front();
    for (const auto& p : pts) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return std::max((hi - lo).norm(), 1e-9);
}

}  // namespace

std::vector<std::string> Workspace::validate() const {
    std::vector<std::string> violations;
    if (grid_pitch <= 0.0) violations.push_back("workspace: grid_pitch must be > 0");
    if (escape_points.empty()) violations.push_back("workspace: escape area is empty");
    for (const auto& e : escape_points)
        if (e == assembly_point)
            violations.push_back("workspace: assembly_point lies in the escape area");
    std::set<GridPoint> seen;
    for (const auto& [id, g] : initial_points) {
        if (g == assembly_point)
            violations.push_back("workspace: initial point of '" + id + "' is the assembly point");
        if (!seen.insert(g).second)
            violations.push_back("workspace: duplicate initial grid point for '" + id + "'");
    }
    return violations;
}

ConvexHull convex_hull(const std::vector<Vec3>& points, double merge_angle_tol) {
    if (points.size() < 4) throw DegenerateGeometry("convex_hull: fewer than 4 points");
    const double scale = point_scale(points);
    const double eps_deg = 1e-9 * scale;
    const double eps_vis = 1e-10 * std::max(scale, 1.0);

    // Initial simplex from extreme points, deterministically.
    const int n = static_cast<int>(points.size());
    int i0 = 0;
    for (int i = 1; i < n; ++i) {
        const Vec3 &p = points[i], &q = points[i0];
        if (std::tie(p.x(), p.y(), p.z()) < std::tie(q.x(), q.y(), q.z())) i0 = i;
    }
    int i1 = -1;
    double best = eps_deg;
    for (int i = 0; i < n; ++i) {
        double d = (points[i] - points[i0]).norm();
        if (d > best) { best = d; i1 = i; }
    }
    if (i1 < 0) throw DegenerateGeometry("convex_hull: all points coincide");
    int i2 = -1;
    best = eps_deg;
    Vec3 dir = (points[i1] - points[i0]).normalized();
    for (int i = 0; i < n; ++i) {
        Vec3 v = points[i] - points[i0];
        double d = (v - dir * dir.dot(v)).norm();
        if (d > best) { best = d; i2 = i; }
    }
    if (i2 < 0) throw DegenerateGeometry("convex_hull: points are collinear");
    int i3 = -1;
    best = eps_deg;
    Vec3 nrm = tri_normal(points[i0], points[i1], points[i2]).normalized();
    for (int i = 0; i < n; ++i) {
        double d = std::abs(nrm.dot(points[i] - points[i0]));
        if (d > best) { best = d; i3 = i; }
    }
    if (i3 < 0) throw DegenerateGeometry("convex_hull: points are coplanar");

    std::vector<Tri> tris;
    auto add_tri = [&](int a, int b, int c, const Vec3& inside) {
        Tri t{a, b, c, Vec3::Zero(), 0.0, true};
        Vec3 nn = tri_normal(points[a], points[b], points[c]);
        if (nn.dot(inside - points[a]) > 0.0) { std::swap(t.b, t.c); nn = -nn; }
        t.n = nn.normalized();
        t.off = t.n.dot(points[t.a]);
        tris.push_back(t);
    };
    Vec3 inside = (points[i0] + points[i1] + points[i2] + points[i3]) / 4.0;
    add_tri(i0, i1, i2, inside);
    add_tri(i0, i1, i3, inside);
    add_tri(i0, i2, i3, inside);
    add_tri(i1, i2, i3, inside);

    for (int p = 0; p < n; ++p) {
        if (p == i0 || p == i1 || p == i2 || p == i3) continue;
        std::vector<int> visible;
        for (int f = 0; f < static_cast<int>(tris.size()); ++f) {
            if (!tris[f].alive) continue;
            if (tris[f].n.dot(points[p]) - tris[f].off > eps_vis) visible.push_back(f);
        }
        if (visible.empty()) continue;

        // Horizon: directed edges of visible faces whose reverse is not on a
        // visible face.
        std::set<std::pair<int, int>> vis_edges;
        for (int f : visible) {
            const Tri& t = tris[f];
            vis_edges.insert({t.a, t.b});
            vis_edges.insert({t.b, t.c});
            vis_edges.insert({t.c, t.a});
        }
        std::vector<std::pair<int, int>> horizon;
        for (const auto& e : vis_edges)
            if (!vis_edges.count({e.second, e.first})) horizon.push_back(e);
        for (int f : visible) tris[f].alive = false;
        for (const auto& [u, v] : horizon) add_tri(u, v, p, inside);
    }

    // Merge coplanar adjacent triangles into polygonal facets.
    std::vector<int> live;
    for (int f = 0; f < static_cast<int>(tris.size()); ++f)
        if (tris[f].alive) live.push_back(f);

    std::map<std::pair<int, int>, int> edge_owner;  // directed edge -> live idx
    for (int li = 0; li < static_cast<int>(live.size()); ++li) {
        const Tri& t = tris[live[li]];
        edge_owner[{t.a, t.b}] = li;
        edge_owner[{t.b, t.c}] = li;
        edge_owner[{t.c, t.a}] = li;
    }
    std::vector<int> group(live.size(), -1);
    int n_groups = 0;
    const double cos_tol = std::cos(merge_angle_tol);
    for (int li = 0; li < static_cast<int>(live.size()); ++li) {
        if (group[li] >= 0) continue;
        group[li] = n_groups;
        std::vector<int> stack{li};
        while (!stack.empty()) {
            int cur = stack.back();
            stack.pop_back();
            const Tri& t = tris[live[cur]];
            for (auto [u, v] : {std::pair{t.a, t.b}, {t.b, t.c}, {t.c, t.a}}) {
                auto it = edge_owner.find({v, u});
                if (it == edge_owner.end()) continue;
                int nb = it->second;
                if (group[nb] >= 0) continue;
                if (t.n.dot(tris[live[nb]].n) >= cos_tol) {
                    group[nb] = n_groups;
                    stack.push_back(nb);
                }
            }
        }
        ++n_groups;
    }

    ConvexHull hull;
    hull.points = points;
    std::set<int> hull_verts;
    for (int g = 0; g < n_groups; ++g) {
        // Boundary of the group: directed edges whose reverse is outside it.
        std::map<int, int> next;  // boundary edge u -> v
        Vec3 nsum = Vec3::Zero();
        for (int li = 0; li < static_cast<int>(live.size()); ++li) {
            if (group[li] != g) continue;
            const Tri& t = tris[live[li]];
            nsum += tri_normal(points[t.a], points[t.b], points[t.c]);
            for (auto [u, v] : {std::pair{t.a, t.b}, {t.b, t.c}, {t.c, t.a}}) {
                auto it = edge_owner.find({v, u});
                if (it == edge_owner.end() || group[it->second] != g) next[u] = v;
            }
        }
        if (next.empty()) continue;
        HullFacet facet;
        int start = next.begin()->first;
        int cur = start;
        do {
            facet.vertex_ids.push_back(cur);
            auto it = next.find(cur);
            if (it == next.end()) throw DegenerateGeometry("convex_hull: open facet boundary");
            cur = it->second;
        } while (cur != start && facet.vertex_ids.size() <= next.size());
        facet.normal = nsum.normalized();
        double off = 0.0;
        for (int v : facet.vertex_ids) off += facet.normal.dot(points[v]);
        facet.offset = off / static_cast<double>(facet.vertex_ids.size());
        for (int v : facet.vertex_ids) hull_verts.insert(v);
        hull.facets.push_back(std::move(facet));
    }
    hull.vertex_ids.assign(hull_verts.begin(), hull_verts.end());
    return hull;
}

Vec3 ConvexHull::facet_centroid(int facet_id) const {
    const HullFacet& f = facets.at(facet_id);
    // Area centroid of the planar polygon via triangle fan.
    const Vec3& p0 = points[f.vertex_ids[0]];
    Vec3 acc = Vec3::Zero();
    double area = 0.0;
    for (std::size_t k = 1; k + 1 < f.vertex_ids.size(); ++k) {
        const Vec3& p1 = points[f.vertex_ids[k]];
        const Vec3& p2 = points[f.vertex_ids[k + 1]];
        double a = 0.5 * (p1 - p0).cross(p2 - p0).norm();
        acc += a * (p0 + p1 + p2) / 3.0;
        area += a;
    }
    if (area <= 0.0) {
        for (int v : f.vertex_ids) acc += points[v];
        return acc / static_cast<double>(f.vertex_ids.size());
    }
    return acc / area;
}

double ConvexHull::signed_distance(const Vec3& p) const {
    double d = -std::numeric_limits<double>::infinity();
    for (const auto& f : facets) d = std::max(d, f.normal.dot(p) - f.offset);
    return d;
}

Vec3 composite_cog(const Assembly& assembly, const PartsDb& parts_db) {
    Vec3 acc = Vec3::Zero();
    double total = 0.0;
    for (std::size_t i = 0; i < assembly.parts.size(); ++i) {
        auto it = parts_db.find(assembly.parts[i]);
        if (it == parts_db.end()) throw UnknownPart(assembly.parts[i]);
        const Part& part = it->second;
        acc += part.mass * assembly.part_pose(i).apply(part.cog);
        total += part.mass;
    }
    if (total <= 0.0) throw DegenerateGeometry("composite_cog: total mass is zero");
    return acc / total;
}

std::vector<Vec3> assembly_points(const Assembly& assembly, const PartsDb& parts_db) {
    std::vector<Vec3> pts;
    for (std::size_t i = 0; i < assembly.parts.size(); ++i) {
        auto it = parts_db.find(assembly.parts[i]);
        if (it == parts_db.end()) throw UnknownPart(assembly.parts[i]);
        Pose t = assembly.part_pose(i);
        for (const auto& v : it->second.vertices) pts.push_back(t.apply(v));
    }
    return pts;
}

ConvexHull assembly_hull(const Assembly& assembly, const PartsDb& parts_db) {
    return convex_hull(assembly_points(assembly, parts_db));
}

std::vector<int> stable_facets(const ConvexHull& hull, const Vec3& cog, double eps_stab) {
    std::vector<int> stable;
    for (int f = 0; f < static_cast<int>(hull.facets.size()); ++f) {
        const HullFacet& facet = hull.facets[f];
        auto [u, v] = plane_basis(facet.normal);
        Vec3 origin = hull.points[facet.vertex_ids[0]];
        std::vector<Vec2> poly;
        poly.reserve(facet.vertex_ids.size());
        for (int id : facet.vertex_ids) {
            Vec3 d = hull.points[id] - origin;
            poly.emplace_back(u.dot(d), v.dot(d));
        }
        Vec3 d = cog - origin;
        Vec2 proj(u.dot(d), v.dot(d));
        if (convex_polygon_inset_distance(poly, proj) >= eps_stab) stable.push_back(f);
    }
    return stable;
}

std::vector<int> stable_facets(const Assembly& assembly, const PartsDb& parts_db,
                               double eps_stab) {
    return stable_facets(assembly_hull(assembly, parts_db), composite_cog(assembly, parts_db),
                         eps_stab);
}

Pose placement_pose_to_world(const PlacementPose& placement, const ConvexHull& hull,
                             const Vec3& cog, const Workspace& workspace, double eps_stab) {
    auto stable = stable_facets(hull, cog, eps_stab);
    if (std::find(stable.begin(), stable.end(), placement.facet_id) == stable.end())
        throw InvalidFacet("placement facet " + std::to_string(placement.facet_id) +
                           " is not stable");
    const HullFacet& facet = hull.facets.at(placement.facet_id);
    const Vec3 down(0.0, 0.0, -1.0);
    Vec3 n = facet.normal;
    Mat3 align;
    Vec3 axis = n.cross(down);
    double s = axis.norm();
    double c = n.dot(down);
    if (s < 1e-12) {
        align = c > 0.0 ? Mat3::Identity()
                        : Eigen::AngleAxisd(M_PI, Vec3::UnitX()).toRotationMatrix();
    } else {
        align = Eigen::AngleAxisd(std::atan2(s, c), axis / s).toRotationMatrix();
    }
    Pose pose;
    pose.rotation = Pose::rot_z(placement.yaw).rotation * align;
    Vec3 centroid = hull.facet_centroid(placement.facet_id);
    pose.translation = workspace.grid_world(placement.grid_point) - pose.rotation * centroid;
    return pose;
}

Pose placement_pose_to_world(const PlacementPose& placement, const Assembly& assembly,
                             const PartsDb& parts_db, const Workspace& workspace,
                             double eps_stab) {
    return placement_pose_to_world(placement, assembly_hull(assembly, parts_db),
                                   composite_cog(assembly, parts_db), workspace, eps_stab);
}

double polygon_area_2d(const std::vector<Vec2>& poly) {
    double a = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % poly.size()];
        a += p.x() * q.y() - q.x() * p.y();
    }
    return 0.5 * a;
}

std::vector<Vec2> clip_half_plane(const std::vector<Vec2>& poly, const Vec2& n, double c) {
    std::vector<Vec2> out;
    const std::size_t m = poly.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % m];
        double dp = n.dot(p) - c;
        double dq = n.dot(q) - c;
        if (dp <= 0.0) out.push_back(p);
        if ((dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0)) {
            double t = dp / (dp - dq);
            out.push_back(p + t * (q - p));
        }
    }
    return out;
}

std::vector<Vec2> convex_clip(const std::vector<Vec2>& subject, const std::vector<Vec2>& clip) {
    std::vector<Vec2> out = subject;
    const std::size_t m = clip.size();
    for (std::size_t i = 0; i < m && !out.empty(); ++i) {
        const Vec2& a = clip[i];
        const Vec2& b = clip[(i + 1) % m];
        Vec2 edge = b - a;
        Vec2 outward(edge.y(), -edge.x());  // right of a CCW edge is outside
        out = clip_half_plane(out, outward, outward.dot(a));
    }
    return out;
}

double convex_polygon_inset_distance(const std::vector<Vec2>& poly, const Vec2& p) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t m = poly.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % m];
        Vec2 e = b - a;
        double len = e.norm();
        if (len < 1e-15) continue;
        double d = (e.x() * (p.y() - a.y()) - e.y() * (p.x() - a.x())) / len;
        best = std::min(best, d);
    }
    return best;
}

std::pair<Vec3, Vec3> plane_basis(const Vec3& n) {
    const std::array<Vec3, 3> axes = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
    int pick = 0;
    double best = std::abs(n.dot(axes[0]));
    for (int i = 1; i < 3; ++i) {
        double d = std::abs(n.dot(axes[i]));
        if (d < best - 1e-12) { best = d; pick = i; }
    }
    Vec3 u = (axes[pick] - n * n.dot(axes[pick])).normalized();
    Vec3 v = n.cross(u);
    return {u, v};
}

}  // namespace asmplan
