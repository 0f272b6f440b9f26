#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "builders.hpp"
#include "oracles.hpp"

#include <random>
#include <set>

using namespace asmplan;
using namespace asmplan::testing;

namespace {

bool has_axis_normal(const ConvexHull& hull) {
    for (const auto& f : hull.facets) {
        Vec3 n = f.normal.cwiseAbs();
        double mx = n.maxCoeff();
        if (std::abs(mx - 1.0) > 1e-9) return false;
    }
    return true;
}

std::set<int> to_set(const std::vector<int>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("convex hull of a cube merges into six axis-aligned facets") {
    auto hull = convex_hull(box_vertices(Vec3(0.02, 0.02, 0.02)));
    CHECK(hull.facets.size() == 6);
    CHECK(hull.vertex_ids.size() == 8);
    CHECK(has_axis_normal(hull));
    for (const auto& f : hull.facets) CHECK(f.vertex_ids.size() == 4);
    CHECK(all_points_on_or_inside(hull, hull.points));
}

TEST_CASE("convex hull of a regular tetrahedron has four triangles") {
    std::vector<Vec3> pts = {{0.02, 0.02, 0.02},
                             {0.02, -0.02, -0.02},
                             {-0.02, 0.02, -0.02},
                             {-0.02, -0.02, 0.02}};
    auto hull = convex_hull(pts);
    CHECK(hull.facets.size() == 4);
    for (const auto& f : hull.facets) CHECK(f.vertex_ids.size() == 3);
    CHECK(all_points_on_or_inside(hull, pts));
}

TEST_CASE("interior points are excluded from the hull") {
    auto pts = box_vertices(Vec3(0.5, 0.5, 0.5));
    pts.emplace_back(0.0, 0.0, 0.0);   // center
    pts.emplace_back(0.1, 0.2, -0.3);  // somewhere inside
    auto hull = convex_hull(pts);
    CHECK(hull.facets.size() == 6);
    CHECK(hull.vertex_ids.size() == 8);
    for (int id : hull.vertex_ids) CHECK(id < 8);
    CHECK(all_points_on_or_inside(hull, pts));
}

TEST_CASE("degenerate inputs are rejected") {
    CHECK_THROWS_AS(convex_hull({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}), DegenerateGeometry);
    CHECK_THROWS_AS(
        convex_hull({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0.3, 0.3, 0}}),
        DegenerateGeometry);
}

TEST_CASE("hull idempotence on random clouds") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uni(-0.1, 0.1);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<Vec3> pts;
        for (int i = 0; i < 40; ++i) pts.emplace_back(uni(rng), uni(rng), uni(rng));
        auto hull = convex_hull(pts);
        CHECK(all_points_on_or_inside(hull, pts));
        std::vector<Vec3> hull_pts;
        for (int id : hull.vertex_ids) hull_pts.push_back(pts[id]);
        auto again = convex_hull(hull_pts);
        CHECK(again.vertex_ids.size() == hull.vertex_ids.size());
        CHECK(again.facets.size() == hull.facets.size());
    }
}

TEST_CASE("homogeneous boxes are stable on all six facets") {
    PartsDb parts;
    parts["cube"] = box_part("cube", Vec3(0.02, 0.02, 0.02));
    Assembly a{"a", {"cube"}, {}, {}};
    CHECK(stable_facets(a, parts).size() == 6);

    parts["thin"] = box_part("thin", Vec3(0.01, 0.01, 0.25));
    Assembly b{"b", {"thin"}, {}, {}};
    CHECK(stable_facets(b, parts).size() == 6);
}

TEST_CASE("L-shaped assembly: the small end facet is unstable") {
    PartsDb parts;
    parts["slab"] = box_part("slab", Vec3(0.05, 0.02, 0.01), 0.08);
    parts["column"] = box_part("column", Vec3(0.01, 0.02, 0.045), 0.072);
    Assembly l{"l", {"slab", "column"}, {Pose{Mat3::Identity(), Vec3(0.04, 0.0, 0.055)}},
               {Vec3(0, 0, -1)}};

    auto hull = assembly_hull(l, parts);
    Vec3 cog = composite_cog(l, parts);
    auto stable = to_set(stable_facets(hull, cog));

    int top = -1, bottom = -1;
    for (int f = 0; f < static_cast<int>(hull.facets.size()); ++f) {
        if (hull.facets[f].normal.z() > 0.999) top = f;
        if (hull.facets[f].normal.z() < -0.999) bottom = f;
    }
    REQUIRE(top >= 0);
    REQUIRE(bottom >= 0);
    CHECK(stable.count(bottom) == 1);
    CHECK(stable.count(top) == 0);  // CoG projects outside the column's top face

    // Independent support-polygon oracle agrees facet by facet.
    for (int f = 0; f < static_cast<int>(hull.facets.size()); ++f)
        CHECK(support_contains(hull, f, cog) == (stable.count(f) == 1));
}

TEST_CASE("stability matches the analytic cuboid oracle on random instances") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dim(0.01, 0.08);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        Vec3 half(dim(rng), dim(rng), dim(rng));
        Vec3 cog;
        for (int k = 0; k < 3; ++k) {
            double c;
            do {
                c = (2.0 * uni(rng) - 1.0) * half[k] * 0.98;
            } while (std::abs(std::abs(c) - (half[k] - 1e-4)) < 1e-8);
            cog[k] = c;
        }
        auto hull = convex_hull(box_vertices(half));
        auto stable = stable_facets(hull, cog);
        std::set<std::pair<int, int>> got;
        for (int f : stable) {
            Vec3 n = hull.facets[f].normal;
            for (int k = 0; k < 3; ++k)
                if (std::abs(n[k]) > 0.999) got.insert({k, n[k] > 0 ? 1 : -1});
        }
        std::set<std::pair<int, int>> expect;
        for (const auto& n : cuboid_stable_downs(half, cog))
            for (int k = 0; k < 3; ++k)
                if (std::abs(n[k]) > 0.999) expect.insert({k, n[k] > 0 ? 1 : -1});
        CHECK(got == expect);
    }
}

TEST_CASE("placement puts the chosen facet on the table") {
    PartsDb parts;
    parts["cube"] = box_part("cube", Vec3(0.02, 0.02, 0.02));
    Assembly a{"a", {"cube"}, {}, {}};
    Workspace ws;
    ws.grid_pitch = 0.1;
    ws.table_height = 0.0;
    ws.escape_points = {{2, 2}};
    auto hull = assembly_hull(a, parts);

    int bottom = -1, top = -1;
    for (int f = 0; f < static_cast<int>(hull.facets.size()); ++f) {
        if (hull.facets[f].normal.z() < -0.999) bottom = f;
        if (hull.facets[f].normal.z() > 0.999) top = f;
    }

    SUBCASE("bottom facet, yaw 0: identity rotation") {
        Pose p = placement_pose_to_world({{0, 0}, bottom, 0.0}, a, parts, ws);
        CHECK((p.rotation - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(std::abs(p.translation.z() - 0.02) < 1e-12);
    }
    SUBCASE("top facet down: a half turn about a horizontal axis") {
        Pose p = placement_pose_to_world({{0, 0}, top, 0.0}, a, parts, ws);
        CHECK(std::abs(rotation_angle_between(Mat3::Identity(), p.rotation) - M_PI) < 1e-9);
        CHECK(std::abs((p.rotation * Vec3::UnitZ()).z() + 1.0) < 1e-12);
    }
}

TEST_CASE("tetrahedron placement verified numerically") {
    PartsDb parts;
    Part tet{"tet",
             {{0.02, 0.02, 0.02}, {0.02, -0.02, -0.02}, {-0.02, 0.02, -0.02},
              {-0.02, -0.02, 0.02}},
             0.1,
             Vec3::Zero()};
    parts["tet"] = tet;
    Assembly a{"a", {"tet"}, {}, {}};
    Workspace ws;
    ws.grid_pitch = 0.05;
    ws.table_height = 0.01;
    ws.escape_points = {{3, 3}};
    auto hull = assembly_hull(a, parts);

    PlacementPose placement{{1, 2}, 2, M_PI_2};
    Pose p = placement_pose_to_world(placement, a, parts, ws);
    CHECK(p.is_rigid());

    const HullFacet& facet = hull.facets[2];
    double min_z = std::numeric_limits<double>::infinity();
    for (const auto& v : tet.vertices) min_z = std::min(min_z, p.apply(v).z());
    CHECK(std::abs(min_z - ws.table_height) < 1e-9);
    for (int id : facet.vertex_ids)
        CHECK(std::abs(p.apply(hull.points[id]).z() - ws.table_height) < 1e-9);
    Vec3 centroid_world = p.apply(hull.facet_centroid(2));
    CHECK(std::abs(centroid_world.x() - 0.05) < 1e-9);
    CHECK(std::abs(centroid_world.y() - 0.10) < 1e-9);
}

TEST_CASE("placement minimum vertex height equals the table height") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dim(0.01, 0.06);
    PartsDb parts;
    Workspace ws;
    ws.grid_pitch = 0.1;
    ws.table_height = 0.02;
    ws.escape_points = {{5, 5}};
    for (int trial = 0; trial < 50; ++trial) {
        Vec3 half(dim(rng), dim(rng), dim(rng));
        parts["p"] = box_part("p", half);
        Assembly a{"a", {"p"}, {}, {}};
        auto hull = assembly_hull(a, parts);
        auto stable = stable_facets(a, parts);
        for (int f : stable) {
            Pose p = placement_pose_to_world({{1, -1}, f, M_PI_2}, a, parts, ws);
            double min_z = std::numeric_limits<double>::infinity();
            for (const auto& v : parts["p"].vertices) min_z = std::min(min_z, p.apply(v).z());
            CHECK(std::abs(min_z - ws.table_height) < 1e-9);
        }
        CHECK_THROWS_AS(placement_pose_to_world({{0, 0}, 999, 0.0}, a, parts, ws),
                        InvalidFacet);
    }
}

TEST_CASE("composite cog") {
    PartsDb parts;
    parts["a"] = box_part("a", Vec3(0.02, 0.02, 0.02), 1.0);
    parts["b"] = box_part("b", Vec3(0.02, 0.02, 0.02), 3.0);

    SUBCASE("single part") {
        Assembly s{"s", {"a"}, {}, {}};
        CHECK((composite_cog(s, parts) - Vec3::Zero()).norm() < 1e-15);
    }
    SUBCASE("two identical parts side by side: midpoint") {
        parts["b"].mass = 1.0;
        Assembly s{"s", {"a", "b"}, {Pose{Mat3::Identity(), Vec3(0.04, 0, 0)}},
                   {Vec3(0, 0, -1)}};
        CHECK((composite_cog(s, parts) - Vec3(0.02, 0, 0)).norm() < 1e-15);
    }
    SUBCASE("1 kg + 3 kg offset 0.1 m: x = 0.075") {
        Assembly s{"s", {"a", "b"}, {Pose{Mat3::Identity(), Vec3(0.1, 0, 0)}},
                   {Vec3(0, 0, -1)}};
        CHECK(std::abs(composite_cog(s, parts).x() - 0.075) < 1e-15);
    }
    SUBCASE("unknown part") {
        Assembly s{"s", {"zz"}, {}, {}};
        CHECK_THROWS_AS(composite_cog(s, parts), UnknownPart);
    }
}
