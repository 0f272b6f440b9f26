#pragma once

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace asmplan {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using Mat3 = Eigen::Matrix3d;

struct DegenerateGeometry : std::runtime_error {
    explicit DegenerateGeometry(const std::string& what) : std::runtime_error(what) {}
};
struct UnknownPart : std::runtime_error {
    explicit UnknownPart(const std::string& id) : std::runtime_error("unknown part: " + id) {}
};
struct InvalidFacet : std::runtime_error {
    explicit InvalidFacet(const std::string& what) : std::runtime_error(what) {}
};

/// Rigid transform. rotation must be orthonormal with det +1 (1e-9 on R*R^T - I).
struct Pose {
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
    Pose compose(const Pose& other) const {
        return Pose{rotation * other.rotation, rotation * other.translation + translation};
    }
    Pose inverse() const {
        Mat3 rt = rotation.transpose();
        return Pose{rt, -(rt * translation)};
    }
    bool is_rigid(double tol = 1e-9) const {
        return (rotation * rotation.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff() <= tol &&
               rotation.determinant() > 0.0;
    }
    bool approx_equal(const Pose& other, double tol = 1e-6) const {
        return (rotation - other.rotation).cwiseAbs().maxCoeff() <= tol &&
               (translation - other.translation).cwiseAbs().maxCoeff() <= tol;
    }
    static Pose identity() { return Pose{}; }
    static Pose rot_z(double yaw) {
        Pose p;
        p.rotation = Eigen::AngleAxisd(yaw, Vec3::UnitZ()).toRotationMatrix();
        return p;
    }
};

/// Convex rigid body. Vertices in body frame; cog must lie inside the hull.
struct Part {
    std::string id;
    std::vector<Vec3> vertices;
    double mass = 0.0;
    Vec3 cog = Vec3::Zero();
};

using PartsDb = std::map<std::string, Part>;

/// Composite of parts: poses/approach directions of every non-anchor part
/// relative to the first (anchor) part. Both lists are empty for a single part.
struct Assembly {
    std::string id;
    std::vector<std::string> parts;
    std::vector<Pose> relative_poses;    // size = parts.size() - 1
    std::vector<Vec3> approach_dirs;     // unit vectors, same size

    bool single_part() const { return parts.size() == 1; }
    /// Pose of parts[i] in the anchor frame (identity for i == 0).
    Pose part_pose(std::size_t i) const {
        return i == 0 ? Pose::identity() : relative_poses.at(i - 1);
    }
    std::optional<std::size_t> part_index(const std::string& part_id) const {
        for (std::size_t i = 0; i < parts.size(); ++i)
            if (parts[i] == part_id) return i;
        return std::nullopt;
    }
};

struct GridPoint {
    int i = 0;
    int j = 0;
    friend bool operator==(const GridPoint&, const GridPoint&) = default;
    friend auto operator<=>(const GridPoint&, const GridPoint&) = default;
};

/// Discretized table. assembly_point hosts fitting; escape_points park finished
/// subassemblies; initial_points hold each part before its first move.
struct Workspace {
    double grid_pitch = 0.1;
    double table_height = 0.0;
    GridPoint assembly_point;
    std::vector<GridPoint> escape_points;
    std::map<std::string, GridPoint> initial_points;

    Vec3 grid_world(const GridPoint& g) const {
        return Vec3(g.i * grid_pitch, g.j * grid_pitch, table_height);
    }
    std::vector<std::string> validate() const;
};

/// Stable resting pose key: grid point + hull facet contacting the table +
/// rotation about the table normal.
struct PlacementPose {
    GridPoint grid_point;
    int facet_id = -1;
    double yaw = 0.0;
    friend bool operator==(const PlacementPose&, const PlacementPose&) = default;
};

/// Planar hull face, possibly a merged polygon of coplanar triangles.
/// vertex_ids walk the boundary CCW as seen from outside; plane is n.x = offset.
struct HullFacet {
    std::vector<int> vertex_ids;
    Vec3 normal = Vec3::Zero();
    double offset = 0.0;
};

struct ConvexHull {
    std::vector<Vec3> points;        // the input points
    std::vector<int> vertex_ids;     // indices of points on the hull
    std::vector<HullFacet> facets;

    Vec3 facet_centroid(int facet_id) const;
    /// Max over facets of signed distance; <= 0 (within tol) means inside.
    double signed_distance(const Vec3& p) const;
};

/// 3D convex hull with coplanar-facet merging (normals within merge_angle_tol).
/// Throws DegenerateGeometry for < 4 points or coplanar input.
ConvexHull convex_hull(const std::vector<Vec3>& points, double merge_angle_tol = 1e-6);

/// Mass-weighted CoG of the assembly in its anchor frame. Throws UnknownPart.
Vec3 composite_cog(const Assembly& assembly, const PartsDb& parts_db);

/// All part vertices under their relative poses, in the anchor frame.
std::vector<Vec3> assembly_points(const Assembly& assembly, const PartsDb& parts_db);

/// Hull of the whole composite, in the anchor frame.
ConvexHull assembly_hull(const Assembly& assembly, const PartsDb& parts_db);

/// Facets on which the assembly rests stably: the CoG projects strictly inside
/// the facet polygon with margin eps_stab.
std::vector<int> stable_facets(const Assembly& assembly, const PartsDb& parts_db,
                               double eps_stab = 1e-4);
std::vector<int> stable_facets(const ConvexHull& hull, const Vec3& cog,
                               double eps_stab = 1e-4);

/// World pose of the assembly anchor for a placement: the chosen facet lies on
/// the table plane with its centroid at the grid point, rotated by yaw about
/// the table normal. Throws InvalidFacet if the facet is not stable.
Pose placement_pose_to_world(const PlacementPose& placement, const Assembly& assembly,
                             const PartsDb& parts_db, const Workspace& workspace,
                             double eps_stab = 1e-4);
Pose placement_pose_to_world(const PlacementPose& placement, const ConvexHull& hull,
                             const Vec3& cog, const Workspace& workspace,
                             double eps_stab = 1e-4);

// --- small 2D helpers shared with grasp contact math ---

double polygon_area_2d(const std::vector<Vec2>& poly);

/// Clip a polygon by the half-plane n.p <= c (keeps the <= side).
std::vector<Vec2> clip_half_plane(const std::vector<Vec2>& poly, const Vec2& n, double c);

/// Intersection of two convex polygons (CCW), by successive half-plane clips.
std::vector<Vec2> convex_clip(const std::vector<Vec2>& subject, const std::vector<Vec2>& clip);

/// Minimum signed distance from p to the edges of a CCW convex polygon
/// (positive inside). Inside-with-margin means result >= margin.
double convex_polygon_inset_distance(const std::vector<Vec2>& poly, const Vec2& p);

/// Deterministic orthonormal frame for a plane with normal n: returns (u, v)
/// with u x v = n.
std::pair<Vec3, Vec3> plane_basis(const Vec3& n);

}  // namespace asmplan
