#pragma once

#include "asmplan/geometry.hpp"
#include "asmplan/motion.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace asmplan {

struct NoContact : std::runtime_error {
    explicit NoContact(const std::string& what) : std::runtime_error(what) {}
};

/// Parallel-jaw gripper. Frame convention: origin at the grasp center, x along
/// the closing axis, z the approach axis pointing from palm to fingertips.
/// Each finger pad is a pad_width x pad_depth rectangle centered on the
/// contact point; fingers extend palm_clearance behind the pad toward the
/// palm plate.
struct Gripper {
    std::string id;
    double min_width = 0.0;
    double max_width = 0.0;
    double pad_width = 0.0;    // along gripper y
    double pad_depth = 0.0;    // along gripper z
    double finger_depth = 0.0; // finger thickness along the closing axis
    double palm_clearance = 0.0;

    std::vector<std::string> validate() const;
};

/// A wrist pose in the part frame plus the jaw opening realizing the grasp.
struct GraspPose {
    std::string part_id;
    std::string gripper_id;
    Pose wrist_pose;       // gripper frame relative to the part frame
    double jaw_width = 0.0;
};

/// Per-(part, gripper) grasp sets, the G_ij databases.
struct GraspDatabase {
    std::map<std::pair<std::string, std::string>, std::vector<GraspPose>> entries;

    const std::vector<GraspPose>& lookup(const std::string& part_id,
                                         const std::string& gripper_id) const;
};

struct GraspSampling {
    double spacing = 0.01;  // contact sample spacing along facet overlap, m
    int rolls = 4;          // wrist rolls per contact point
};

/// Identifies a database grasp independently of which assembly carries it.
struct GraspRef {
    std::string part_id;
    int db_index = -1;
    friend bool operator==(const GraspRef&, const GraspRef&) = default;
    friend auto operator<=>(const GraspRef&, const GraspRef&) = default;
};

/// Grasps of one assembly at one placement that passed reachability and
/// collision filtering, with their world wrist poses.
struct FilteredGraspSet {
    PlacementPose placement;
    std::string gripper_id;
    struct Entry {
        GraspRef ref;
        GraspPose grasp;
        Pose wrist_world;
    };
    std::vector<Entry> grasps;
};

using ReachabilityPredicate = std::function<bool(const Pose& wrist_world)>;
/// True when the gripper body (already in world frame) collides, given the id
/// of the currently grasped part (excluded from the environment).
using CollisionPredicate = std::function<bool(const std::vector<AttachedHull>& gripper_body,
                                              const Pose& wrist_world,
                                              const std::string& grasped_part)>;

struct GraspCheckers {
    ReachabilityPredicate reachable;
    CollisionPredicate collides;
};

/// Collision bodies of the gripper opened to `width`, in the gripper frame:
/// two fingers and the palm plate.
std::vector<AttachedHull> gripper_body_hulls(const Gripper& gripper, double width);

/// Antipodal sampler over opposed hull facet pairs whose separation fits the
/// jaw range. Samples contact centers over the projected facet overlap at the
/// configured spacing (the overlap centroid is always sampled), with `rolls`
/// wrist rolls about the closing axis. Grasps whose pads do not touch both
/// faces with positive area are discarded.
std::vector<GraspPose> generate_grasps(const Part& part, const Gripper& gripper,
                                       const GraspSampling& sampling = {});

/// Contact-area stability: minimum over the two fingers of the pad/face
/// intersection area (m^2). Throws NoContact when either pad misses its face.
double stability_index(const GraspPose& grasp, const Part& part, const Gripper& gripper);

/// Transforms every database grasp of the assembly's parts to the world frame
/// of the given placement and keeps those that are reachable and collision
/// free. An empty result is valid.
FilteredGraspSet filter_grasps(const Assembly& assembly, const PlacementPose& placement,
                               const Gripper& gripper, const GraspDatabase& db,
                               const PartsDb& parts_db, const Workspace& workspace,
                               const GraspCheckers& checkers);
/// Same, for an explicit world pose of the assembly anchor (used for fitted
/// poses that are determined by a base placement rather than enumerated).
FilteredGraspSet filter_grasps_at(const Assembly& assembly, const Pose& world,
                                  const PlacementPose& placement, const Gripper& gripper,
                                  const GraspDatabase& db, const GraspCheckers& checkers);

struct ReachParams {
    Vec3 center = Vec3::Zero();
    double r_min = 0.0;
    double r_max = 2.0;
    double z_min = -10.0;
    double z_max = 10.0;
    double max_tilt = M_PI;  // cone half-angle of the approach axis about vertical
};

/// Spherical-shell + height-band + approach-cone region, closed at boundaries.
/// Stands in for manipulator IK.
bool default_reachability(const Pose& wrist_world, const Workspace& workspace,
                          const ReachParams& params);

}  // namespace asmplan
