#include "asmplan/scene.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace asmplan {

using json = nlohmann::ordered_json;

namespace {

Vec3 vec3_from(const json& j) {
    if (!j.is_array() || j.size() != 3) throw SceneError("expected a 3-vector");
    return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

GridPoint grid_from(const json& j) {
    if (!j.is_array() || j.size() != 2) throw SceneError("expected a grid index pair");
    return GridPoint{j[0].get<int>(), j[1].get<int>()};
}

Pose pose_from(const json& j) {
    Pose p;
    const auto& r = j.at("R");
    if (!r.is_array() || r.size() != 9) throw SceneError("pose R must hold 9 numbers");
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) p.rotation(i, k) = r[3 * i + k].get<double>();
    p.translation = vec3_from(j.at("t"));
    return p;
}

json pose_to(const Pose& p) {
    json j;
    json r = json::array();
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) r.push_back(p.rotation(i, k));
    j["R"] = std::move(r);
    j["t"] = {p.translation.x(), p.translation.y(), p.translation.z()};
    return j;
}

// FNV-1a over the canonical dump, for the grasp-database sidecar key.
std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

CollisionHull Scene::table_hull() const {
    const double extent = 50.0;
    return CollisionHull::box(Vec3(-extent, -extent, workspace.table_height - 0.1),
                              Vec3(extent, extent, workspace.table_height));
}

PlacementPose Scene::initial_placement(const std::string& part_id) const {
    auto grid_it = workspace.initial_points.find(part_id);
    if (grid_it == workspace.initial_points.end())
        throw SceneError("no initial point for part '" + part_id + "'");
    PlacementPose p;
    p.grid_point = grid_it->second;
    auto dit = initial_downs.find(part_id);
    Vec3 down = dit == initial_downs.end() ? Vec3(0.0, 0.0, -1.0) : dit->second.normalized();
    const Part& part = parts.at(part_id);
    ConvexHull hull = convex_hull(part.vertices);
    auto stable = stable_facets(hull, part.cog);
    if (stable.empty()) throw SceneError("part '" + part_id + "' has no stable facet");
    p.facet_id = stable.front();
    double best = -2.0;
    for (int f : stable) {
        double d = hull.facets[f].normal.dot(down);
        if (d > best + 1e-12) {
            best = d;
            p.facet_id = f;
        }
    }
    auto yit = initial_yaws.find(part_id);
    p.yaw = yit == initial_yaws.end() ? 0.0 : yit->second;
    return p;
}

Scene parse_scene(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw SceneError(std::string("scene JSON parse error: ") + e.what());
    }
    Scene s;
    s.name = j.value("name", "");
    for (const auto& pj : j.at("parts")) {
        Part p;
        p.id = pj.at("id").get<std::string>();
        for (const auto& vj : pj.at("vertices")) p.vertices.push_back(vec3_from(vj));
        p.mass = pj.at("mass").get<double>();
        p.cog = vec3_from(pj.at("cog"));
        s.parts[p.id] = std::move(p);
    }
    for (const auto& gj : j.at("grippers")) {
        Gripper g;
        g.id = gj.at("id").get<std::string>();
        g.min_width = gj.at("min_width").get<double>();
        g.max_width = gj.at("max_width").get<double>();
        g.pad_width = gj.at("pad").at(0).get<double>();
        g.pad_depth = gj.at("pad").at(1).get<double>();
        g.finger_depth = gj.at("finger_depth").get<double>();
        g.palm_clearance = gj.at("palm_clearance").get<double>();
        s.grippers.push_back(std::move(g));
    }
    const auto& wj = j.at("workspace");
    s.workspace.grid_pitch = wj.at("grid_pitch").get<double>();
    s.workspace.table_height = wj.value("table_height", 0.0);
    s.workspace.assembly_point = grid_from(wj.at("assembly_point"));
    for (const auto& ej : wj.at("escape_points"))
        s.workspace.escape_points.push_back(grid_from(ej));
    for (auto it = wj.at("initial_points").begin(); it != wj.at("initial_points").end(); ++it)
        s.workspace.initial_points[it.key()] = grid_from(it.value());

    for (const auto& aj : j.at("assemblies")) {
        Assembly a;
        a.id = aj.at("id").get<std::string>();
        for (const auto& pj : aj.at("parts")) a.parts.push_back(pj.get<std::string>());
        if (aj.contains("rel_poses"))
            for (const auto& rj : aj.at("rel_poses")) a.relative_poses.push_back(pose_from(rj));
        if (aj.contains("approach_dirs"))
            for (const auto& dj : aj.at("approach_dirs")) a.approach_dirs.push_back(vec3_from(dj));
        s.andor.assemblies.push_back(std::move(a));
    }
    for (const auto& hj : j.at("hyperedges")) {
        Hyperedge h;
        h.parent = hj.at("parent").get<int>();
        h.child_a = hj.at("children").at(0).get<int>();
        h.child_b = hj.at("children").at(1).get<int>();
        h.base_override = hj.value("base", -1);
        s.andor.hyperedges.push_back(h);
    }

    if (j.contains("yaw_set")) {
        s.yaw_set.clear();
        for (const auto& yj : j.at("yaw_set")) s.yaw_set.push_back(yj.get<double>());
    }
    if (j.contains("cost_config")) {
        const auto& cj = j.at("cost_config");
        s.costs.transit = cj.value("transit", s.costs.transit);
        s.costs.transfer = cj.value("transfer", s.costs.transfer);
        s.costs.tool_exchange = cj.value("tool_exchange", s.costs.tool_exchange);
    }
    if (j.contains("motion_config")) {
        const auto& mj = j.at("motion_config");
        s.motion.resolution = mj.value("resolution", s.motion.resolution);
        s.motion.rot_resolution = mj.value("rot_resolution", s.motion.rot_resolution);
        s.motion.node_limit = mj.value("node_limit", s.motion.node_limit);
        s.motion.goal_bias = mj.value("goal_bias", s.motion.goal_bias);
        s.motion.step_pos = mj.value("step_pos", s.motion.step_pos);
        s.motion.step_rot = mj.value("step_rot", s.motion.step_rot);
        s.motion.seed = mj.value("seed", s.motion.seed);
        if (mj.contains("bounds_min")) s.motion.bounds_min = vec3_from(mj.at("bounds_min"));
        if (mj.contains("bounds_max")) s.motion.bounds_max = vec3_from(mj.at("bounds_max"));
    }
    if (j.contains("sampling")) {
        const auto& sj = j.at("sampling");
        s.sampling.spacing = sj.value("spacing", s.sampling.spacing);
        s.sampling.rolls = sj.value("rolls", s.sampling.rolls);
    }
    if (j.contains("reach")) {
        const auto& rj = j.at("reach");
        if (rj.contains("center")) s.reach.center = vec3_from(rj.at("center"));
        s.reach.r_min = rj.value("r_min", s.reach.r_min);
        s.reach.r_max = rj.value("r_max", s.reach.r_max);
        s.reach.z_min = rj.value("z_min", s.reach.z_min);
        s.reach.z_max = rj.value("z_max", s.reach.z_max);
        s.reach.max_tilt = rj.value("max_tilt", s.reach.max_tilt);
    }
    if (j.contains("obstacles")) {
        for (const auto& oj : j.at("obstacles")) {
            if (oj.contains("min"))
                s.obstacles.push_back(
                    CollisionHull::box(vec3_from(oj.at("min")), vec3_from(oj.at("max"))));
            else {
                std::vector<Vec3> pts;
                for (const auto& vj : oj.at("vertices")) pts.push_back(vec3_from(vj));
                s.obstacles.push_back(CollisionHull::from_points(pts));
            }
        }
    }
    if (j.contains("initial_downs"))
        for (auto it = j.at("initial_downs").begin(); it != j.at("initial_downs").end(); ++it)
            s.initial_downs[it.key()] = vec3_from(it.value());
    if (j.contains("initial_yaws"))
        for (auto it = j.at("initial_yaws").begin(); it != j.at("initial_yaws").end(); ++it)
            s.initial_yaws[it.key()] = it.value().get<double>();
    s.max_trees = j.value("max_trees", s.max_trees);
    s.cut_budget = j.value("cut_budget", s.cut_budget);
    s.approach_dist = j.value("approach_dist", s.approach_dist);
    s.retreat_dist = j.value("retreat_dist", s.retreat_dist);
    return s;
}

Scene load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SceneError("cannot open scene file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    Scene s = parse_scene(ss.str());
    if (s.name.empty()) s.name = path;
    return s;
}

std::vector<std::string> validate_scene(const Scene& scene) {
    std::vector<std::string> v;
    for (const auto& [id, part] : scene.parts) {
        if (part.mass <= 0.0) v.push_back("part '" + id + "': mass must be > 0");
        try {
            ConvexHull hull = convex_hull(part.vertices);
            if (hull.signed_distance(part.cog) > -1e-12)
                v.push_back("part '" + id + "': cog lies outside the convex hull");
        } catch (const DegenerateGeometry& e) {
            v.push_back("part '" + id + "': " + e.what());
        }
    }
    for (const auto& g : scene.grippers)
        for (auto& msg : g.validate()) v.push_back(msg);
    {
        std::set<std::string> ids;
        for (const auto& g : scene.grippers)
            if (!ids.insert(g.id).second) v.push_back("duplicate gripper id '" + g.id + "'");
    }
    for (auto& msg : scene.workspace.validate()) v.push_back(msg);

    // Cross references.
    for (const auto& a : scene.andor.assemblies) {
        for (const auto& pid : a.parts)
            if (!scene.parts.count(pid))
                v.push_back("assembly '" + a.id + "' references unknown part '" + pid + "'");
        if (a.relative_poses.size() + 1 != a.parts.size() ||
            a.approach_dirs.size() + 1 != a.parts.size())
            v.push_back("assembly '" + a.id +
                        "': need |parts|-1 relative poses and approach directions");
        for (const auto& d : a.approach_dirs)
            if (std::abs(d.norm() - 1.0) > 1e-9)
                v.push_back("assembly '" + a.id + "': approach direction is not unit length");
        for (const auto& p : a.relative_poses)
            if (!p.is_rigid())
                v.push_back("assembly '" + a.id + "': relative pose rotation not orthonormal");
    }
    for (auto& msg : validate(scene.andor)) v.push_back(msg);

    // Leaf parts need initial points; part interpenetration within assemblies.
    for (const auto& a : scene.andor.assemblies) {
        if (a.single_part() && !scene.workspace.initial_points.count(a.parts.front()))
            v.push_back("leaf part '" + a.parts.front() + "' has no initial point");
        bool parts_ok = true;
        for (const auto& pid : a.parts)
            if (!scene.parts.count(pid)) parts_ok = false;
        if (!parts_ok || a.relative_poses.size() + 1 != a.parts.size()) continue;
        for (std::size_t i = 0; i < a.parts.size(); ++i)
            for (std::size_t k = i + 1; k < a.parts.size(); ++k) {
                auto hi = CollisionHull::from_points(scene.parts.at(a.parts[i]).vertices);
                auto hk = CollisionHull::from_points(scene.parts.at(a.parts[k]).vertices);
                if (collide(hi, a.part_pose(i), hk, a.part_pose(k), 1e-6))
                    v.push_back("assembly '" + a.id + "': parts '" + a.parts[i] + "' and '" +
                                a.parts[k] + "' interpenetrate");
            }
    }

    // A child's internal arrangement must match its arrangement inside the
    // parent (A5: subassemblies are rigid).
    for (const auto& h : scene.andor.hyperedges) {
        if (h.parent < 0 || h.parent >= static_cast<int>(scene.andor.assemblies.size()))
            continue;
        const Assembly& parent = scene.andor.assemblies[h.parent];
        for (int child_idx : {h.child_a, h.child_b}) {
            if (child_idx < 0 || child_idx >= static_cast<int>(scene.andor.assemblies.size()))
                continue;
            const Assembly& child = scene.andor.assemblies[child_idx];
            auto anchor = parent.part_index(child.parts.empty() ? "" : child.parts.front());
            if (!anchor) continue;
            Pose anchor_in_parent = parent.part_pose(*anchor);
            for (std::size_t i = 1; i < child.parts.size(); ++i) {
                auto idx = parent.part_index(child.parts[i]);
                if (!idx) continue;
                Pose expected = anchor_in_parent.compose(child.part_pose(i));
                if (!parent.part_pose(*idx).approx_equal(expected, 1e-6))
                    v.push_back("assembly '" + child.id + "' arrangement differs inside '" +
                                parent.id + "' (part '" + child.parts[i] + "')");
            }
        }
    }
    return v;
}

GraspDatabase build_grasp_database(const Scene& scene) {
    GraspDatabase db;
    for (const auto& [pid, part] : scene.parts)
        for (const auto& g : scene.grippers)
            db.entries[{pid, g.id}] = generate_grasps(part, g, scene.sampling);
    return db;
}

std::string grasp_db_to_json(const GraspDatabase& db) {
    json arr = json::array();
    for (const auto& [key, grasps] : db.entries)
        for (const auto& g : grasps) {
            json e;
            e["part"] = key.first;
            e["gripper"] = key.second;
            e["wrist_pose"] = pose_to(g.wrist_pose);
            e["width"] = g.jaw_width;
            arr.push_back(std::move(e));
        }
    json out;
    out["grasps"] = std::move(arr);
    return out.dump(2) + "\n";
}

GraspDatabase grasp_db_from_json(const std::string& json_text) {
    GraspDatabase db;
    json j = json::parse(json_text);
    for (const auto& e : j.at("grasps")) {
        GraspPose g;
        g.part_id = e.at("part").get<std::string>();
        g.gripper_id = e.at("gripper").get<std::string>();
        g.wrist_pose = pose_from(e.at("wrist_pose"));
        g.jaw_width = e.at("width").get<double>();
        db.entries[{g.part_id, g.gripper_id}].push_back(std::move(g));
    }
    return db;
}

GraspDatabase build_grasp_database_cached(const Scene& scene, const std::string& scene_path) {
    // Key the sidecar by the content that determines the database.
    json key;
    for (const auto& [pid, part] : scene.parts) {
        json pj;
        for (const auto& v : part.vertices) pj.push_back({v.x(), v.y(), v.z()});
        key["parts"][pid] = std::move(pj);
    }
    for (const auto& g : scene.grippers)
        key["grippers"][g.id] = {g.min_width, g.max_width, g.pad_width, g.pad_depth,
                                 g.finger_depth, g.palm_clearance};
    key["sampling"] = {scene.sampling.spacing, scene.sampling.rolls};
    std::ostringstream hash;
    hash << std::hex << fnv1a(key.dump());

    const std::string sidecar = scene_path + ".grasps.json";
    {
        std::ifstream in(sidecar);
        if (in) {
            try {
                json cached = json::parse(in);
                if (cached.value("key", "") == hash.str())
                    return grasp_db_from_json(cached.at("db").dump());
            } catch (...) {
                // fall through to regeneration
            }
        }
    }
    GraspDatabase db = build_grasp_database(scene);
    json out;
    out["key"] = hash.str();
    out["db"] = json::parse(grasp_db_to_json(db));
    std::ofstream os(sidecar);
    if (os) os << out.dump() << "\n";
    return db;
}

}  // namespace asmplan
