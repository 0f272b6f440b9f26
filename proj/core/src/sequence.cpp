#include "asmplan/sequence.hpp"

#include <algorithm>
#include <sstream>

namespace asmplan {

const char* to_string(StepKind k) {
    switch (k) {
        case StepKind::Pick: return "pick";
        case StepKind::Place: return "place";
        case StepKind::Assemble: return "assemble";
        case StepKind::ToolExchange: return "tool_exchange";
        case StepKind::Retreat: return "retreat";
    }
    return "?";
}

namespace {

struct SubPathError {
    SequenceFailure failure;
};

const FilteredGraspSet::Entry& grasp_entry(const AssemblyGraph& g, int circle,
                                           const std::string& gripper, const GraspRef& ref) {
    const auto& set = g.circles[circle].grasp_sets.at(gripper);
    for (const auto& e : set.grasps)
        if (e.ref == ref) return e;
    throw std::runtime_error("grasp entry missing at circle " + std::to_string(circle));
}

/// Emits plan steps while tracking what the hand holds and where the wrist is.
class StepEmitter {
  public:
    StepEmitter(const AssemblyGraph& graph, const SequenceParams& params)
        : graph_(graph), params_(params) {}

    void carry(const AssignedHop& hop, int task_index) {
        const CircleState& from = graph_.states[hop.from_state];
        const CircleState& to = graph_.states[hop.to_state];
        const Circle& cf = graph_.circles[from.circle];
        const Circle& ct = graph_.circles[to.circle];
        const auto& entry_from = grasp_entry(graph_, from.circle, from.gripper, hop.grasp);
        const auto& entry_to = grasp_entry(graph_, to.circle, to.gripper, hop.grasp);

        if (!(held_ && held_gripper_ == from.gripper && held_grasp_ == hop.grasp)) {
            release(task_index);
            exchange_if_needed(from.gripper, task_index);
            PlanStep pick;
            pick.kind = StepKind::Pick;
            pick.assembly_id = graph_.andor.assemblies[cf.vertex].id;
            pick.gripper_id = from.gripper;
            pick.grasp_ref = hop.grasp;
            pick.grasp = entry_from.grasp;
            pick.from_circle = from.circle;
            pick.from_placement = cf.placement;
            pick.wrist_from = have_wrist_ ? wrist_ : entry_from.wrist_world;
            pick.wrist_to = entry_from.wrist_world;
            pick.task_index = task_index;
            pick.origin_edge = hop.edge;
            pick.origin_grasp = hop.grasp;
            pick.origin_circle = from.circle;
            steps_.push_back(std::move(pick));
            wrist_ = entry_from.wrist_world;
            have_wrist_ = true;
            held_ = true;
            held_gripper_ = from.gripper;
            held_grasp_ = hop.grasp;
        }

        PlanStep move;
        move.kind = ct.kind == NodeKind::AssemblyNode ? StepKind::Assemble : StepKind::Place;
        move.assembly_id = graph_.andor.assemblies[cf.vertex].id;
        move.gripper_id = from.gripper;
        move.grasp_ref = hop.grasp;
        move.grasp = entry_from.grasp;
        move.from_circle = from.circle;
        move.to_circle = to.circle;
        move.from_placement = cf.placement;
        move.to_placement = ct.placement;
        move.wrist_from = wrist_;
        move.wrist_to = entry_to.wrist_world;
        move.carries_object = true;
        move.task_index = task_index;
        move.origin_edge = hop.edge;
        move.origin_grasp = hop.grasp;
        steps_.push_back(std::move(move));
        wrist_ = entry_to.wrist_world;
    }

    /// A regrasp hop: the object stays placed; the hand lets go so the next
    /// carry can re-pick with the new grasp.
    void transit(const AssignedHop& hop, int task_index) {
        (void)hop;
        release(task_index);
    }

    void exchange_hop(int task_index) { release(task_index); }

    void finish() {
        // The final fitting ends the plan; no trailing retreat.
    }

    std::vector<PlanStep> take() { return std::move(steps_); }

  private:
    void release(int task_index) {
        if (!held_) return;
        PlanStep retreat;
        retreat.kind = StepKind::Retreat;
        retreat.gripper_id = held_gripper_;
        retreat.wrist_from = wrist_;
        retreat.wrist_to = wrist_;
        retreat.wrist_to.translation.z() += params_.retreat_dist;
        retreat.task_index = task_index;
        retreat.origin_grasp = held_grasp_;
        retreat.origin_circle = steps_.empty() ? -1 : steps_.back().to_circle;
        steps_.push_back(std::move(retreat));
        wrist_ = steps_.back().wrist_to;
        held_ = false;
    }

    void exchange_if_needed(const std::string& gripper, int task_index) {
        if (hand_gripper_ == gripper) return;
        if (!hand_gripper_.empty()) {
            PlanStep ex;
            ex.kind = StepKind::ToolExchange;
            ex.gripper_id = gripper;
            ex.task_index = task_index;
            steps_.push_back(std::move(ex));
        }
        hand_gripper_ = gripper;
    }

    const AssemblyGraph& graph_;
    SequenceParams params_;
    std::vector<PlanStep> steps_;
    Pose wrist_;
    bool have_wrist_ = false;
    bool held_ = false;
    std::string hand_gripper_;
    std::string held_gripper_;
    GraspRef held_grasp_;
};

class SequenceBuilder {
  public:
    SequenceBuilder(const AssemblyGraph& graph, const CostConfig& costs, const CutSet& cuts,
                    const SequenceParams& params)
        : graph_(graph), costs_(costs), cuts_(cuts), emitter_(graph, params) {}

    AssemblyPlan run(const SearchPath& spine) {
        AssemblyPlan plan;
        if (!graph_.tasks.empty()) {
            int a_root_state = spine.states.back();
            const AssemblyTask* root_task = graph_.task_of_result(graph_.tree.root);
            process_task(*root_task, a_root_state);
        }
        emitter_.finish();
        plan.steps = emitter_.take();
        plan.total_cost = total_cost_;
        plan.stack_iterations = iterations_;
        return plan;
    }

  private:
    int task_index(const AssemblyTask& t) const {
        for (int i = 0; i < static_cast<int>(graph_.tasks.size()); ++i)
            if (graph_.tasks[i].result == t.result) return i;
        return -1;
    }

    struct Chain {
        std::vector<AssignedHop> formation;  // parking hops of a just-formed child
        std::vector<AssignedHop> delivery;
        int start_state = -1;
    };

    // One stack iteration: realize a task whose fitted state is already fixed.
    // Both children are formed (and parked, per A3) before the base is placed
    // at the assembly point; the attach child then fits onto it, so the base
    // node is scheduled before the assembly node.
    void process_task(const AssemblyTask& task, int fitted_state) {
        ++iterations_;
        int fitted_circle = graph_.states[fitted_state].circle;
        int base_circle = graph_.circles[fitted_circle].base_circle;
        const int ti = task_index(task);

        Chain base_chain = resolve(task.base, graph_.states_of(base_circle), ti, fitted_circle);
        Chain attach_chain = resolve(task.attach, {fitted_state}, ti, fitted_circle);

        if (!graph_.andor.is_leaf(task.base)) {
            process_task(*graph_.task_of_result(task.base), base_chain.start_state);
            emit(base_chain.formation, ti);
        }
        if (!graph_.andor.is_leaf(task.attach)) {
            process_task(*graph_.task_of_result(task.attach), attach_chain.start_state);
            emit(attach_chain.formation, ti);
        }
        emit(base_chain.delivery, ti);
        emit(attach_chain.delivery, ti);
    }

    Chain resolve(int vertex, const std::vector<int>& goal_states, int ti, int context_circle) {
        std::vector<int> roots;
        if (graph_.andor.is_leaf(vertex)) {
            for (int c : graph_.circles_of(vertex, NodeKind::Initial))
                for (int s : graph_.states_of(c)) roots.push_back(s);
        } else {
            for (int c : graph_.circles_of(vertex, NodeKind::AssemblyNode))
                for (int s : graph_.states_of(c)) roots.push_back(s);
        }
        auto path = dijkstra_search(graph_, roots, goal_states, costs_, cuts_);
        if (!path) throw SubPathError{{ti, context_circle, -1}};
        auto assigned = assign_grasps(graph_, *path, costs_, cuts_);
        if (!assigned.path) throw SubPathError{{ti, context_circle, assigned.failed_edge}};
        total_cost_ += assigned.path->cost;

        Chain chain;
        chain.start_state = path->states.front();
        // A just-formed child first leaves the assembly point for the escape
        // area; those hops belong to its formation, everything after is the
        // later delivery.
        std::size_t split = 0;
        if (!graph_.andor.is_leaf(vertex)) {
            while (split < assigned.path->hops.size()) {
                bool is_transfer =
                    assigned.path->hops[split].kind == EdgeKind::TransferAssembly;
                ++split;
                if (is_transfer) break;
            }
        }
        chain.formation.assign(assigned.path->hops.begin(),
                               assigned.path->hops.begin() + split);
        chain.delivery.assign(assigned.path->hops.begin() + split, assigned.path->hops.end());
        return chain;
    }

    void emit(const std::vector<AssignedHop>& hops, int ti) {
        for (const auto& hop : hops) {
            switch (hop.kind) {
                case EdgeKind::TransferAssembly: emitter_.carry(hop, ti); break;
                case EdgeKind::Transit: emitter_.transit(hop, ti); break;
                case EdgeKind::ToolExchange: emitter_.exchange_hop(ti); break;
            }
        }
    }

    const AssemblyGraph& graph_;
    CostConfig costs_;
    const CutSet& cuts_;
    StepEmitter emitter_;
    double total_cost_ = 0.0;
    int iterations_ = 0;
};

}  // namespace

SequenceResult generate_sequence(const AssemblyGraph& graph, const SearchPath& spine,
                                 const CostConfig& costs, const CutSet& cuts,
                                 const SequenceParams& params) {
    SequenceResult result;
    try {
        SequenceBuilder builder(graph, costs, cuts, params);
        result.plan = builder.run(spine);
    } catch (const SubPathError& err) {
        result.failure = err.failure;
    }
    return result;
}

int count_tool_exchanges(const AssemblyPlan& plan) {
    return static_cast<int>(std::count_if(plan.steps.begin(), plan.steps.end(),
                                          [](const PlanStep& s) {
                                              return s.kind == StepKind::ToolExchange;
                                          }));
}

std::vector<std::string> verify_plan(const AssemblyPlan& plan, const AssemblyGraph& graph) {
    std::vector<std::string> violations;
    auto complain = [&](int step, const std::string& what) {
        violations.push_back("step " + std::to_string(step) + ": " + what);
    };

    // Resting circle per vertex; -1 when unplaced/consumed.
    std::map<int, int> location;
    std::set<int> formed, consumed;
    for (int v = 0; v < static_cast<int>(graph.andor.assemblies.size()); ++v) {
        if (!graph.andor.is_leaf(v)) continue;
        auto initials = graph.circles_of(v, NodeKind::Initial);
        if (!initials.empty()) {
            location[v] = initials.front();
            formed.insert(v);
        }
    }
    std::optional<int> occupant;  // vertex at the assembly point
    std::string hand_gripper;
    bool holding = false;
    int held_vertex = -1;
    GraspRef held_grasp;

    for (int i = 0; i < static_cast<int>(plan.steps.size()); ++i) {
        const PlanStep& s = plan.steps[i];
        switch (s.kind) {
            case StepKind::ToolExchange: {
                if (holding) complain(i, "tool exchange while holding an assembly");
                if (s.gripper_id == hand_gripper)
                    complain(i, "tool exchange to the gripper already in hand");
                hand_gripper = s.gripper_id;
                break;
            }
            case StepKind::Pick: {
                if (holding) complain(i, "pick while already holding");
                if (hand_gripper.empty()) hand_gripper = s.gripper_id;
                if (s.gripper_id != hand_gripper)
                    complain(i, "pick with gripper '" + s.gripper_id + "' but hand has '" +
                                    hand_gripper + "'");
                if (s.grasp.gripper_id != s.gripper_id)
                    complain(i, "grasp/gripper mismatch");
                const Gripper& gr = graph.gripper_by_id(s.gripper_id);
                if (s.grasp.jaw_width < gr.min_width - 1e-12 ||
                    s.grasp.jaw_width > gr.max_width + 1e-12)
                    complain(i, "jaw width outside gripper range");
                int v = graph.circles[s.from_circle].vertex;
                if (!formed.count(v)) complain(i, "pick of an assembly that does not exist yet");
                if (consumed.count(v)) complain(i, "pick of an assembly already fit (A5)");
                auto it = location.find(v);
                if (it == location.end() || it->second != s.from_circle)
                    complain(i, "pick location does not match the assembly's resting circle");
                holding = true;
                held_vertex = v;
                held_grasp = s.grasp_ref;
                break;
            }
            case StepKind::Place: {
                if (!holding) complain(i, "place while holding nothing");
                if (s.grasp_ref != held_grasp) complain(i, "place grasp differs from pick grasp");
                if (s.gripper_id != hand_gripper) complain(i, "place gripper differs from hand");
                const Circle& to = graph.circles[s.to_circle];
                if (to.kind == NodeKind::Base) {
                    if (occupant) complain(i, "place at an occupied assembly point");
                    const AssemblyTask* owner = nullptr;
                    for (const auto& t : graph.tasks)
                        if (t.base == held_vertex && !formed.count(t.result)) owner = &t;
                    if (!owner) complain(i, "base placement of an assembly that bases no task");
                    occupant = held_vertex;
                } else if (to.kind != NodeKind::Escape) {
                    complain(i, "place onto a non-resting circle");
                }
                if (occupant && *occupant == held_vertex && to.kind == NodeKind::Escape)
                    occupant.reset();
                location[held_vertex] = s.to_circle;
                break;
            }
            case StepKind::Assemble: {
                if (!holding) complain(i, "assemble while holding nothing");
                if (s.grasp_ref != held_grasp)
                    complain(i, "assemble grasp differs from pick grasp");
                const Circle& to = graph.circles[s.to_circle];
                const AssemblyTask* task = graph.task_of_result(to.vertex);
                if (!task) {
                    complain(i, "assemble into a circle that results from no task");
                    break;
                }
                if (task->attach != held_vertex)
                    complain(i, "assemble of a vertex that is not the task's attach child");
                if (!occupant || *occupant != task->base)
                    complain(i, "assemble before the base was placed at the assembly point");
                formed.insert(task->result);
                consumed.insert(task->base);
                consumed.insert(task->attach);
                location.erase(task->base);
                location.erase(task->attach);
                location[task->result] = s.to_circle;
                occupant = task->result;
                holding = true;
                held_vertex = task->result;
                break;
            }
            case StepKind::Retreat: {
                if (!holding) complain(i, "retreat while holding nothing");
                holding = false;
                held_vertex = -1;
                break;
            }
        }
    }
    if (!graph.tasks.empty()) {
        if (!formed.count(graph.tree.root)) violations.push_back("plan never forms the product");
        if (plan.steps.empty() || plan.steps.back().kind != StepKind::Assemble)
            violations.push_back("final step does not assemble the root");
    }
    return violations;
}

}  // namespace asmplan
