#pragma once

#include <span>
#include <string>
#include <vector>

#include "scout/belief.hpp"
#include "scout/observation.hpp"
#include "scout/world.hpp"

namespace scout {

/// A: states are location hypotheses, actions carry the camera.
/// B: states are (hypothesis, camera) pairs, actions still carry the camera.
enum class ModelVariant { A, B };

std::string to_string(ModelVariant v);

/// Move the camera over a center block and capture at a zoom level.
struct SnapshotAction {
    BlockId center = 0;
    int zoom = 1;

    CameraView view() const { return {center, zoom}; }
    bool operator==(const SnapshotAction&) const = default;
};

std::string to_string(const SnapshotAction& a);  // "snapshot_C5_Z2"

/// True when a ranks before b in the deterministic tie order:
/// higher zoom first, then lower center index.
bool tie_prefers(const SnapshotAction& a, const SnapshotAction& b);

/// Finite POMDP over location hypotheses with deterministic camera motion.
/// Hypotheses are all blocks in ascending order, then Absent if enabled.
/// Actions pair each center (ascending) with each zoom (ascending).
/// Immutable after construction.
class PomdpModel {
public:
    static PomdpModel build_variant_a(const GridWorld& world, std::vector<BlockId> centers,
                                      int zoom_levels, ObservationModel observation,
                                      double gamma, bool allow_absent);
    static PomdpModel build_variant_b(const GridWorld& world, std::vector<BlockId> centers,
                                      int zoom_levels, ObservationModel observation,
                                      double gamma, bool allow_absent);

    ModelVariant variant() const { return variant_; }
    const GridWorld& world() const { return world_; }
    const std::vector<BlockId>& centers() const { return centers_; }
    int zoom_levels() const { return zoom_levels_; }
    double gamma() const { return gamma_; }
    bool allow_absent() const { return hypotheses_.back().is_absent(); }
    const ObservationModel& observation() const { return observation_; }
    const std::vector<Hypothesis>& hypotheses() const { return hypotheses_; }

    int state_count() const;
    int action_count() const { return camera_count(); }

    SnapshotAction action(int a) const;
    int action_index(const SnapshotAction& a) const;  // invalid_argument if absent
    std::string action_name(int a) const { return to_string(action(a)); }
    std::string state_name(int s) const;

    /// Deterministic successor: A keeps the state, B moves the camera.
    int next_state(int s, int a) const;
    double transition(int s, int a, int next) const {
        return next_state(s, a) == next ? 1.0 : 0.0;
    }

    /// P(o | s', a). Variant B ignores the action: the observation depends
    /// on the camera stored in the successor state.
    double obs_prob(Observation o, int next, int a) const {
        const double p1 = obs_p1(next, a);
        return o == Observation::O1 ? p1 : 1.0 - p1;
    }
    double obs_p1(int next, int a) const;

    const Hypothesis& hypothesis_of_state(int s) const;
    int camera_of_state(int s) const;  // camera index; Variant A has none (-1)

    /// The prior's probabilities reordered to this model's hypothesis order.
    /// The prior must cover exactly this model's hypotheses (any order).
    std::vector<double> hypothesis_probabilities(const Belief& prior) const;

    /// P(O1 | hypothesis h, the camera of action a). Variant-independent.
    double obs_p1_hypothesis(int a, int h) const {
        return p1_[static_cast<std::size_t>(a) * hypotheses_.size() + h];
    }

    /// State distribution for a hypothesis prior. Variant B puts each
    /// hypothesis' mass on the state holding the given camera; Variant A
    /// ignores the camera.
    std::vector<double> initial_state_belief(const Belief& prior, const CameraView& camera) const;
    std::vector<double> initial_state_belief(const Belief& prior) const;

    /// Where the camera rests before the first action: lowest center, zoom 1.
    CameraView default_camera() const { return {centers_.front(), 1}; }

    /// Sums a state distribution down to hypothesis order.
    std::vector<double> hypothesis_marginal(std::span<const double> state_belief) const;

private:
    PomdpModel(ModelVariant variant, const GridWorld& world, std::vector<BlockId> centers,
               int zoom_levels, ObservationModel observation, double gamma, bool allow_absent);

    int camera_count() const { return static_cast<int>(centers_.size()) * zoom_levels_; }
    CameraView camera_view(int cam) const;

    ModelVariant variant_;
    GridWorld world_;
    std::vector<BlockId> centers_;
    int zoom_levels_;
    ObservationModel observation_;
    double gamma_;
    std::vector<Hypothesis> hypotheses_;
    std::vector<double> p1_;  // [camera][hypothesis] -> P(O1)
};

/// Mode reward rho(b): the highest hypothesis probability.
double belief_reward(const Belief& b);

/// rho over a dense state distribution: its largest entry. Equals the
/// best inner product with the unit alpha set.
double mode_value(std::span<const double> state_belief);

/// Linear stand-in for rho in the state-based file format: hitting the
/// object's block at zoom 1 pays `hit`; every snapshot costs `step_cost`.
struct RewardSurrogate {
    double hit = 1.0;
    double step_cost = 0.01;
};

/// R(s, a) under the surrogate: hit - step_cost when the action is a zoom-1
/// snapshot of the state's hypothesis block, otherwise -step_cost.
double surrogate_reward(const PomdpModel& model, int state, int action,
                        const RewardSurrogate& surrogate);

}  // namespace scout
