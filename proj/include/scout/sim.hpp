#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "scout/belief.hpp"
#include "scout/observation.hpp"
#include "scout/planner.hpp"
#include "scout/pomdp.hpp"
#include "scout/world.hpp"

namespace scout {

/// Everything needed to reproduce an episode: the model inputs, the policy,
/// the truth source and the seed. Observation centers are derived from the
/// object spec (checkerboard reduction kicks in at aspect ratio >= 2).
struct EpisodeConfig {
    GridWorld world{8, 8};
    ObjectSpec object = ObjectSpec::single_cell();
    ObservationModel observation = ObservationModel::perfect(3);
    int zoom_levels = 3;
    ModelVariant variant = ModelVariant::A;
    double gamma = 0.95;
    double tau = 0.99;
    bool allow_absent = false;
    double absent_prior_mass = 0.0;
    PolicyKind policy = PolicyKind::Greedy;
    /// seed inside these params is ignored; episode streams are derived from
    /// the episode seed instead.
    PolicyParams policy_params{};
    /// Fixed ground truth; when unset each episode draws one uniformly from
    /// the enumerated poses (Absent included when allowed).
    std::optional<ObjectPose> true_pose;
    std::uint64_t seed = 0;
    int max_steps = 200;
};

enum class StopReason { Zoom1Detection, ModeThreshold, StepLimit };

std::string to_string(StopReason reason);

/// One executed step: the chosen view, what came back, and the posterior
/// summary after the Bayes update.
struct StepRecord {
    SnapshotAction action;
    Observation observation;
    double mode_value = 0.0;
    double entropy = 0.0;

    bool operator==(const StepRecord&) const = default;
};

struct EpisodeResult {
    std::uint64_t episode_seed = 0;
    ObjectPose true_pose;
    std::vector<StepRecord> steps;
    int steps_taken = 0;
    StopReason reason = StopReason::StepLimit;
    Hypothesis declared = Hypothesis::absent();
    /// True only when the episode stopped before the step limit and the
    /// declared hypothesis matches the truth: a declared block lies in the
    /// true occupied set, or Absent was declared and the object is absent.
    bool success = false;
    double initial_entropy = 0.0;
    double final_entropy = 0.0;
    double final_mode = 0.0;

    bool operator==(const EpisodeResult&) const = default;
};

/// Order-independent aggregate over a batch. steps_ci95 is the half-width of
/// the normal-approximation 95% interval for mean_steps (0 below 2 episodes).
struct BatchMetrics {
    int episodes = 0;
    double success_rate = 0.0;
    double mean_steps = 0.0;
    double median_steps = 0.0;
    double steps_ci95 = 0.0;
    double mean_initial_entropy = 0.0;
    double mean_final_entropy = 0.0;

    bool operator==(const BatchMetrics&) const = default;
};

struct BatchResult {
    std::vector<EpisodeResult> episodes;
    BatchMetrics metrics;
};

/// The POMDP the configured policies plan against, with observation centers
/// reduced by the object's aspect ratio. The same build backs every episode.
PomdpModel build_model(const EpisodeConfig& config);

/// Runs one fully seeded episode: the policy picks a view, an observation is
/// sampled from the true pose, the belief is updated, and the stop test runs.
/// Deterministic given the config. Pose draw, observation noise and the
/// random baseline use separate streams derived from config.seed.
EpisodeResult run_episode(const EpisodeConfig& config);

/// Runs n episodes with per-episode seeds derive_seed(config.seed, index).
/// Episode preparation (model build, policy solve) happens once. Workers > 1
/// run episodes concurrently; results are identical for any worker count.
BatchResult run_batch(const EpisodeConfig& config, int n, int workers = 1);

BatchMetrics aggregate_metrics(std::span<const EpisodeResult> episodes);

/// One episode as a JSON document ("scout-episode/1").
nlohmann::ordered_json episode_to_json(const EpisodeResult& result);

/// Line-delimited episode log: one dumped document per line.
std::string episodes_to_jsonl(std::span<const EpisodeResult> episodes);

/// Batch metrics as a JSON document ("scout-metrics/1"), labeled per row.
nlohmann::ordered_json metrics_to_json(
    std::span<const std::pair<std::string, BatchMetrics>> rows);

/// The same rows as CSV with a fixed header.
std::string metrics_to_csv(std::span<const std::pair<std::string, BatchMetrics>> rows);

}  // namespace scout
