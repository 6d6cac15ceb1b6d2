#include "scout/sim.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "scout/errors.hpp"
#include "scout/rng.hpp"

namespace scout {

namespace {

// Stream indices salting the episode seed; one independent generator per
// random ingredient so changing one never shifts another.
constexpr std::uint64_t kPoseStream = 0;
constexpr std::uint64_t kObservationStream = 1;
constexpr std::uint64_t kPolicyStream = 2;

std::string format_double(double v) {
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw FormatError("cannot format numeric value");
    return std::string(buf, end);
}

void validate_config(const EpisodeConfig& config) {
    if (config.max_steps < 0) {
        throw std::invalid_argument("max_steps must be nonnegative");
    }
    if (!(config.tau > 0.0) || config.tau > 1.0) {
        throw std::invalid_argument("tau must lie in (0, 1]");
    }
    config.object.validate();
    if (config.true_pose) {
        const ObjectPose& pose = *config.true_pose;
        if (pose.is_absent()) {
            if (!config.allow_absent) {
                throw std::invalid_argument("true pose is Absent but the config excludes Absent");
            }
        } else {
            if (!config.world.contains(pose.anchor)) {
                throw std::invalid_argument("true pose anchor " + std::to_string(pose.anchor) +
                                            " is outside the world");
            }
            if (pose.orientation < 0 ||
                pose.orientation >= static_cast<int>(config.object.orientations.size())) {
                throw std::invalid_argument("true pose orientation " +
                                            std::to_string(pose.orientation) + " is undefined");
            }
            if (!pose_fits(config.world, config.object, pose.anchor, pose.orientation)) {
                throw std::invalid_argument("true pose does not fit inside the world");
            }
        }
    }
}

struct Prepared {
    PomdpModel model;
    Belief prior;
    std::vector<ObjectPose> poses;
    std::shared_ptr<const AlphaVectorSet> alphas;
};

Prepared prepare(const EpisodeConfig& config) {
    PomdpModel model = build_model(config);
    Belief prior = Belief::uniform_prior(model.hypotheses(), config.absent_prior_mass);
    std::vector<ObjectPose> poses =
        enumerate_poses(config.world, config.object, config.allow_absent);
    std::shared_ptr<const AlphaVectorSet> alphas;
    if (config.policy == PolicyKind::Pbvi) {
        alphas = std::make_shared<const AlphaVectorSet>(
            solve_pbvi_policy(model, config.policy_params, prior));
    }
    return Prepared{std::move(model), std::move(prior), std::move(poses), std::move(alphas)};
}

bool declared_matches(const Hypothesis& declared, const ObjectPose& truth,
                      std::span<const BlockId> occupied) {
    if (declared.is_absent()) return truth.is_absent();
    return std::find(occupied.begin(), occupied.end(), declared.block) != occupied.end();
}

EpisodeResult run_prepared(const Prepared& prep, const EpisodeConfig& config,
                           std::uint64_t episode_seed) {
    Rng pose_rng(derive_seed(episode_seed, kPoseStream));
    Rng obs_rng(derive_seed(episode_seed, kObservationStream));
    PolicyParams params = config.policy_params;
    params.seed = derive_seed(episode_seed, kPolicyStream);
    const auto policy = make_policy(config.policy, prep.model, params, prep.alphas);

    EpisodeResult result;
    result.episode_seed = episode_seed;
    result.true_pose =
        config.true_pose
            ? *config.true_pose
            : prep.poses[static_cast<std::size_t>(pose_rng.uniform_int(prep.poses.size()))];
    const std::vector<BlockId> occupied =
        occupied_blocks(config.world, config.object, result.true_pose);

    Belief belief = prep.prior;
    result.initial_entropy = entropy(belief);
    std::optional<SnapshotAction> last_action;
    std::optional<Observation> last_observation;
    int steps = 0;
    while (!is_terminal(last_action, last_observation, belief, config.tau, steps,
                        config.max_steps)) {
        const SnapshotAction action = policy->next_action(belief);
        const CameraView view = action.view();
        const Observation observed =
            sample_observation(config.observation, config.world, occupied, view, obs_rng);
        try {
            belief = bayes_update(belief, view, observed, config.observation, config.world);
        } catch (const ImpossibleObservationError& e) {
            throw ImpossibleObservationError("episode seed " + std::to_string(episode_seed) +
                                             ", step " + std::to_string(steps + 1) + ": " +
                                             e.what());
        }
        ++steps;
        const auto [peak_hyp, peak] = mode(belief);
        static_cast<void>(peak_hyp);
        result.steps.push_back(StepRecord{action, observed, peak, entropy(belief)});
        last_action = action;
        last_observation = observed;
    }

    result.steps_taken = steps;
    // Reason precedence mirrors is_terminal.
    if (last_action && last_observation && last_action->zoom == 1 &&
        *last_observation == Observation::O1) {
        result.reason = StopReason::Zoom1Detection;
    } else if (mode(belief).second >= config.tau) {
        result.reason = StopReason::ModeThreshold;
    } else {
        result.reason = StopReason::StepLimit;
    }
    const auto [declared, peak] = mode(belief);
    result.declared = declared;
    result.final_mode = peak;
    result.final_entropy = entropy(belief);
    result.success = result.reason != StopReason::StepLimit &&
                     declared_matches(declared, result.true_pose, occupied);
    return result;
}

}  // namespace

std::string to_string(StopReason reason) {
    switch (reason) {
        case StopReason::Zoom1Detection: return "zoom1_detection";
        case StopReason::ModeThreshold: return "mode_threshold";
        case StopReason::StepLimit: return "step_limit";
    }
    throw std::invalid_argument("unknown stop reason");
}

PomdpModel build_model(const EpisodeConfig& config) {
    validate_config(config);
    auto centers = reduced_centers(config.world, config.object);
    return config.variant == ModelVariant::A
               ? PomdpModel::build_variant_a(config.world, std::move(centers), config.zoom_levels,
                                             config.observation, config.gamma,
                                             config.allow_absent)
               : PomdpModel::build_variant_b(config.world, std::move(centers), config.zoom_levels,
                                             config.observation, config.gamma,
                                             config.allow_absent);
}

EpisodeResult run_episode(const EpisodeConfig& config) {
    return run_prepared(prepare(config), config, config.seed);
}

BatchResult run_batch(const EpisodeConfig& config, int n, int workers) {
    if (n < 1) throw std::invalid_argument("episode count must be at least 1");
    if (workers < 1) throw std::invalid_argument("worker count must be at least 1");
    const Prepared prep = prepare(config);

    BatchResult out;
    out.episodes.resize(static_cast<std::size_t>(n));
    const auto run_index = [&](int i) {
        out.episodes[static_cast<std::size_t>(i)] =
            run_prepared(prep, config, derive_seed(config.seed, static_cast<std::uint64_t>(i)));
    };

    const int pool_size = std::min(workers, n);
    if (pool_size == 1) {
        for (int i = 0; i < n; ++i) run_index(i);
    } else {
        std::atomic<int> next{0};
        std::mutex error_mutex;
        std::exception_ptr first_error;
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(pool_size));
        for (int t = 0; t < pool_size; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    const int i = next.fetch_add(1);
                    if (i >= n) return;
                    try {
                        run_index(i);
                    } catch (...) {
                        const std::lock_guard<std::mutex> lock(error_mutex);
                        if (!first_error) first_error = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (std::thread& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    out.metrics = aggregate_metrics(out.episodes);
    return out;
}

BatchMetrics aggregate_metrics(std::span<const EpisodeResult> episodes) {
    if (episodes.empty()) throw std::invalid_argument("no episodes to aggregate");
    BatchMetrics m;
    m.episodes = static_cast<int>(episodes.size());
    const double n = static_cast<double>(episodes.size());

    std::vector<double> steps;
    steps.reserve(episodes.size());
    int successes = 0;
    double entropy_in = 0.0;
    double entropy_out = 0.0;
    for (const EpisodeResult& e : episodes) {
        steps.push_back(static_cast<double>(e.steps_taken));
        if (e.success) ++successes;
        entropy_in += e.initial_entropy;
        entropy_out += e.final_entropy;
    }
    m.success_rate = successes / n;
    m.mean_initial_entropy = entropy_in / n;
    m.mean_final_entropy = entropy_out / n;

    double total = 0.0;
    for (double s : steps) total += s;
    m.mean_steps = total / n;

    std::sort(steps.begin(), steps.end());
    const std::size_t mid = steps.size() / 2;
    m.median_steps =
        steps.size() % 2 == 1 ? steps[mid] : (steps[mid - 1] + steps[mid]) / 2.0;

    if (episodes.size() > 1) {
        double ss = 0.0;
        for (double s : steps) ss += (s - m.mean_steps) * (s - m.mean_steps);
        const double sd = std::sqrt(ss / (n - 1.0));
        m.steps_ci95 = 1.96 * sd / std::sqrt(n);
    }
    return m;
}

nlohmann::ordered_json episode_to_json(const EpisodeResult& result) {
    nlohmann::ordered_json doc;
    doc["format"] = "scout-episode/1";
    doc["seed"] = result.episode_seed;
    if (result.true_pose.is_absent()) {
        doc["true_pose"] = "absent";
    } else {
        doc["true_pose"] = nlohmann::ordered_json{{"anchor", result.true_pose.anchor},
                                                  {"orientation", result.true_pose.orientation}};
    }
    doc["steps_taken"] = result.steps_taken;
    doc["reason"] = to_string(result.reason);
    doc["declared"] = to_string(result.declared);
    doc["success"] = result.success;
    doc["initial_entropy"] = result.initial_entropy;
    doc["final_entropy"] = result.final_entropy;
    doc["final_mode"] = result.final_mode;
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    for (const StepRecord& s : result.steps) {
        steps.push_back(nlohmann::ordered_json{{"action", to_string(s.action)},
                                               {"observation", to_string(s.observation)},
                                               {"mode", s.mode_value},
                                               {"entropy", s.entropy}});
    }
    doc["steps"] = std::move(steps);
    return doc;
}

std::string episodes_to_jsonl(std::span<const EpisodeResult> episodes) {
    std::string out;
    for (const EpisodeResult& e : episodes) {
        out += episode_to_json(e).dump();
        out += '\n';
    }
    return out;
}

namespace {

void check_label(const std::string& label) {
    if (label.empty() || label.find_first_of(",\"\n") != std::string::npos) {
        throw std::invalid_argument("metrics row label must be nonempty and free of "
                                    "commas, quotes and newlines");
    }
}

}  // namespace

nlohmann::ordered_json metrics_to_json(
    std::span<const std::pair<std::string, BatchMetrics>> rows) {
    nlohmann::ordered_json doc;
    doc["format"] = "scout-metrics/1";
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& [label, m] : rows) {
        check_label(label);
        out.push_back(nlohmann::ordered_json{{"label", label},
                                             {"episodes", m.episodes},
                                             {"success_rate", m.success_rate},
                                             {"mean_steps", m.mean_steps},
                                             {"median_steps", m.median_steps},
                                             {"steps_ci95", m.steps_ci95},
                                             {"mean_initial_entropy", m.mean_initial_entropy},
                                             {"mean_final_entropy", m.mean_final_entropy}});
    }
    doc["rows"] = std::move(out);
    return doc;
}

std::string metrics_to_csv(std::span<const std::pair<std::string, BatchMetrics>> rows) {
    std::string out = "label,episodes,success_rate,mean_steps,median_steps,steps_ci95,"
                      "mean_initial_entropy,mean_final_entropy\n";
    for (const auto& [label, m] : rows) {
        check_label(label);
        out += label;
        out += ',';
        out += std::to_string(m.episodes);
        for (double v : {m.success_rate, m.mean_steps, m.median_steps, m.steps_ci95,
                         m.mean_initial_entropy, m.mean_final_entropy}) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

}  // namespace scout
