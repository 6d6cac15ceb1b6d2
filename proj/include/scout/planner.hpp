#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scout/belief.hpp"
#include "scout/observation.hpp"
#include "scout/pomdp.hpp"
#include "scout/rng.hpp"

namespace scout {

/// Whether the localization reward max_h b(h) is collected every step or
/// only at the end of the lookahead.
enum class ObjectiveMode { PerStepReward, TerminalReward };

std::string to_string(ObjectiveMode mode);

/// Expectimax refuses instances whose search tree exceeds this many nodes
/// instead of silently running for hours.
inline constexpr std::uint64_t kDefaultNodeBudget = 5'000'000;

/// Two candidate values within this distance count as tied, which hands the
/// choice to the deterministic action preference (higher zoom, then lower
/// center index).
inline constexpr double kValueTieTolerance = 1e-12;

struct PlanResult {
    double value = 0.0;
    /// Maximizing action at the root; -1 when depth is 0 (no lookahead).
    int action_index = -1;
};

/// Exact finite-depth value of a state distribution, by full enumeration of
/// the action/observation tree. Zero-probability observation branches are
/// skipped. Throws BudgetExceededError once the visited node count passes
/// node_budget.
PlanResult exact_expectimax(const PomdpModel& model, std::span<const double> state_belief,
                            int depth, ObjectiveMode mode = ObjectiveMode::PerStepReward,
                            std::uint64_t node_budget = kDefaultNodeBudget);

/// Same, from a hypothesis prior. Variant B starts from the default camera.
PlanResult exact_expectimax(const PomdpModel& model, const Belief& prior, int depth,
                            ObjectiveMode mode = ObjectiveMode::PerStepReward,
                            std::uint64_t node_budget = kDefaultNodeBudget);

/// One linear piece of a piecewise-linear convex value function, tagged with
/// the action that generated it.
struct AlphaVector {
    std::vector<double> coef;
    SnapshotAction action;

    double value_at(std::span<const double> state_belief) const;
    bool operator==(const AlphaVector&) const = default;
};

class AlphaVectorSet {
public:
    explicit AlphaVectorSet(std::vector<AlphaVector> alphas);

    const std::vector<AlphaVector>& alphas() const { return alphas_; }
    std::size_t size() const { return alphas_.size(); }

    /// max over alphas of <coef, state_belief>.
    double value_at(std::span<const double> state_belief) const;

    /// Action of the maximizing alpha; ties go to the higher zoom, then the
    /// lower center index.
    SnapshotAction best_action(std::span<const double> state_belief) const;

private:
    std::vector<AlphaVector> alphas_;
};

/// Point-based value iteration over a fixed belief set. Starts from the unit
/// alphas (the zero-step value), runs `iterations` rounds of point-based
/// backups, and keeps the union of old and new alphas minus exact duplicates
/// and pointwise-dominated entries. The result never overestimates the
/// depth-`iterations` expectimax value and never falls below the previous
/// iteration anywhere.
AlphaVectorSet pbvi_solve(const PomdpModel& model, const std::vector<std::vector<double>>& beliefs,
                          int iterations, ObjectiveMode mode = ObjectiveMode::PerStepReward);

/// Grows a belief set for pbvi_solve by repeatedly adding, per held belief
/// and action, the observation successor farthest (L1) from the set. Stops
/// at max_beliefs or when no candidate is farther than 1e-6 from the set.
/// Deterministic.
std::vector<std::vector<double>> expand_belief_set(const PomdpModel& model,
                                                   std::span<const double> initial,
                                                   std::size_t max_beliefs);

/// One-step lookahead: the action maximizing the expected posterior mode
/// probability, ties to higher zoom then lower center.
SnapshotAction greedy_myopic(const PomdpModel& model, const Belief& belief);

/// One-step lookahead against a solved value function: maximizes the
/// expected posterior peak plus the discounted set value of the successor.
/// With the untrained unit-alpha set this coincides with greedy_myopic. The
/// solved policy executes through this rather than the maximizing alpha's
/// action tag, which can stall on beliefs far from the sampled set.
SnapshotAction lookahead_action(const PomdpModel& model, const AlphaVectorSet& values,
                                std::span<const double> state_belief);

/// Episode stop test: a Zoom-1 view that reported a detection, a belief mode
/// at or above tau, or the step limit.
bool is_terminal(const std::optional<SnapshotAction>& last_action,
                 const std::optional<Observation>& last_observation, const Belief& belief,
                 double tau, int steps, int max_steps);

class Policy {
public:
    virtual ~Policy() = default;
    virtual SnapshotAction next_action(const Belief& belief) = 0;
    /// Forget any per-episode state (sweep position, assumed camera).
    virtual void reset() {}
};

enum class PolicyKind { Greedy, Random, Sweep, Pbvi };

std::string to_string(PolicyKind kind);

struct PolicyParams {
    /// Seed for the random baseline.
    std::uint64_t seed = 0;
    int pbvi_iterations = 3;
    std::size_t pbvi_max_beliefs = 200;
    ObjectiveMode pbvi_mode = ObjectiveMode::PerStepReward;
};

/// Expands a belief set from the given prior and runs pbvi_solve with the
/// given parameters. The overload without a prior starts from the uniform
/// belief over the model's hypotheses (Absent, when modeled, gets an equal
/// share).
AlphaVectorSet solve_pbvi_policy(const PomdpModel& model, const PolicyParams& params,
                                 const Belief& prior);
AlphaVectorSet solve_pbvi_policy(const PomdpModel& model, const PolicyParams& params);

/// Builds a ready-to-run policy. For PolicyKind::Pbvi a pre-solved alpha set
/// may be shared across episodes; when absent one is solved here.
std::unique_ptr<Policy> make_policy(PolicyKind kind, const PomdpModel& model,
                                    const PolicyParams& params = {},
                                    std::shared_ptr<const AlphaVectorSet> solved = nullptr);

}  // namespace scout
