#include "scout/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "scout/errors.hpp"

namespace scout {

namespace {

constexpr Observation kObservations[] = {Observation::O1, Observation::O2};

void check_state_belief(const PomdpModel& model, std::span<const double> b, const char* what) {
    if (static_cast<int>(b.size()) != model.state_count()) {
        throw std::invalid_argument(std::string(what) + " has " + std::to_string(b.size()) +
                                    " entries, model has " + std::to_string(model.state_count()) +
                                    " states");
    }
    for (double v : b) {
        if (!(v >= 0.0)) {
            throw std::invalid_argument(std::string(what) + " has a negative entry");
        }
    }
}

// Moves the mass in `b` through the deterministic transition of action a.
void push_mass(const PomdpModel& model, std::span<const double> b, int a,
               std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (int s = 0; s < model.state_count(); ++s) {
        if (b[s] != 0.0) out[static_cast<std::size_t>(model.next_state(s, a))] += b[s];
    }
}

// Weights pushed mass by one observation's likelihood; returns the branch mass.
double weigh_mass(const PomdpModel& model, const std::vector<double>& pushed, int a,
                  Observation o, std::vector<double>& out) {
    double mass = 0.0;
    for (int s = 0; s < model.state_count(); ++s) {
        const double w = pushed[s] == 0.0 ? 0.0 : pushed[s] * model.obs_prob(o, s, a);
        out[static_cast<std::size_t>(s)] = w;
        mass += w;
    }
    return mass;
}

struct ExpectimaxEngine {
    const PomdpModel& model;
    ObjectiveMode mode;
    std::uint64_t budget;
    std::uint64_t nodes = 0;
    // One pair of scratch vectors per tree level; a level's buffers are only
    // read while the level below fills its own.
    std::vector<std::vector<double>> pushed;
    std::vector<std::vector<double>> weighted;

    ExpectimaxEngine(const PomdpModel& m, ObjectiveMode md, std::uint64_t b, int depth)
        : model(m), mode(md), budget(b) {
        pushed.resize(static_cast<std::size_t>(depth) + 1);
        weighted.resize(static_cast<std::size_t>(depth) + 1);
        for (auto& v : pushed) v.resize(static_cast<std::size_t>(m.state_count()));
        for (auto& v : weighted) v.resize(static_cast<std::size_t>(m.state_count()));
    }

    // Value of the unnormalized mass vector `btilde` with `depth` actions
    // left. Total mass factors out of every term, so branches are never
    // normalized; zero-mass branches contribute nothing and are skipped.
    double value(std::span<const double> btilde, int depth, int* best_action) {
        if (++nodes > budget) {
            throw BudgetExceededError("expectimax search passed the node budget of " +
                                      std::to_string(budget) + " belief nodes");
        }
        if (depth == 0) return *std::max_element(btilde.begin(), btilde.end());

        auto& push = pushed[static_cast<std::size_t>(depth)];
        auto& wobs = weighted[static_cast<std::size_t>(depth)];
        double vmax = 0.0;
        double champ_score = 0.0;
        int champ = -1;
        for (int a = 0; a < model.action_count(); ++a) {
            push_mass(model, btilde, a, push);
            double total = 0.0;
            for (const Observation o : kObservations) {
                const double mass = weigh_mass(model, push, a, o, wobs);
                if (mass <= 0.0) continue;
                if (mode == ObjectiveMode::PerStepReward) {
                    total += *std::max_element(wobs.begin(), wobs.end());
                }
                total += model.gamma() * value(wobs, depth - 1, nullptr);
            }
            if (champ < 0 || total > champ_score + kValueTieTolerance) {
                champ_score = total;
                champ = a;
            } else if (total >= champ_score - kValueTieTolerance &&
                       tie_prefers(model.action(a), model.action(champ))) {
                champ = a;
                if (total > champ_score) champ_score = total;
            }
            if (total > vmax) vmax = total;
        }
        if (best_action != nullptr) *best_action = champ;
        return vmax;
    }
};

double dot(const std::vector<double>& coef, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < coef.size(); ++i) acc += coef[i] * b[i];
    return acc;
}

// Point-based backup at one belief. Alphas returned here are pointwise lower
// bounds on the value one step deeper than anything in gamma_set, because the
// reward state and the successor alpha are frozen to this belief's maximizers
// and skipped zero-mass branches would only have added nonnegative terms.
AlphaVector backup_at(const PomdpModel& model, const std::vector<AlphaVector>& gamma_set,
                      std::span<const double> b, ObjectiveMode mode, std::vector<double>& push,
                      std::vector<double>& wobs) {
    const int S = model.state_count();
    std::vector<double> coef(static_cast<std::size_t>(S));
    std::vector<double> best_coef;
    double champ_score = 0.0;
    int champ = -1;
    for (int a = 0; a < model.action_count(); ++a) {
        push_mass(model, b, a, push);
        std::fill(coef.begin(), coef.end(), 0.0);
        for (const Observation o : kObservations) {
            const double mass = weigh_mass(model, push, a, o, wobs);
            if (mass <= 0.0) continue;
            const int reward_state = static_cast<int>(
                std::max_element(wobs.begin(), wobs.end()) - wobs.begin());
            std::size_t best_beta = 0;
            double beta_score = dot(gamma_set[0].coef, wobs);
            for (std::size_t g = 1; g < gamma_set.size(); ++g) {
                const double score = dot(gamma_set[g].coef, wobs);
                if (score > beta_score) {
                    beta_score = score;
                    best_beta = g;
                }
            }
            const std::vector<double>& beta = gamma_set[best_beta].coef;
            for (int s = 0; s < S; ++s) {
                const int ns = model.next_state(s, a);
                double inner = model.gamma() * beta[static_cast<std::size_t>(ns)];
                if (mode == ObjectiveMode::PerStepReward && ns == reward_state) inner += 1.0;
                coef[static_cast<std::size_t>(s)] += model.obs_prob(o, ns, a) * inner;
            }
        }
        const double score = dot(coef, b);
        if (champ < 0 || score > champ_score + kValueTieTolerance) {
            champ_score = score;
            champ = a;
            best_coef = coef;
        } else if (score >= champ_score - kValueTieTolerance &&
                   tie_prefers(model.action(a), model.action(champ))) {
            if (score > champ_score) champ_score = score;
            champ = a;
            best_coef = coef;
        }
    }
    return AlphaVector{std::move(best_coef), model.action(champ)};
}

// Drops exact duplicates (first occurrence wins) and entries pointwise
// dominated by a surviving entry. Neither removal changes the pointwise max.
std::vector<AlphaVector> prune_alphas(std::vector<AlphaVector> set) {
    const std::size_t n = set.size();
    std::vector<char> removed(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n && !removed[i]; ++j) {
            if (j == i || removed[j]) continue;
            bool geq = true;
            bool strict = false;
            for (std::size_t s = 0; s < set[i].coef.size() && geq; ++s) {
                if (set[j].coef[s] < set[i].coef[s]) geq = false;
                else if (set[j].coef[s] > set[i].coef[s]) strict = true;
            }
            if (geq && (strict || j < i)) removed[i] = 1;
        }
    }
    std::vector<AlphaVector> kept;
    kept.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!removed[i]) kept.push_back(std::move(set[i]));
    }
    return kept;
}

}  // namespace

std::string to_string(ObjectiveMode mode) {
    return mode == ObjectiveMode::PerStepReward ? "per_step" : "terminal";
}

std::string to_string(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::Greedy: return "greedy";
        case PolicyKind::Random: return "random";
        case PolicyKind::Sweep: return "sweep";
        case PolicyKind::Pbvi: return "pbvi";
    }
    throw std::invalid_argument("unknown policy kind");
}

PlanResult exact_expectimax(const PomdpModel& model, std::span<const double> state_belief,
                            int depth, ObjectiveMode mode, std::uint64_t node_budget) {
    if (depth < 0) throw std::invalid_argument("lookahead depth must be nonnegative");
    check_state_belief(model, state_belief, "state belief");
    ExpectimaxEngine engine(model, mode, node_budget, depth);
    PlanResult result;
    int best = -1;
    result.value = engine.value(state_belief, depth, &best);
    result.action_index = depth == 0 ? -1 : best;
    return result;
}

PlanResult exact_expectimax(const PomdpModel& model, const Belief& prior, int depth,
                            ObjectiveMode mode, std::uint64_t node_budget) {
    return exact_expectimax(model, model.initial_state_belief(prior), depth, mode, node_budget);
}

double AlphaVector::value_at(std::span<const double> state_belief) const {
    if (state_belief.size() != coef.size()) {
        throw std::invalid_argument("state belief has " + std::to_string(state_belief.size()) +
                                    " entries, alpha has " + std::to_string(coef.size()));
    }
    return dot(coef, state_belief);
}

AlphaVectorSet::AlphaVectorSet(std::vector<AlphaVector> alphas) : alphas_(std::move(alphas)) {
    if (alphas_.empty()) throw std::invalid_argument("alpha vector set is empty");
    for (const AlphaVector& a : alphas_) {
        if (a.coef.size() != alphas_.front().coef.size() || a.coef.empty()) {
            throw std::invalid_argument("alpha vectors disagree on state count");
        }
    }
}

double AlphaVectorSet::value_at(std::span<const double> state_belief) const {
    double best = alphas_.front().value_at(state_belief);
    for (std::size_t i = 1; i < alphas_.size(); ++i) {
        best = std::max(best, alphas_[i].value_at(state_belief));
    }
    return best;
}

SnapshotAction AlphaVectorSet::best_action(std::span<const double> state_belief) const {
    double champ_score = alphas_.front().value_at(state_belief);
    std::size_t champ = 0;
    for (std::size_t i = 1; i < alphas_.size(); ++i) {
        const double score = alphas_[i].value_at(state_belief);
        if (score > champ_score + kValueTieTolerance) {
            champ_score = score;
            champ = i;
        } else if (score >= champ_score - kValueTieTolerance &&
                   tie_prefers(alphas_[i].action, alphas_[champ].action)) {
            if (score > champ_score) champ_score = score;
            champ = i;
        }
    }
    return alphas_[champ].action;
}

AlphaVectorSet pbvi_solve(const PomdpModel& model, const std::vector<std::vector<double>>& beliefs,
                          int iterations, ObjectiveMode mode) {
    if (iterations < 0) throw std::invalid_argument("iteration count must be nonnegative");
    if (beliefs.empty()) throw std::invalid_argument("belief set is empty");
    for (const auto& b : beliefs) check_state_belief(model, b, "belief set entry");

    const std::size_t S = static_cast<std::size_t>(model.state_count());
    // The zero-step value max_s b(s) as a set of unit alphas. Their action tag
    // is the globally tie-preferred one so untrained sets act deterministically.
    const SnapshotAction preferred{model.centers().front(), model.zoom_levels()};
    std::vector<AlphaVector> gamma_set;
    gamma_set.reserve(S);
    for (std::size_t s = 0; s < S; ++s) {
        std::vector<double> unit(S, 0.0);
        unit[s] = 1.0;
        gamma_set.push_back(AlphaVector{std::move(unit), preferred});
    }

    std::vector<double> push(S), wobs(S);
    for (int it = 0; it < iterations; ++it) {
        std::vector<AlphaVector> next = gamma_set;
        next.reserve(gamma_set.size() + beliefs.size());
        for (const auto& b : beliefs) {
            next.push_back(backup_at(model, gamma_set, b, mode, push, wobs));
        }
        gamma_set = prune_alphas(std::move(next));
    }
    return AlphaVectorSet(std::move(gamma_set));
}

std::vector<std::vector<double>> expand_belief_set(const PomdpModel& model,
                                                   std::span<const double> initial,
                                                   std::size_t max_beliefs) {
    check_state_belief(model, initial, "initial belief");
    if (max_beliefs < 1) throw std::invalid_argument("belief cap must be at least 1");
    double mass = 0.0;
    for (double v : initial) mass += v;
    if (mass <= 0.0) throw std::invalid_argument("initial belief has no mass");

    const std::size_t S = static_cast<std::size_t>(model.state_count());
    std::vector<std::vector<double>> set;
    set.emplace_back(initial.begin(), initial.end());
    for (double& v : set.front()) v /= mass;

    const auto distance_to_set = [&](const std::vector<double>& b) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& held : set) {
            double d = 0.0;
            for (std::size_t s = 0; s < S; ++s) d += std::abs(b[s] - held[s]);
            best = std::min(best, d);
        }
        return best;
    };

    std::vector<double> push(S), wobs(S);
    bool grew = true;
    while (grew && set.size() < max_beliefs) {
        grew = false;
        const std::size_t held = set.size();
        for (std::size_t i = 0; i < held && set.size() < max_beliefs; ++i) {
            for (int a = 0; a < model.action_count() && set.size() < max_beliefs; ++a) {
                double best_dist = -1.0;
                std::vector<double> best_b;
                push_mass(model, set[i], a, push);
                for (const Observation o : kObservations) {
                    const double branch = weigh_mass(model, push, a, o, wobs);
                    if (branch <= 0.0) continue;
                    std::vector<double> posterior(S);
                    for (std::size_t s = 0; s < S; ++s) posterior[s] = wobs[s] / branch;
                    const double d = distance_to_set(posterior);
                    if (d > best_dist) {
                        best_dist = d;
                        best_b = std::move(posterior);
                    }
                }
                if (best_dist > 1e-6) {
                    set.push_back(std::move(best_b));
                    grew = true;
                }
            }
        }
    }
    return set;
}

SnapshotAction greedy_myopic(const PomdpModel& model, const Belief& belief) {
    const std::vector<double> probs = model.hypothesis_probabilities(belief);
    const int H = static_cast<int>(probs.size());
    double champ_score = 0.0;
    int champ = -1;
    for (int a = 0; a < model.action_count(); ++a) {
        // sum over observations of the posterior's unnormalized peak, which
        // equals the expected posterior mode probability.
        double score = 0.0;
        for (const Observation o : kObservations) {
            double peak = 0.0;
            for (int h = 0; h < H; ++h) {
                const double p1 = model.obs_p1_hypothesis(a, h);
                const double w = probs[static_cast<std::size_t>(h)] *
                                 (o == Observation::O1 ? p1 : 1.0 - p1);
                peak = std::max(peak, w);
            }
            score += peak;
        }
        if (champ < 0 || score > champ_score + kValueTieTolerance) {
            champ_score = score;
            champ = a;
        } else if (score >= champ_score - kValueTieTolerance &&
                   tie_prefers(model.action(a), model.action(champ))) {
            if (score > champ_score) champ_score = score;
            champ = a;
        }
    }
    return model.action(champ);
}

SnapshotAction lookahead_action(const PomdpModel& model, const AlphaVectorSet& values,
                                std::span<const double> state_belief) {
    check_state_belief(model, state_belief, "state belief");
    const std::size_t S = static_cast<std::size_t>(model.state_count());
    std::vector<double> push(S), wobs(S);
    double champ_score = 0.0;
    int champ = -1;
    for (int a = 0; a < model.action_count(); ++a) {
        push_mass(model, state_belief, a, push);
        double total = 0.0;
        for (const Observation o : kObservations) {
            const double mass = weigh_mass(model, push, a, o, wobs);
            if (mass <= 0.0) continue;
            // value_at is a max of linear functions, so the unnormalized
            // branch mass factors through it.
            total += *std::max_element(wobs.begin(), wobs.end());
            total += model.gamma() * values.value_at(wobs);
        }
        if (champ < 0 || total > champ_score + kValueTieTolerance) {
            champ_score = total;
            champ = a;
        } else if (total >= champ_score - kValueTieTolerance &&
                   tie_prefers(model.action(a), model.action(champ))) {
            if (total > champ_score) champ_score = total;
            champ = a;
        }
    }
    return model.action(champ);
}

bool is_terminal(const std::optional<SnapshotAction>& last_action,
                 const std::optional<Observation>& last_observation, const Belief& belief,
                 double tau, int steps, int max_steps) {
    if (last_action && last_observation && last_action->zoom == 1 &&
        *last_observation == Observation::O1) {
        return true;
    }
    if (mode(belief).second >= tau) return true;
    return steps >= max_steps;
}

namespace {

class GreedyPolicy final : public Policy {
public:
    explicit GreedyPolicy(const PomdpModel& model) : model_(&model) {}
    SnapshotAction next_action(const Belief& belief) override {
        return greedy_myopic(*model_, belief);
    }

private:
    const PomdpModel* model_;
};

class RandomPolicy final : public Policy {
public:
    RandomPolicy(const PomdpModel& model, std::uint64_t seed)
        : model_(&model), seed_(seed), rng_(seed) {}
    SnapshotAction next_action(const Belief&) override {
        const auto a = rng_.uniform_int(static_cast<std::uint64_t>(model_->action_count()));
        return model_->action(static_cast<int>(a));
    }
    void reset() override { rng_ = Rng(seed_); }

private:
    const PomdpModel* model_;
    std::uint64_t seed_;
    Rng rng_;
};

class SweepPolicy final : public Policy {
public:
    explicit SweepPolicy(const PomdpModel& model) : model_(&model) {}
    SnapshotAction next_action(const Belief&) override {
        const SnapshotAction a{model_->centers()[pos_], 1};
        pos_ = (pos_ + 1) % model_->centers().size();
        return a;
    }
    void reset() override { pos_ = 0; }

private:
    const PomdpModel* model_;
    std::size_t pos_ = 0;
};

class AlphaPolicy final : public Policy {
public:
    AlphaPolicy(const PomdpModel& model, std::shared_ptr<const AlphaVectorSet> alphas)
        : model_(&model), alphas_(std::move(alphas)), camera_(model.default_camera()) {}
    SnapshotAction next_action(const Belief& belief) override {
        const std::vector<double> sb = model_->initial_state_belief(belief, camera_);
        const SnapshotAction a = lookahead_action(*model_, *alphas_, sb);
        camera_ = a.view();
        return a;
    }
    void reset() override { camera_ = model_->default_camera(); }

private:
    const PomdpModel* model_;
    std::shared_ptr<const AlphaVectorSet> alphas_;
    CameraView camera_;
};

}  // namespace

AlphaVectorSet solve_pbvi_policy(const PomdpModel& model, const PolicyParams& params,
                                 const Belief& prior) {
    const auto beliefs =
        expand_belief_set(model, model.initial_state_belief(prior), params.pbvi_max_beliefs);
    return pbvi_solve(model, beliefs, params.pbvi_iterations, params.pbvi_mode);
}

AlphaVectorSet solve_pbvi_policy(const PomdpModel& model, const PolicyParams& params) {
    const double absent_share =
        model.allow_absent() ? 1.0 / static_cast<double>(model.hypotheses().size()) : 0.0;
    return solve_pbvi_policy(model, params,
                             Belief::uniform_prior(model.hypotheses(), absent_share));
}

std::unique_ptr<Policy> make_policy(PolicyKind kind, const PomdpModel& model,
                                    const PolicyParams& params,
                                    std::shared_ptr<const AlphaVectorSet> solved) {
    switch (kind) {
        case PolicyKind::Greedy: return std::make_unique<GreedyPolicy>(model);
        case PolicyKind::Random: return std::make_unique<RandomPolicy>(model, params.seed);
        case PolicyKind::Sweep: return std::make_unique<SweepPolicy>(model);
        case PolicyKind::Pbvi:
            if (!solved) {
                solved = std::make_shared<const AlphaVectorSet>(solve_pbvi_policy(model, params));
            }
            return std::make_unique<AlphaPolicy>(model, std::move(solved));
    }
    throw std::invalid_argument("unknown policy kind");
}

}  // namespace scout
