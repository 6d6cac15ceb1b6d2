#include "scout/pomdp.hpp"

#include <algorithm>
#include <cmath>

#include "scout/errors.hpp"

namespace scout {

std::string to_string(ModelVariant v) {
    return v == ModelVariant::A ? "A" : "B";
}

std::string to_string(const SnapshotAction& a) {
    return "snapshot_C" + std::to_string(a.center) + "_Z" + std::to_string(a.zoom);
}

bool tie_prefers(const SnapshotAction& a, const SnapshotAction& b) {
    if (a.zoom != b.zoom) return a.zoom > b.zoom;
    return a.center < b.center;
}

PomdpModel::PomdpModel(ModelVariant variant, const GridWorld& world,
                       std::vector<BlockId> centers, int zoom_levels,
                       ObservationModel observation, double gamma, bool allow_absent)
    : variant_(variant),
      world_(world),
      centers_(std::move(centers)),
      zoom_levels_(zoom_levels),
      observation_(std::move(observation)),
      gamma_(gamma) {
    if (centers_.empty()) throw std::invalid_argument("PomdpModel: centers must be nonempty");
    std::sort(centers_.begin(), centers_.end());
    if (std::adjacent_find(centers_.begin(), centers_.end()) != centers_.end()) {
        throw std::invalid_argument("PomdpModel: duplicate centers");
    }
    for (BlockId c : centers_) {
        if (!world_.contains(c)) {
            throw std::invalid_argument("PomdpModel: center " + std::to_string(c) +
                                        " outside the grid");
        }
    }
    if (zoom_levels_ < 1) throw std::invalid_argument("PomdpModel: zoom_levels must be >= 1");
    if (observation_.zoom_levels() < zoom_levels_) {
        throw std::invalid_argument("PomdpModel: observation model covers " +
                                    std::to_string(observation_.zoom_levels()) +
                                    " zoom levels, model needs " + std::to_string(zoom_levels_));
    }
    if (!(gamma_ > 0.0 && gamma_ < 1.0)) {
        throw std::invalid_argument("PomdpModel: gamma must lie in (0, 1)");
    }

    hypotheses_.reserve(world_.block_count() + (allow_absent ? 1 : 0));
    for (BlockId b = 1; b <= world_.block_count(); ++b) {
        hypotheses_.push_back(Hypothesis::at(b));
    }
    if (allow_absent) hypotheses_.push_back(Hypothesis::absent());

    p1_.resize(static_cast<std::size_t>(camera_count()) * hypotheses_.size());
    for (int cam = 0; cam < camera_count(); ++cam) {
        const CameraView view = camera_view(cam);
        for (std::size_t h = 0; h < hypotheses_.size(); ++h) {
            const Hypothesis& hyp = hypotheses_[h];
            const std::span<const BlockId> occupied =
                hyp.is_absent() ? std::span<const BlockId>{}
                                : std::span<const BlockId>{&hyp.block, 1};
            p1_[cam * hypotheses_.size() + h] =
                likelihood(observation_, Observation::O1, world_, occupied, view);
        }
    }
}

PomdpModel PomdpModel::build_variant_a(const GridWorld& world, std::vector<BlockId> centers,
                                       int zoom_levels, ObservationModel observation,
                                       double gamma, bool allow_absent) {
    return PomdpModel(ModelVariant::A, world, std::move(centers), zoom_levels,
                      std::move(observation), gamma, allow_absent);
}

PomdpModel PomdpModel::build_variant_b(const GridWorld& world, std::vector<BlockId> centers,
                                       int zoom_levels, ObservationModel observation,
                                       double gamma, bool allow_absent) {
    return PomdpModel(ModelVariant::B, world, std::move(centers), zoom_levels,
                      std::move(observation), gamma, allow_absent);
}

int PomdpModel::state_count() const {
    const int h = static_cast<int>(hypotheses_.size());
    return variant_ == ModelVariant::A ? h : h * camera_count();
}

CameraView PomdpModel::camera_view(int cam) const {
    return {centers_[cam / zoom_levels_], cam % zoom_levels_ + 1};
}

SnapshotAction PomdpModel::action(int a) const {
    if (a < 0 || a >= action_count()) {
        throw std::invalid_argument("action index " + std::to_string(a) + " out of range");
    }
    const CameraView view = camera_view(a);
    return {view.center, view.zoom};
}

int PomdpModel::action_index(const SnapshotAction& a) const {
    const auto it = std::lower_bound(centers_.begin(), centers_.end(), a.center);
    if (it == centers_.end() || *it != a.center || a.zoom < 1 || a.zoom > zoom_levels_) {
        throw std::invalid_argument(to_string(a) + " is not an action of this model");
    }
    return static_cast<int>(it - centers_.begin()) * zoom_levels_ + a.zoom - 1;
}

std::string PomdpModel::state_name(int s) const {
    const std::string hyp = to_string(hypothesis_of_state(s));
    if (variant_ == ModelVariant::A) return hyp;
    const CameraView view = camera_view(camera_of_state(s));
    return hyp + "_C" + std::to_string(view.center) + "_Z" + std::to_string(view.zoom);
}

int PomdpModel::next_state(int s, int a) const {
    if (variant_ == ModelVariant::A) return s;
    return s / camera_count() * camera_count() + a;
}

double PomdpModel::obs_p1(int next, int a) const {
    const int h = variant_ == ModelVariant::A ? next : next / camera_count();
    const int cam = variant_ == ModelVariant::A ? a : next % camera_count();
    return p1_[static_cast<std::size_t>(cam) * hypotheses_.size() + h];
}

const Hypothesis& PomdpModel::hypothesis_of_state(int s) const {
    return hypotheses_[variant_ == ModelVariant::A ? s : s / camera_count()];
}

int PomdpModel::camera_of_state(int s) const {
    return variant_ == ModelVariant::A ? -1 : s % camera_count();
}

std::vector<double> PomdpModel::hypothesis_probabilities(const Belief& prior) const {
    std::vector<double> by_hyp(hypotheses_.size(), -1.0);
    if (prior.size() != hypotheses_.size()) {
        throw std::invalid_argument("prior covers " + std::to_string(prior.size()) +
                                    " hypotheses, model has " +
                                    std::to_string(hypotheses_.size()));
    }
    for (std::size_t i = 0; i < prior.size(); ++i) {
        const Hypothesis& h = prior.hypothesis(i);
        const std::size_t pos =
            h.is_absent() ? hypotheses_.size() - 1 : static_cast<std::size_t>(h.block - 1);
        if (pos >= hypotheses_.size() || !(hypotheses_[pos] == h)) {
            throw std::invalid_argument("prior hypothesis " + to_string(h) +
                                        " is not a state of this model");
        }
        by_hyp[pos] = prior.probability(i);
    }
    return by_hyp;
}

std::vector<double> PomdpModel::initial_state_belief(const Belief& prior,
                                                     const CameraView& camera) const {
    std::vector<double> by_hyp = hypothesis_probabilities(prior);
    if (variant_ == ModelVariant::A) return by_hyp;

    int cam = -1;
    try {
        cam = action_index({camera.center, camera.zoom});
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("camera center " + std::to_string(camera.center) + " zoom " +
                                    std::to_string(camera.zoom) +
                                    " is not a camera pose of this model");
    }
    std::vector<double> out(state_count(), 0.0);
    for (std::size_t h = 0; h < hypotheses_.size(); ++h) {
        out[h * camera_count() + cam] = by_hyp[h];
    }
    return out;
}

std::vector<double> PomdpModel::initial_state_belief(const Belief& prior) const {
    return initial_state_belief(prior, default_camera());
}

std::vector<double> PomdpModel::hypothesis_marginal(std::span<const double> state_belief) const {
    if (static_cast<int>(state_belief.size()) != state_count()) {
        throw std::invalid_argument("state belief size " + std::to_string(state_belief.size()) +
                                    " does not match " + std::to_string(state_count()) +
                                    " states");
    }
    std::vector<double> out(hypotheses_.size(), 0.0);
    if (variant_ == ModelVariant::A) {
        std::copy(state_belief.begin(), state_belief.end(), out.begin());
        return out;
    }
    for (std::size_t h = 0; h < hypotheses_.size(); ++h) {
        for (int cam = 0; cam < camera_count(); ++cam) {
            out[h] += state_belief[h * camera_count() + cam];
        }
    }
    return out;
}

double belief_reward(const Belief& b) {
    return *std::max_element(b.probabilities().begin(), b.probabilities().end());
}

double mode_value(std::span<const double> state_belief) {
    return *std::max_element(state_belief.begin(), state_belief.end());
}

double surrogate_reward(const PomdpModel& model, int state, int action,
                        const RewardSurrogate& surrogate) {
    const Hypothesis& h = model.hypothesis_of_state(state);
    const SnapshotAction a = model.action(action);
    const bool hit = !h.is_absent() && a.zoom == 1 && a.center == h.block;
    return (hit ? surrogate.hit : 0.0) - surrogate.step_cost;
}

}  // namespace scout
