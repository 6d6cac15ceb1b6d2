#include "scout/belief.hpp"

#include <cmath>
#include <set>

#include "scout/errors.hpp"

namespace scout {

std::string to_string(const Hypothesis& h) {
    return h.is_absent() ? "Babsent" : "B" + std::to_string(h.block);
}

namespace {

void check_hypotheses(const std::vector<Hypothesis>& hyps) {
    if (hyps.empty()) throw NoHypothesisError("belief needs at least one hypothesis");
    std::set<BlockId> seen;
    for (const Hypothesis& h : hyps) {
        if (!seen.insert(h.block).second) {
            throw std::invalid_argument("duplicate hypothesis " + to_string(h));
        }
    }
}

}  // namespace

Belief Belief::uniform_prior(std::span<const Hypothesis> hypotheses, double absent_mass) {
    std::vector<Hypothesis> hyps(hypotheses.begin(), hypotheses.end());
    check_hypotheses(hyps);
    if (!(absent_mass >= 0.0 && absent_mass < 1.0)) {
        throw std::invalid_argument("absent_mass must lie in [0, 1)");
    }
    std::size_t placed = 0;
    bool has_absent = false;
    for (const Hypothesis& h : hyps) {
        if (h.is_absent()) {
            has_absent = true;
        } else {
            ++placed;
        }
    }
    if (absent_mass > 0.0 && !has_absent) {
        throw std::invalid_argument("absent_mass > 0 but Absent is not a hypothesis");
    }
    if (placed == 0) {
        throw std::invalid_argument("no placed hypotheses to carry the remaining mass");
    }
    const double share = (1.0 - absent_mass) / static_cast<double>(placed);
    std::vector<double> p(hyps.size());
    for (std::size_t i = 0; i < hyps.size(); ++i) {
        p[i] = hyps[i].is_absent() ? absent_mass : share;
    }
    return Belief(std::move(hyps), std::move(p));
}

Belief Belief::uniform_prior(const GridWorld& world, bool include_absent, double absent_mass) {
    std::vector<Hypothesis> hyps;
    hyps.reserve(world.block_count() + (include_absent ? 1 : 0));
    for (BlockId b = 1; b <= world.block_count(); ++b) hyps.push_back(Hypothesis::at(b));
    if (include_absent) hyps.push_back(Hypothesis::absent());
    return uniform_prior(hyps, absent_mass);
}

Belief Belief::from_probabilities(std::vector<Hypothesis> hypotheses,
                                  std::vector<double> probabilities) {
    check_hypotheses(hypotheses);
    if (hypotheses.size() != probabilities.size()) {
        throw std::invalid_argument("hypothesis and probability counts differ");
    }
    double sum = 0.0;
    for (double v : probabilities) {
        if (!(v >= 0.0)) throw std::invalid_argument("negative probability entry");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("probabilities sum to " + std::to_string(sum) + ", not 1");
    }
    return Belief(std::move(hypotheses), std::move(probabilities));
}

Belief bayes_update(const Belief& b, const CameraView& view, Observation o,
                    const ObservationModel& model, const GridWorld& world) {
    std::vector<double> weighted(b.size());
    double z = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const Hypothesis& h = b.hypothesis(i);
        const std::span<const BlockId> occupied =
            h.is_absent() ? std::span<const BlockId>{} : std::span<const BlockId>{&h.block, 1};
        weighted[i] = likelihood(model, o, world, occupied, view) * b.probability(i);
        z += weighted[i];
    }
    if (!(z > 0.0)) {
        throw ImpossibleObservationError(
            "observation " + to_string(o) + " at center " + std::to_string(view.center) +
            " zoom " + std::to_string(view.zoom) + " has zero probability under the belief");
    }
    for (double& v : weighted) v /= z;
    return Belief::from_probabilities(b.hypotheses(), std::move(weighted));
}

namespace {

// Mode preference order: blocks by ascending index, Absent last.
bool mode_prefers(const Hypothesis& a, const Hypothesis& b) {
    if (a.is_absent() != b.is_absent()) return b.is_absent();
    return a.block < b.block;
}

}  // namespace

std::pair<Hypothesis, double> mode(const Belief& b) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < b.size(); ++i) {
        const double p = b.probability(i);
        if (p > b.probability(best) ||
            (p == b.probability(best) && mode_prefers(b.hypothesis(i), b.hypothesis(best)))) {
            best = i;
        }
    }
    return {b.hypothesis(best), b.probability(best)};
}

double entropy(const Belief& b) {
    double h = 0.0;
    for (double p : b.probabilities()) {
        if (p > 0.0) h -= p * std::log(p);
    }
    return h;
}

}  // namespace scout
