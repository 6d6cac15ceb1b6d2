#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scout/observation.hpp"
#include "scout/world.hpp"

namespace scout {

/// A location hypothesis: the object's block, or Absent.
struct Hypothesis {
    BlockId block = 0;  // 0 encodes Absent

    static Hypothesis absent() { return {0}; }
    static Hypothesis at(BlockId b) { return {b}; }
    bool is_absent() const { return block == 0; }

    bool operator==(const Hypothesis&) const = default;
};

/// "B7" for block hypotheses, "Babsent" for Absent.
std::string to_string(const Hypothesis& h);

/// Discrete distribution over an ordered hypothesis list. Immutable value:
/// entries are nonnegative and sum to 1 within 1e-9.
class Belief {
public:
    /// Absent (if listed) gets absent_mass; the placed hypotheses split the
    /// rest equally. Requires 0 <= absent_mass < 1, absent_mass > 0 only when
    /// Absent is listed, and at least one placed hypothesis.
    static Belief uniform_prior(std::span<const Hypothesis> hypotheses, double absent_mass = 0.0);

    /// Uniform over B_1..B_N, with Absent appended last when included.
    static Belief uniform_prior(const GridWorld& world, bool include_absent,
                                double absent_mass = 0.0);

    /// Validates: matching sizes, no duplicate hypotheses, entries >= 0,
    /// |sum - 1| <= 1e-9. Probabilities are stored as given.
    static Belief from_probabilities(std::vector<Hypothesis> hypotheses,
                                     std::vector<double> probabilities);

    std::size_t size() const { return p_.size(); }
    const std::vector<Hypothesis>& hypotheses() const { return hyps_; }
    const std::vector<double>& probabilities() const { return p_; }
    const Hypothesis& hypothesis(std::size_t i) const { return hyps_[i]; }
    double probability(std::size_t i) const { return p_[i]; }

    bool operator==(const Belief&) const = default;

private:
    Belief(std::vector<Hypothesis> hyps, std::vector<double> p)
        : hyps_(std::move(hyps)), p_(std::move(p)) {}

    std::vector<Hypothesis> hyps_;
    std::vector<double> p_;
};

/// Exact Bayes step: b'(h) proportional to P(o | h, view) * b(h). The object
/// does not move, so only the weights change. Throws
/// ImpossibleObservationError when the observation has zero total probability.
Belief bayes_update(const Belief& b, const CameraView& view, Observation o,
                    const ObservationModel& model, const GridWorld& world);

/// Most probable hypothesis and its probability. Ties go to the lowest block
/// index; Absent wins only when strictly more probable than every block.
std::pair<Hypothesis, double> mode(const Belief& b);

/// Shannon entropy in nats, with 0*ln(0) = 0.
double entropy(const Belief& b);

}  // namespace scout
