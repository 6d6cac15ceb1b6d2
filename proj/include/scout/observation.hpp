#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "scout/errors.hpp"
#include "scout/rng.hpp"
#include "scout/world.hpp"

namespace scout {

/// Sensor outcome: O1 = the view contains part of the object, O2 = it does not.
enum class Observation : int { O1 = 0, O2 = 1 };

inline constexpr int kObservationCount = 2;

std::string to_string(Observation o);

/// Probability of O1 as a function of zoom level and the distance band between
/// the view center and the object, plus a false-positive floor for Absent.
/// P(O2) is the exact complement.
class ObservationModel {
public:
    /// One row of six band entries per zoom level. Structural errors throw
    /// std::invalid_argument; semantic checks live in validate_model.
    ObservationModel(std::vector<std::array<double, kBandCount>> p1_rows, double p1_absent);

    /// Band-indicator sensor: O1 certain iff the object lies in the view, no
    /// false positives. Exact for zooms 1-3, whose windows align with band
    /// boundaries; zoom >= 4 windows are approximated by bands d0..d4.
    static ObservationModel perfect(int zoom_levels);

    /// Three-zoom benchmark table with detection decaying in distance and
    /// wider but less certain views at higher zoom.
    static ObservationModel noisy_default();

    int zoom_levels() const { return static_cast<int>(p1_.size()); }
    double p1(int zoom, DistanceBand band) const;
    double p1_absent() const { return p1_absent_; }
    const std::vector<std::array<double, kBandCount>>& table() const { return p1_; }

    bool operator==(const ObservationModel&) const = default;

private:
    std::vector<std::array<double, kBandCount>> p1_;
    double p1_absent_;
};

/// A broken model invariant, located by table position.
struct ModelViolation {
    enum class Kind { Range, Monotonicity, AbsentFloor };

    Kind kind;
    int zoom = 0;  // 1-based; 0 when the violation concerns p1_absent
    DistanceBand band = DistanceBand::d0;
    std::string message;
};

/// Checks that all entries are probabilities, each zoom row is non-increasing
/// in band (farther is never more detectable), and p1_absent does not exceed
/// the smallest table entry. Returns every violation; empty means valid.
std::vector<ModelViolation> validate_model(const ObservationModel& model);

/// P(o | occupied blocks, view). Empty `occupied` means Absent; otherwise the
/// band of the occupied block nearest to the view center keys the table.
double likelihood(const ObservationModel& model, Observation o, const GridWorld& world,
                  std::span<const BlockId> occupied, const CameraView& view);

/// P(o | pose, view) for a full object pose.
double likelihood(const ObservationModel& model, Observation o, const GridWorld& world,
                  const ObjectSpec& spec, const ObjectPose& pose, const CameraView& view);

/// Draws O1 with probability likelihood(O1, ...). One uniform variate per call.
Observation sample_observation(const ObservationModel& model, const GridWorld& world,
                               std::span<const BlockId> occupied, const CameraView& view,
                               Rng& rng);
Observation sample_observation(const ObservationModel& model, const GridWorld& world,
                               const ObjectSpec& spec, const ObjectPose& pose,
                               const CameraView& view, Rng& rng);

/// JSON schema "scout-observation-model/1": zoom_levels, the canonical band
/// thresholds, the p1 table, and p1_absent. Key order is deterministic.
nlohmann::ordered_json model_to_json(const ObservationModel& model);

/// Inverse of model_to_json. Throws FormatError on structural problems,
/// nonstandard band thresholds, or out-of-range probabilities.
ObservationModel model_from_json(const nlohmann::ordered_json& doc);

}  // namespace scout
