#include "scout/observation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace scout {

std::string to_string(Observation o) {
    return o == Observation::O1 ? "O1" : "O2";
}

ObservationModel::ObservationModel(std::vector<std::array<double, kBandCount>> p1_rows,
                                   double p1_absent)
    : p1_(std::move(p1_rows)), p1_absent_(p1_absent) {
    if (p1_.empty()) {
        throw std::invalid_argument("ObservationModel: need at least one zoom row");
    }
}

namespace {

// Largest band index certainly inside the zoom window. Exact for zooms 1-3:
// Chebyshev radius 0 holds band d0, radius 1 holds d0-d1, radius 2 holds
// d0-d3. Radius >= 3 windows straddle the d4/d5 boundary; d4 is used.
int in_view_band_bound(int zoom) {
    switch (zoom) {
        case 1: return 0;
        case 2: return 1;
        case 3: return 3;
        default: return 4;
    }
}

}  // namespace

ObservationModel ObservationModel::perfect(int zoom_levels) {
    if (zoom_levels < 1) {
        throw std::invalid_argument("ObservationModel::perfect: zoom_levels must be >= 1");
    }
    std::vector<std::array<double, kBandCount>> rows(zoom_levels);
    for (int k = 1; k <= zoom_levels; ++k) {
        const int bound = in_view_band_bound(k);
        for (int b = 0; b < kBandCount; ++b) {
            rows[k - 1][b] = b <= bound ? 1.0 : 0.0;
        }
    }
    return ObservationModel(std::move(rows), 0.0);
}

ObservationModel ObservationModel::noisy_default() {
    return ObservationModel(
        {
            {0.95, 0.10, 0.05, 0.03, 0.02, 0.01},
            {0.90, 0.85, 0.08, 0.05, 0.03, 0.01},
            {0.80, 0.78, 0.72, 0.65, 0.05, 0.01},
        },
        0.01);
}

double ObservationModel::p1(int zoom, DistanceBand band) const {
    if (zoom < 1 || zoom > zoom_levels()) {
        throw InvalidViewError("zoom " + std::to_string(zoom) + " outside model range 1.." +
                               std::to_string(zoom_levels()));
    }
    return p1_[zoom - 1][static_cast<int>(band)];
}

std::vector<ModelViolation> validate_model(const ObservationModel& model) {
    std::vector<ModelViolation> out;
    const auto& table = model.table();
    auto fmt = [](double v) {
        std::ostringstream os;
        os << v;
        return os.str();
    };
    double min_entry = 1.0;
    for (int k = 1; k <= model.zoom_levels(); ++k) {
        for (int b = 0; b < kBandCount; ++b) {
            const double v = table[k - 1][b];
            const auto band = static_cast<DistanceBand>(b);
            if (!(v >= 0.0 && v <= 1.0)) {
                out.push_back({ModelViolation::Kind::Range, k, band,
                               "p1(Z" + std::to_string(k) + ", " + to_string(band) + ") = " +
                                   fmt(v) + " outside [0, 1]"});
            }
            if (b > 0 && v > table[k - 1][b - 1]) {
                out.push_back({ModelViolation::Kind::Monotonicity, k, band,
                               "p1(Z" + std::to_string(k) + ", " + to_string(band) + ") = " +
                                   fmt(v) + " exceeds the " +
                                   to_string(static_cast<DistanceBand>(b - 1)) + " entry " +
                                   fmt(table[k - 1][b - 1])});
            }
            min_entry = std::min(min_entry, v);
        }
    }
    const double pa = model.p1_absent();
    if (!(pa >= 0.0 && pa <= 1.0)) {
        out.push_back({ModelViolation::Kind::Range, 0, DistanceBand::d0,
                       "p1_absent = " + fmt(pa) + " outside [0, 1]"});
    } else if (pa > min_entry) {
        out.push_back({ModelViolation::Kind::AbsentFloor, 0, DistanceBand::d0,
                       "p1_absent = " + fmt(pa) + " exceeds the smallest table entry " +
                           fmt(min_entry)});
    }
    return out;
}

double likelihood(const ObservationModel& model, Observation o, const GridWorld& world,
                  std::span<const BlockId> occupied, const CameraView& view) {
    if (!world.contains(view.center)) {
        throw InvalidViewError("view center " + std::to_string(view.center) +
                               " outside the grid");
    }
    if (view.zoom < 1 || view.zoom > model.zoom_levels()) {
        throw InvalidViewError("zoom " + std::to_string(view.zoom) + " outside model range 1.." +
                               std::to_string(model.zoom_levels()));
    }
    double p1;
    if (occupied.empty()) {
        p1 = model.p1_absent();
    } else {
        DistanceBand nearest = distance_band(world, view.center, occupied.front());
        for (std::size_t i = 1; i < occupied.size(); ++i) {
            nearest = std::min(nearest, distance_band(world, view.center, occupied[i]));
        }
        p1 = model.p1(view.zoom, nearest);
    }
    return o == Observation::O1 ? p1 : 1.0 - p1;
}

double likelihood(const ObservationModel& model, Observation o, const GridWorld& world,
                  const ObjectSpec& spec, const ObjectPose& pose, const CameraView& view) {
    const auto occupied = occupied_blocks(world, spec, pose);
    return likelihood(model, o, world, occupied, view);
}

Observation sample_observation(const ObservationModel& model, const GridWorld& world,
                               std::span<const BlockId> occupied, const CameraView& view,
                               Rng& rng) {
    const double p1 = likelihood(model, Observation::O1, world, occupied, view);
    return rng.uniform01() < p1 ? Observation::O1 : Observation::O2;
}

Observation sample_observation(const ObservationModel& model, const GridWorld& world,
                               const ObjectSpec& spec, const ObjectPose& pose,
                               const CameraView& view, Rng& rng) {
    const auto occupied = occupied_blocks(world, spec, pose);
    return sample_observation(model, world, occupied, view, rng);
}

namespace {

const std::array<double, 5> kBandThresholds = {0.0, std::sqrt(2.0), 2.0, 2.0 * std::sqrt(2.0),
                                               std::sqrt(10.0)};
constexpr const char* kModelFormat = "scout-observation-model/1";

}  // namespace

nlohmann::ordered_json model_to_json(const ObservationModel& model) {
    nlohmann::ordered_json doc;
    doc["format"] = kModelFormat;
    doc["zoom_levels"] = model.zoom_levels();
    doc["band_thresholds"] = kBandThresholds;
    doc["p1"] = model.table();
    doc["p1_absent"] = model.p1_absent();
    return doc;
}

ObservationModel model_from_json(const nlohmann::ordered_json& doc) {
    if (!doc.is_object()) throw FormatError("observation model: expected a JSON object");
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (key != "format" && key != "zoom_levels" && key != "band_thresholds" && key != "p1" &&
            key != "p1_absent") {
            throw FormatError("observation model: unknown key \"" + key + "\"");
        }
    }
    for (const char* key : {"format", "zoom_levels", "band_thresholds", "p1", "p1_absent"}) {
        if (!doc.contains(key)) {
            throw FormatError("observation model: missing key \"" + std::string(key) + "\"");
        }
    }
    if (!doc["format"].is_string() || doc["format"].get<std::string>() != kModelFormat) {
        throw FormatError("observation model: format must be \"" + std::string(kModelFormat) +
                          "\"");
    }
    if (!doc["zoom_levels"].is_number_integer() || doc["zoom_levels"].get<int>() < 1) {
        throw FormatError("observation model: zoom_levels must be a positive integer");
    }
    const int zoom_levels = doc["zoom_levels"].get<int>();

    const auto& thresholds = doc["band_thresholds"];
    if (!thresholds.is_array() || thresholds.size() != kBandThresholds.size()) {
        throw FormatError("observation model: band_thresholds must list " +
                          std::to_string(kBandThresholds.size()) + " values");
    }
    for (std::size_t i = 0; i < kBandThresholds.size(); ++i) {
        if (!thresholds[i].is_number() ||
            std::abs(thresholds[i].get<double>() - kBandThresholds[i]) > 1e-9) {
            throw FormatError("observation model: band_thresholds[" + std::to_string(i) +
                              "] must equal " + std::to_string(kBandThresholds[i]));
        }
    }

    const auto& p1 = doc["p1"];
    if (!p1.is_array() || static_cast<int>(p1.size()) != zoom_levels) {
        throw FormatError("observation model: p1 must list one row per zoom level");
    }
    std::vector<std::array<double, kBandCount>> rows(zoom_levels);
    for (int k = 0; k < zoom_levels; ++k) {
        const auto& row = p1[k];
        if (!row.is_array() || row.size() != kBandCount) {
            throw FormatError("observation model: p1[" + std::to_string(k) + "] must list " +
                              std::to_string(kBandCount) + " band entries");
        }
        for (int b = 0; b < kBandCount; ++b) {
            if (!row[b].is_number()) {
                throw FormatError("observation model: p1[" + std::to_string(k) + "][" +
                                  std::to_string(b) + "] must be a number");
            }
            rows[k][b] = row[b].get<double>();
        }
    }
    if (!doc["p1_absent"].is_number()) {
        throw FormatError("observation model: p1_absent must be a number");
    }

    ObservationModel model(std::move(rows), doc["p1_absent"].get<double>());
    for (const ModelViolation& v : validate_model(model)) {
        if (v.kind == ModelViolation::Kind::Range) {
            throw FormatError("observation model: " + v.message);
        }
    }
    return model;
}

}  // namespace scout
