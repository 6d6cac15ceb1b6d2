#include "scout/config.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <optional>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "scout/errors.hpp"

namespace scout {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

std::string sub(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

void check_keys(const Json& obj, const std::string& path,
                std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            fail(sub(path, key), "unknown key");
        }
    }
}

const Json* get(const Json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

const Json& require(const Json& obj, const std::string& path, const char* key) {
    const Json* v = get(obj, key);
    if (!v) fail(sub(path, key), "missing required field");
    return *v;
}

int as_int(const Json& v, const std::string& path) {
    if (!v.is_number_integer()) {
        fail(path, std::string("expected an integer, got ") + v.type_name());
    }
    const auto wide = v.get<std::int64_t>();
    if (wide < std::numeric_limits<int>::min() || wide > std::numeric_limits<int>::max()) {
        fail(path, "integer out of range");
    }
    return static_cast<int>(wide);
}

int as_int_min(const Json& v, const std::string& path, int lo) {
    const int n = as_int(v, path);
    if (n < lo) fail(path, "must be at least " + std::to_string(lo));
    return n;
}

double as_double(const Json& v, const std::string& path) {
    if (!v.is_number()) fail(path, std::string("expected a number, got ") + v.type_name());
    return v.get<double>();
}

bool as_bool(const Json& v, const std::string& path) {
    if (!v.is_boolean()) fail(path, std::string("expected a boolean, got ") + v.type_name());
    return v.get<bool>();
}

std::string as_string(const Json& v, const std::string& path) {
    if (!v.is_string()) fail(path, std::string("expected a string, got ") + v.type_name());
    return v.get<std::string>();
}

const Json& as_object(const Json& v, const std::string& path) {
    if (!v.is_object()) fail(path, std::string("expected an object, got ") + v.type_name());
    return v;
}

PolicyKind parse_policy_name(const Json& v, const std::string& path) {
    const std::string name = as_string(v, path);
    if (name == "greedy") return PolicyKind::Greedy;
    if (name == "random") return PolicyKind::Random;
    if (name == "sweep") return PolicyKind::Sweep;
    if (name == "pbvi") return PolicyKind::Pbvi;
    fail(path, "unknown policy \"" + name + "\"; valid options are greedy, pbvi, random, sweep");
}

ObjectSpec parse_object(const Json& v, const std::string& path) {
    if (v.is_string()) {
        const std::string name = v.get<std::string>();
        if (name == "single") return ObjectSpec::single_cell();
        if (name == "domino") return ObjectSpec::domino();
        if (name == "triple") return ObjectSpec::triple_bar();
        fail(path, "unknown object preset \"" + name +
                       "\"; valid options are single, domino, triple, or a custom object");
    }
    const Json& obj = as_object(v, path);
    check_keys(obj, path, {"orientations", "aspect_ratio"});
    const Json& rows = require(obj, path, "orientations");
    if (!rows.is_array() || rows.empty()) {
        fail(sub(path, "orientations"), "expected a nonempty array of footprints");
    }
    ObjectSpec spec;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string opath = sub(path, "orientations[" + std::to_string(i) + "]");
        if (!rows[i].is_array()) fail(opath, "expected an array of [dr, dc] cells");
        std::vector<CellOffset> cells;
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            const Json& cell = rows[i][j];
            if (!cell.is_array() || cell.size() != 2) {
                fail(opath + "[" + std::to_string(j) + "]", "expected a [dr, dc] pair");
            }
            cells.push_back({as_int(cell[0], opath), as_int(cell[1], opath)});
        }
        spec.orientations.push_back(std::move(cells));
    }
    spec.aspect_ratio = as_double(require(obj, path, "aspect_ratio"), sub(path, "aspect_ratio"));
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
    return spec;
}

ObservationModel parse_observation(const Json* v, std::optional<int> explicit_zoom,
                                   const std::string& base_dir, int& zoom_out) {
    const int default_zoom = explicit_zoom.value_or(3);
    if (!v) {
        zoom_out = default_zoom;
        return ObservationModel::perfect(default_zoom);
    }
    const Json& obj = as_object(*v, "observation");
    check_keys(obj, "observation", {"preset", "path"});
    const Json* preset = get(obj, "preset");
    const Json* path = get(obj, "path");
    if ((preset != nullptr) == (path != nullptr)) {
        fail("observation", "expected exactly one of \"preset\" or \"path\"");
    }
    if (preset) {
        const std::string name = as_string(*preset, "observation.preset");
        if (name == "perfect") {
            zoom_out = default_zoom;
            return ObservationModel::perfect(default_zoom);
        }
        if (name == "noisy-default") {
            ObservationModel model = ObservationModel::noisy_default();
            if (explicit_zoom && *explicit_zoom != model.zoom_levels()) {
                fail("zoom_levels", "the noisy-default sensor fixes " +
                                        std::to_string(model.zoom_levels()) + " zoom levels");
            }
            zoom_out = model.zoom_levels();
            return model;
        }
        fail("observation.preset",
             "unknown preset \"" + name + "\"; valid options are perfect, noisy-default");
    }
    std::filesystem::path file = as_string(*path, "observation.path");
    if (file.is_relative()) file = std::filesystem::path(base_dir) / file;
    std::ifstream in(file);
    if (!in) fail("observation.path", "cannot open file: " + file.string());
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        fail("observation.path", file.string() + " is not valid JSON: " + e.what());
    }
    try {
        ObservationModel model = model_from_json(doc);
        const auto violations = validate_model(model);
        if (!violations.empty()) fail("observation.path", violations.front().message);
        if (explicit_zoom && *explicit_zoom != model.zoom_levels()) {
            fail("zoom_levels", "the model at " + file.string() + " fixes " +
                                    std::to_string(model.zoom_levels()) + " zoom levels");
        }
        zoom_out = model.zoom_levels();
        return model;
    } catch (const ConfigError&) {
        throw;
    } catch (const FormatError& e) {
        fail("observation.path", e.what());
    }
}

ObjectPose parse_true_pose(const Json& v, const EpisodeConfig& ep) {
    if (v.is_string()) {
        if (v.get<std::string>() != "absent") {
            fail("true_pose", "expected \"absent\" or an {anchor, orientation} object");
        }
        if (!ep.allow_absent) fail("true_pose", "an absent truth requires allow_absent = true");
        return ObjectPose::absent();
    }
    const Json& obj = as_object(v, "true_pose");
    check_keys(obj, "true_pose", {"anchor", "orientation"});
    const int anchor = as_int(require(obj, "true_pose", "anchor"), "true_pose.anchor");
    const Json* orient = get(obj, "orientation");
    const int orientation = orient ? as_int(*orient, "true_pose.orientation") : 0;
    if (!ep.world.contains(anchor)) {
        fail("true_pose.anchor", "block " + std::to_string(anchor) + " is outside the " +
                                     std::to_string(ep.world.rows()) + "x" +
                                     std::to_string(ep.world.cols()) + " world");
    }
    if (orientation < 0 ||
        orientation >= static_cast<int>(ep.object.orientations.size())) {
        fail("true_pose.orientation",
             "the object has " + std::to_string(ep.object.orientations.size()) +
                 " orientations");
    }
    if (!pose_fits(ep.world, ep.object, anchor, orientation)) {
        fail("true_pose", "the footprint does not fit inside the world at this anchor");
    }
    return ObjectPose::placed(anchor, orientation);
}

}  // namespace

std::string to_string(OutputFormat format) {
    return format == OutputFormat::Csv ? "csv" : "json";
}

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError(std::string("config: expected a JSON object, got ") + doc.type_name());
    }
    check_keys(doc, "",
               {"world", "object", "observation", "zoom_levels", "variant", "gamma", "tau",
                "seed", "max_steps", "allow_absent", "absent_prior_mass", "policy", "true_pose",
                "episodes", "workers", "bench_policies", "out", "format"});

    RunConfig run;
    EpisodeConfig& ep = run.episode;

    const Json& world = as_object(require(doc, "", "world"), "world");
    check_keys(world, "world", {"rows", "cols"});
    const int rows = as_int_min(require(world, "world", "rows"), "world.rows", 1);
    const int cols = as_int_min(require(world, "world", "cols"), "world.cols", 1);
    ep.world = GridWorld(rows, cols);

    if (const Json* object = get(doc, "object")) ep.object = parse_object(*object, "object");

    std::optional<int> explicit_zoom;
    if (const Json* zoom = get(doc, "zoom_levels")) {
        explicit_zoom = as_int_min(*zoom, "zoom_levels", 1);
    }
    ep.observation =
        parse_observation(get(doc, "observation"), explicit_zoom, base_dir, ep.zoom_levels);

    if (const Json* variant = get(doc, "variant")) {
        const std::string name = as_string(*variant, "variant");
        if (name == "A") {
            ep.variant = ModelVariant::A;
        } else if (name == "B") {
            ep.variant = ModelVariant::B;
        } else {
            fail("variant", "unknown variant \"" + name + "\"; valid options are A, B");
        }
    }

    if (const Json* gamma = get(doc, "gamma")) {
        ep.gamma = as_double(*gamma, "gamma");
        if (!(ep.gamma > 0.0 && ep.gamma < 1.0)) {
            fail("gamma", "must lie in (0, 1), got " + std::to_string(ep.gamma));
        }
    }
    if (const Json* tau = get(doc, "tau")) {
        ep.tau = as_double(*tau, "tau");
        if (!(ep.tau > 0.0 && ep.tau <= 1.0)) {
            fail("tau", "must lie in (0, 1], got " + std::to_string(ep.tau));
        }
    }
    if (const Json* seed = get(doc, "seed")) {
        if (!seed->is_number_unsigned()) fail("seed", "expected a nonnegative integer");
        ep.seed = seed->get<std::uint64_t>();
    }
    if (const Json* max_steps = get(doc, "max_steps")) {
        ep.max_steps = as_int_min(*max_steps, "max_steps", 0);
    }
    if (const Json* allow = get(doc, "allow_absent")) {
        ep.allow_absent = as_bool(*allow, "allow_absent");
    }
    if (const Json* mass = get(doc, "absent_prior_mass")) {
        ep.absent_prior_mass = as_double(*mass, "absent_prior_mass");
        if (!(ep.absent_prior_mass >= 0.0 && ep.absent_prior_mass < 1.0)) {
            fail("absent_prior_mass", "must lie in [0, 1)");
        }
        if (ep.absent_prior_mass > 0.0 && !ep.allow_absent) {
            fail("absent_prior_mass", "requires allow_absent = true");
        }
    }

    const Json& policy = require(doc, "", "policy");
    if (policy.is_string()) {
        ep.policy = parse_policy_name(policy, "policy");
    } else {
        const Json& obj = as_object(policy, "policy");
        check_keys(obj, "policy", {"name", "iterations", "max_beliefs", "objective"});
        ep.policy = parse_policy_name(require(obj, "policy", "name"), "policy.name");
        for (const char* key : {"iterations", "max_beliefs", "objective"}) {
            if (get(obj, key) && ep.policy != PolicyKind::Pbvi) {
                fail(sub("policy", key), "only valid for the pbvi policy");
            }
        }
        if (const Json* iters = get(obj, "iterations")) {
            ep.policy_params.pbvi_iterations = as_int_min(*iters, "policy.iterations", 0);
        }
        if (const Json* beliefs = get(obj, "max_beliefs")) {
            ep.policy_params.pbvi_max_beliefs = as_int_min(*beliefs, "policy.max_beliefs", 1);
        }
        if (const Json* objective = get(obj, "objective")) {
            const std::string name = as_string(*objective, "policy.objective");
            if (name == "per_step") {
                ep.policy_params.pbvi_mode = ObjectiveMode::PerStepReward;
            } else if (name == "terminal") {
                ep.policy_params.pbvi_mode = ObjectiveMode::TerminalReward;
            } else {
                fail("policy.objective",
                     "unknown objective \"" + name + "\"; valid options are per_step, terminal");
            }
        }
    }

    if (const Json* pose = get(doc, "true_pose")) ep.true_pose = parse_true_pose(*pose, ep);

    if (const Json* episodes = get(doc, "episodes")) {
        run.episodes = as_int_min(*episodes, "episodes", 1);
    }
    if (const Json* workers = get(doc, "workers")) {
        run.workers = as_int_min(*workers, "workers", 1);
    }
    if (const Json* bench = get(doc, "bench_policies")) {
        if (!bench->is_array() || bench->empty()) {
            fail("bench_policies", "expected a nonempty array of policy names");
        }
        run.bench_policies.clear();
        for (std::size_t i = 0; i < bench->size(); ++i) {
            const PolicyKind kind = parse_policy_name(
                (*bench)[i], "bench_policies[" + std::to_string(i) + "]");
            if (std::find(run.bench_policies.begin(), run.bench_policies.end(), kind) !=
                run.bench_policies.end()) {
                fail("bench_policies", "duplicate policy \"" + to_string(kind) + "\"");
            }
            run.bench_policies.push_back(kind);
        }
    }
    if (const Json* out = get(doc, "out")) run.out = as_string(*out, "out");
    if (const Json* format = get(doc, "format")) {
        const std::string name = as_string(*format, "format");
        if (name == "csv") {
            run.format = OutputFormat::Csv;
        } else if (name == "json") {
            run.format = OutputFormat::Json;
        } else {
            fail("format", "unknown format \"" + name + "\"; valid options are csv, json");
        }
    }
    return run;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string dir = std::filesystem::path(path).parent_path().string();
    return parse_config(buffer.str(), dir.empty() ? std::string(".") : dir);
}

}  // namespace scout
