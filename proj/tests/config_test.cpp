#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "scout/config.hpp"
#include "scout/errors.hpp"

using namespace scout;
namespace fs = std::filesystem;

namespace {

const std::string kMinimal = R"({"world": {"rows": 8, "cols": 8}, "policy": "greedy"})";

std::string with_fields(const std::string& extra) {
    return R"({"world": {"rows": 8, "cols": 8}, "policy": "greedy", )" + extra + "}";
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "scout_config_test";
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path p = scratch_dir() / name;
    std::ofstream out(p);
    out << text;
    return p;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("the minimal document gets the documented defaults") {
    const RunConfig run = parse_config(kMinimal);
    const EpisodeConfig& ep = run.episode;
    CHECK(ep.world.rows() == 8);
    CHECK(ep.world.cols() == 8);
    CHECK(ep.object.orientations.size() == 1);
    CHECK(ep.observation == ObservationModel::perfect(3));
    CHECK(ep.zoom_levels == 3);
    CHECK(ep.variant == ModelVariant::A);
    CHECK(ep.gamma == 0.95);
    CHECK(ep.tau == 0.99);
    CHECK(ep.seed == 0);
    CHECK(ep.max_steps == 200);
    CHECK_FALSE(ep.allow_absent);
    CHECK(ep.absent_prior_mass == 0.0);
    CHECK(ep.policy == PolicyKind::Greedy);
    CHECK_FALSE(ep.true_pose.has_value());
    CHECK(run.episodes == 1000);
    CHECK(run.workers == 1);
    CHECK(run.bench_policies ==
          std::vector<PolicyKind>{PolicyKind::Greedy, PolicyKind::Sweep, PolicyKind::Random});
    CHECK(run.out.empty());
    CHECK(run.format == OutputFormat::Csv);
}

TEST_CASE("a fully specified document parses field by field") {
    const std::string text = R"({
        "world": {"rows": 4, "cols": 6},
        "object": "domino",
        "observation": {"preset": "noisy-default"},
        "variant": "B",
        "gamma": 0.9,
        "tau": 0.95,
        "seed": 31,
        "max_steps": 50,
        "allow_absent": true,
        "absent_prior_mass": 0.2,
        "policy": {"name": "pbvi", "iterations": 5, "max_beliefs": 64, "objective": "terminal"},
        "true_pose": {"anchor": 3, "orientation": 1},
        "episodes": 250,
        "workers": 4,
        "bench_policies": ["pbvi", "random"],
        "out": "results.csv",
        "format": "json"
    })";
    const RunConfig run = parse_config(text);
    const EpisodeConfig& ep = run.episode;
    CHECK(ep.world.cols() == 6);
    CHECK(ep.object.orientations.size() == 2);
    CHECK(ep.observation == ObservationModel::noisy_default());
    CHECK(ep.zoom_levels == 3);
    CHECK(ep.variant == ModelVariant::B);
    CHECK(ep.gamma == 0.9);
    CHECK(ep.tau == 0.95);
    CHECK(ep.seed == 31);
    CHECK(ep.max_steps == 50);
    CHECK(ep.allow_absent);
    CHECK(ep.absent_prior_mass == 0.2);
    CHECK(ep.policy == PolicyKind::Pbvi);
    CHECK(ep.policy_params.pbvi_iterations == 5);
    CHECK(ep.policy_params.pbvi_max_beliefs == 64);
    CHECK(ep.policy_params.pbvi_mode == ObjectiveMode::TerminalReward);
    CHECK(ep.true_pose == ObjectPose::placed(3, 1));
    CHECK(run.episodes == 250);
    CHECK(run.workers == 4);
    CHECK(run.bench_policies == std::vector<PolicyKind>{PolicyKind::Pbvi, PolicyKind::Random});
    CHECK(run.out == "results.csv");
    CHECK(run.format == OutputFormat::Json);
}

TEST_CASE("an unknown policy lists the valid options") {
    CHECK_THROWS_WITH_AS(
        static_cast<void>(parse_config(R"({"world": {"rows": 2, "cols": 2}, "policy": "fast"})")),
        doctest::Contains("valid options are greedy, pbvi, random, sweep"), ConfigError);
    CHECK_THROWS_WITH_AS(
        static_cast<void>(parse_config(
            R"({"world": {"rows": 2, "cols": 2}, "policy": {"name": "fast"}})")),
        doctest::Contains("policy.name"), ConfigError);
}

TEST_CASE("out of range numbers name the field") {
    CHECK_THROWS_WITH_AS(static_cast<void>(parse_config(with_fields(R"("gamma": 1.5)"))),
                         doctest::Contains("gamma: must lie in (0, 1)"), ConfigError);
    CHECK_THROWS_AS(static_cast<void>(parse_config(with_fields(R"("gamma": 0)"))), ConfigError);
    CHECK_THROWS_WITH_AS(static_cast<void>(parse_config(with_fields(R"("tau": 0)"))),
                         doctest::Contains("tau"), ConfigError);
    CHECK_THROWS_AS(static_cast<void>(parse_config(with_fields(R"("tau": 1.01)"))), ConfigError);
    CHECK_THROWS_WITH_AS(static_cast<void>(parse_config(with_fields(R"("max_steps": -1)"))),
                         doctest::Contains("max_steps"), ConfigError);
    CHECK_THROWS_AS(static_cast<void>(parse_config(with_fields(R"("episodes": 0)"))), ConfigError);
    CHECK_THROWS_AS(static_cast<void>(parse_config(with_fields(R"("workers": 0)"))), ConfigError);
    CHECK_THROWS_WITH_AS(static_cast<void>(parse_config(with_fields(R"("seed": -5)"))),
                         doctest::Contains("seed: expected a nonnegative integer"), ConfigError);
    CHECK_THROWS_AS(static_cast<void>(parse_config(with_fields(R"("absent_prior_mass": 1.0)"))),
                    ConfigError);
}

TEST_CASE("missing and mistyped fields name the path") {
    CHECK_THROWS_WITH_AS(static_cast<void>(parse_config(R"({"policy": "greedy"})")),
                         doctest::Contains("world: missing required field"), ConfigError);
    CHECK_THROWS_WITH_AS(
        static_cast<void>(parse_config(R"({"world": {"rows": 2, "cols": 2}})")),
        doctest::Contains("policy: missing required field"), ConfigError);
    CHECK_THROWS_WITH_AS(
        static_cast<void>(parse_config(
            R"({"world": {"rows": "two", "cols": 2}, "policy": "greedy"})")),
        doctest::Contains("world.rows: expected an integer, got string"), ConfigError);
    CHECK_THROWS_WITH_AS(
        static_cast<void>(parse_config(
            R"({"world": {"rows": 2}, "policy": "greedy"})")),
        doctest::Contains("world.cols"), ConfigError);
}

TEST_CASE("unknown keys are rejected at every level") {
    CHECK_THROWS_WITH_AS(static_cast<void>(parse_config(with_fields(R"("wrld": 1)"))),
                         doctest::Contains("wrld: unknown key"), ConfigError);
    CHECK_THROWS_WITH_AS(
        static_cast<void>(parse_config(
            R"({"world": {"rows": 2, "cols": 2, "depth": 1}, "policy": "greedy"})")),
        doctest::Contains("world.depth: unknown key"), ConfigError);
    CHECK_THROWS_AS(
        static_cast<void>(parse_config(
            R"({"world": {"rows": 2, "cols": 2}, "policy": {"name": "pbvi", "iters": 2}})")),
        ConfigError);
}

TEST_CASE("solver knobs only attach to the solver policy") {
    CHECK_THROWS_WITH_AS(
        static_cast<void>(parse_config(
            R"({"world": {"rows": 2, "cols": 2}, "policy": {"name": "greedy", "iterations": 2}})")),
        doctest::Contains("policy.iterations: only valid for the pbvi policy"), ConfigError);
    const RunConfig run = parse_config(
        R"({"world": {"rows": 2, "cols": 2}, "policy": {"name": "pbvi", "objective": "per_step"}})");
    CHECK(run.episode.policy_params.pbvi_mode == ObjectiveMode::PerStepReward);
    CHECK_THROWS_WITH_AS(
        static_cast<void>(parse_config(
            R"({"world": {"rows": 2, "cols": 2}, "policy": {"name": "pbvi", "objective": "avg"}})")),
        doctest::Contains("policy.objective"), ConfigError);
}

TEST_CASE("zoom levels follow the sensor") {
    CHECK(parse_config(with_fields(R"("zoom_levels": 2)")).episode.observation ==
          ObservationModel::perfect(2));
    CHECK(parse_config(with_fields(R"("zoom_levels": 2)")).episode.zoom_levels == 2);
    CHECK_THROWS_WITH_AS(
        static_cast<void>(parse_config(with_fields(
            R"("zoom_levels": 2, "observation": {"preset": "noisy-default"})"))),
        doctest::Contains("zoom_levels"), ConfigError);
    CHECK_THROWS_AS(static_cast<void>(parse_config(with_fields(R"("zoom_levels": 0)"))),
                    ConfigError);
    CHECK_THROWS_WITH_AS(
        static_cast<void>(parse_config(with_fields(R"("observation": {"preset": "fuzzy"})"))),
        doctest::Contains("observation.preset"), ConfigError);
    CHECK_THROWS_WITH_AS(
        static_cast<void>(parse_config(with_fields(R"("observation": {})"))),
        doctest::Contains("exactly one of"), ConfigError);
}

TEST_CASE("a sensor table loads from a file next to the config") {
    const fs::path model_path =
        write_file("model.json", model_to_json(ObservationModel::noisy_default()).dump());
    const std::string text = with_fields(R"("observation": {"path": "model.json"})");
    const RunConfig run = parse_config(text, scratch_dir().string());
    CHECK(run.episode.observation == ObservationModel::noisy_default());
    CHECK(run.episode.zoom_levels == 3);

    const fs::path config_path = write_file("run.json", text);
    CHECK(load_config(config_path.string()).episode.observation ==
          ObservationModel::noisy_default());

    CHECK_THROWS_WITH_AS(
        static_cast<void>(parse_config(
            with_fields(R"("observation": {"path": "no_such_model.json"})"),
            scratch_dir().string())),
        doctest::Contains("observation.path: cannot open file"), ConfigError);

    write_file("broken.json", "{nope");
    CHECK_THROWS_WITH_AS(
        static_cast<void>(parse_config(with_fields(R"("observation": {"path": "broken.json"})"),
                                       scratch_dir().string())),
        doctest::Contains("not valid JSON"), ConfigError);

    auto doc = model_to_json(ObservationModel::noisy_default());
    doc["p1"][0][0] = 0.01;  // detection grows with distance: invalid
    write_file("nonmono.json", doc.dump());
    CHECK_THROWS_AS(
        static_cast<void>(parse_config(with_fields(R"("observation": {"path": "nonmono.json"})"),
                                       scratch_dir().string())),
        ConfigError);
}

TEST_CASE("custom objects parse and validate") {
    const std::string text = with_fields(
        R"("object": {"orientations": [[[0, 0], [0, 1]], [[0, 0], [1, 0]]], "aspect_ratio": 2.0})");
    const RunConfig run = parse_config(text);
    CHECK(run.episode.object.orientations.size() == 2);
    CHECK(run.episode.object.orientations[0] ==
          std::vector<CellOffset>{{0, 0}, {0, 1}});
    CHECK(run.episode.object.aspect_ratio == 2.0);

    CHECK_THROWS_WITH_AS(static_cast<void>(parse_config(with_fields(R"("object": "blob")"))),
                         doctest::Contains("object: unknown object preset"), ConfigError);
    CHECK_THROWS_AS(
        static_cast<void>(parse_config(with_fields(
            R"("object": {"orientations": [[[0, 0], [2, 2]]], "aspect_ratio": 1.0})"))),
        ConfigError);
    CHECK_THROWS_WITH_AS(
        static_cast<void>(parse_config(with_fields(
            R"("object": {"orientations": [[[0, 0]]]})"))),
        doctest::Contains("object.aspect_ratio: missing required field"), ConfigError);
}

TEST_CASE("true pose placement is checked against world and object") {
    CHECK(parse_config(with_fields(R"("true_pose": {"anchor": 5})")).episode.true_pose ==
          ObjectPose::placed(5, 0));
    CHECK(parse_config(with_fields(R"("allow_absent": true, "true_pose": "absent")"))
              .episode.true_pose == ObjectPose::absent());
    CHECK_THROWS_WITH_AS(
        static_cast<void>(parse_config(with_fields(R"("true_pose": "absent")"))),
        doctest::Contains("allow_absent"), ConfigError);
    CHECK_THROWS_WITH_AS(
        static_cast<void>(parse_config(with_fields(R"("true_pose": {"anchor": 65})"))),
        doctest::Contains("true_pose.anchor"), ConfigError);
    CHECK_THROWS_WITH_AS(
        static_cast<void>(parse_config(with_fields(
            R"("true_pose": {"anchor": 5, "orientation": 1})"))),
        doctest::Contains("true_pose.orientation"), ConfigError);
    CHECK_THROWS_WITH_AS(
        static_cast<void>(parse_config(with_fields(
            R"("object": "domino", "true_pose": {"anchor": 8})"))),
        doctest::Contains("does not fit"), ConfigError);
}

TEST_CASE("the comparison set rejects duplicates and junk") {
    CHECK_THROWS_WITH_AS(
        static_cast<void>(parse_config(with_fields(R"("bench_policies": [])"))),
        doctest::Contains("bench_policies"), ConfigError);
    CHECK_THROWS_WITH_AS(
        static_cast<void>(parse_config(with_fields(
            R"("bench_policies": ["greedy", "greedy"])"))),
        doctest::Contains("duplicate policy"), ConfigError);
    CHECK_THROWS_WITH_AS(
        static_cast<void>(parse_config(with_fields(
            R"("bench_policies": ["greedy", "fast"])"))),
        doctest::Contains("bench_policies[1]"), ConfigError);
}

TEST_CASE("documents that are not objects fail up front") {
    CHECK_THROWS_WITH_AS(static_cast<void>(parse_config("[1, 2]")),
                         doctest::Contains("expected a JSON object"), ConfigError);
    CHECK_THROWS_WITH_AS(static_cast<void>(parse_config("{nope")),
                         doctest::Contains("config is not valid JSON"), ConfigError);
    CHECK_THROWS_WITH_AS(static_cast<void>(load_config("/no/such/config.json")),
                         doctest::Contains("cannot open config file"), ConfigError);
    CHECK_THROWS_WITH_AS(static_cast<void>(parse_config(with_fields(R"("format": "xml")"))),
                         doctest::Contains("format"), ConfigError);
    CHECK_THROWS_WITH_AS(static_cast<void>(parse_config(with_fields(R"("variant": "C")"))),
                         doctest::Contains("variant"), ConfigError);
}

}  // TEST_SUITE
