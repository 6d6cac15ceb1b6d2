#include "scout/cli.hpp"

#include <charconv>
#include <cstddef>
#include <fstream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "scout/cassandra.hpp"
#include "scout/config.hpp"
#include "scout/errors.hpp"
#include "scout/render.hpp"
#include "scout/sim.hpp"

namespace scout {

namespace {

std::string fmt(double v) {
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw FormatError("cannot format numeric value");
    return std::string(buf, end);
}

void write_output(const std::string& path, const std::string& bytes, std::ostream& fallback) {
    if (path.empty()) {
        fallback << bytes;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error("cannot open output file: " + path);
    file << bytes;
    file.flush();
    if (!file) throw Error("cannot write output file: " + path);
}

int do_export(const RunConfig& run, std::ostream& out) {
    const PomdpModel model = build_model(run.episode);
    write_output(run.out, write_cassandra_string(to_cassandra(model)), out);
    return 0;
}

int do_solve(const RunConfig& run, std::ostream& out) {
    const PomdpModel model = build_model(run.episode);
    const Belief prior = Belief::uniform_prior(model.hypotheses(), run.episode.absent_prior_mass);
    const AlphaVectorSet set = solve_pbvi_policy(model, run.episode.policy_params, prior);

    nlohmann::ordered_json doc;
    doc["format"] = "scout-alphas/1";
    doc["variant"] = to_string(model.variant());
    doc["objective"] = to_string(run.episode.policy_params.pbvi_mode);
    doc["iterations"] = run.episode.policy_params.pbvi_iterations;
    doc["max_beliefs"] = run.episode.policy_params.pbvi_max_beliefs;
    auto states = nlohmann::ordered_json::array();
    for (int s = 0; s < model.state_count(); ++s) states.push_back(model.state_name(s));
    doc["states"] = std::move(states);
    auto alphas = nlohmann::ordered_json::array();
    for (const AlphaVector& alpha : set.alphas()) {
        alphas.push_back(nlohmann::ordered_json{{"action", to_string(alpha.action)},
                                                {"coef", alpha.coef}});
    }
    doc["alphas"] = std::move(alphas);
    write_output(run.out, doc.dump() + "\n", out);
    return 0;
}

int do_simulate(const RunConfig& run, bool render, std::ostream& out) {
    const EpisodeConfig& ep = run.episode;
    const EpisodeResult result = run_episode(ep);
    if (render) {
        // Replays the recorded action/observation chain; the belief path is a
        // deterministic function of it.
        Belief belief =
            Belief::uniform_prior(ep.world, ep.allow_absent, ep.absent_prior_mass);
        std::vector<double> probs(static_cast<std::size_t>(ep.world.block_count()));
        for (std::size_t i = 0; i < result.steps.size(); ++i) {
            const StepRecord& step = result.steps[i];
            belief = bayes_update(belief, step.action.view(), step.observation, ep.observation,
                                  ep.world);
            out << "step " << i + 1 << " action=" << to_string(step.action)
                << " obs=" << to_string(step.observation) << " mode=" << fmt(step.mode_value)
                << " entropy=" << fmt(step.entropy);
            std::fill(probs.begin(), probs.end(), 0.0);
            for (std::size_t h = 0; h < belief.size(); ++h) {
                const Hypothesis& hyp = belief.hypothesis(h);
                if (hyp.is_absent()) {
                    out << " absent=" << fmt(belief.probability(h));
                } else {
                    probs[static_cast<std::size_t>(hyp.block) - 1] = belief.probability(h);
                }
            }
            out << '\n' << ascii_heatmap(ep.world, probs);
        }
    }
    if (!run.out.empty()) {
        write_output(run.out, episode_to_json(result).dump() + "\n", out);
    }
    out << "success=" << (result.success ? "true" : "false") << " steps=" << result.steps_taken
        << '\n';
    return 0;
}

int do_bench(const RunConfig& run, std::ostream& out) {
    std::vector<std::pair<std::string, BatchMetrics>> rows;
    EpisodeConfig ep = run.episode;
    for (const PolicyKind kind : run.bench_policies) {
        ep.policy = kind;
        rows.emplace_back(to_string(kind), run_batch(ep, run.episodes, run.workers).metrics);
    }
    const std::string text = run.format == OutputFormat::Csv
                                 ? metrics_to_csv(rows)
                                 : metrics_to_json(rows).dump() + "\n";
    write_output(run.out, text, out);
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Belief-space planning toolkit for eye-in-hand object search on a block grid"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    bool render = false;
    std::string format_name;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "Experiment config file (JSON)")->required();
        sub->add_option("--out", out_path,
                        "Output file; overrides the config's `out` (default stdout)");
    };

    CLI::App* cmd_export =
        app.add_subcommand("export", "Write the configured model as Cassandra .pomdp text");
    add_common(cmd_export);

    CLI::App* cmd_solve = app.add_subcommand(
        "solve", "Run point-based value iteration and write the alpha-vector set");
    add_common(cmd_solve);

    CLI::App* cmd_simulate = app.add_subcommand("simulate", "Run one seeded search episode");
    add_common(cmd_simulate);
    CLI::Option* simulate_seed =
        cmd_simulate->add_option("--seed", seed, "Override the config's seed");
    cmd_simulate->add_flag("--render", render, "Print a belief heatmap after every step");

    CLI::App* cmd_bench =
        app.add_subcommand("bench", "Compare the configured policies over seeded batches");
    add_common(cmd_bench);
    CLI::Option* bench_seed = cmd_bench->add_option("--seed", seed, "Override the config's seed");
    CLI::Option* bench_format = cmd_bench->add_option("--format", format_name, "Metrics format")
                                    ->check(CLI::IsMember({"csv", "json"}));

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("scout");
    for (const std::string& arg : args) argv.push_back(arg.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        RunConfig run = load_config(config_path);
        if (sub->count("--out") > 0) run.out = out_path;
        if ((sub == cmd_simulate && simulate_seed->count() > 0) ||
            (sub == cmd_bench && bench_seed->count() > 0)) {
            run.episode.seed = seed;
        }
        if (sub == cmd_bench && bench_format->count() > 0) {
            run.format = format_name == "csv" ? OutputFormat::Csv : OutputFormat::Json;
        }
        if (sub == cmd_export) return do_export(run, out);
        if (sub == cmd_solve) return do_solve(run, out);
        if (sub == cmd_simulate) return do_simulate(run, render, out);
        return do_bench(run, out);
    } catch (const std::exception& e) {
        err << "scout " << sub->get_name() << ": " << e.what() << '\n';
        return 1;
    }
}

}  // namespace scout
