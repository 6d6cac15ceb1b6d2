#pragma once

#include <string>
#include <vector>

#include "scout/sim.hpp"

namespace scout {

enum class OutputFormat { Csv, Json };

std::string to_string(OutputFormat format);

/// One experiment document driving every subcommand. `episode` carries the
/// fully resolved model inputs and the policy under test; the rest steers
/// batch size, the comparison set and where results go.
struct RunConfig {
    EpisodeConfig episode;
    int episodes = 1000;
    int workers = 1;
    std::vector<PolicyKind> bench_policies{PolicyKind::Greedy, PolicyKind::Sweep,
                                           PolicyKind::Random};
    std::string out;  // empty means stdout
    OutputFormat format = OutputFormat::Csv;
};

/// Parses a JSON experiment document. `world` and `policy` are required;
/// everything else defaults (single-cell object, perfect sensor, 3 zoom
/// levels, variant A, gamma 0.95, tau 0.99, seed 0, 200 step cap). Unknown
/// keys anywhere are errors, as are type mismatches and out-of-range values;
/// ConfigError messages carry the offending field path. base_dir anchors
/// relative observation model paths.
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");

/// Reads and parses a config file. Relative paths inside the document resolve
/// against the file's directory.
RunConfig load_config(const std::string& path);

}  // namespace scout
