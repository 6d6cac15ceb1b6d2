#pragma once

#include <span>
#include <string>
#include <string_view>

#include "scout/world.hpp"

namespace scout {

/// Shading characters, dimmest first.
inline constexpr std::string_view kHeatRamp = " .:-=+*#%@";

/// Renders per-block weights as one character per block, row by row, ending
/// with a newline. probs[i] belongs to block i+1 and must be finite and
/// nonnegative. Zero-weight blocks print as the dimmest ramp character; the
/// rest are shaded by their quantile (midrank) among the nonzero blocks, so
/// the picture only depends on the ordering of the weights, not their scale.
std::string ascii_heatmap(const GridWorld& world, std::span<const double> probs);

}  // namespace scout
