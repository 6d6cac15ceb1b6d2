#include "scout/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace scout {

std::string ascii_heatmap(const GridWorld& world, std::span<const double> probs) {
    if (static_cast<int>(probs.size()) != world.block_count()) {
        throw std::invalid_argument("heatmap expects " + std::to_string(world.block_count()) +
                                    " block weights, got " + std::to_string(probs.size()));
    }
    std::vector<double> nonzero;
    nonzero.reserve(probs.size());
    for (const double p : probs) {
        if (!std::isfinite(p) || p < 0.0) {
            throw std::invalid_argument("heatmap weights must be finite and nonnegative");
        }
        if (p > 0.0) nonzero.push_back(p);
    }
    std::sort(nonzero.begin(), nonzero.end());

    std::string out;
    out.reserve(static_cast<std::size_t>(world.block_count() + world.rows()));
    const long m2 = 2 * static_cast<long>(nonzero.size());
    for (int r = 0; r < world.rows(); ++r) {
        for (int c = 0; c < world.cols(); ++c) {
            const double p = probs[static_cast<std::size_t>(world.block_at(r, c)) - 1];
            if (p <= 0.0) {
                out.push_back(kHeatRamp.front());
                continue;
            }
            // Twice the midrank of p among the nonzero weights; integer
            // arithmetic keeps the quantile-to-ramp rounding exact.
            const long below = std::lower_bound(nonzero.begin(), nonzero.end(), p) -
                               nonzero.begin();
            const long upto = std::upper_bound(nonzero.begin(), nonzero.end(), p) -
                              nonzero.begin();
            const long midrank2 = below + upto + 1;
            const long idx = (9 * midrank2 + m2 - 1) / m2;
            out.push_back(kHeatRamp[static_cast<std::size_t>(idx)]);
        }
        out.push_back('\n');
    }
    return out;
}

}  // namespace scout
