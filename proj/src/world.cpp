#include "scout/world.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

namespace scout {

GridWorld::GridWorld(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument("GridWorld: rows and cols must be positive, got " +
                                    std::to_string(rows) + "x" + std::to_string(cols));
    }
}

std::string to_string(DistanceBand band) {
    return "d" + std::to_string(static_cast<int>(band));
}

namespace {

void check_block(const GridWorld& world, BlockId id, const char* who) {
    if (!world.contains(id)) {
        throw std::invalid_argument(std::string(who) + ": block " + std::to_string(id) +
                                    " outside the " + std::to_string(world.rows()) + "x" +
                                    std::to_string(world.cols()) + " grid");
    }
}

}  // namespace

std::vector<BlockId> view_footprint(const GridWorld& world, const CameraView& view) {
    if (!world.contains(view.center)) {
        throw InvalidViewError("view center " + std::to_string(view.center) + " outside the " +
                               std::to_string(world.rows()) + "x" + std::to_string(world.cols()) +
                               " grid");
    }
    if (view.zoom < 1) {
        throw InvalidViewError("zoom level must be >= 1, got " + std::to_string(view.zoom));
    }
    const int w = view.zoom - 1;  // window half-width
    const int r0 = world.row_of(view.center);
    const int c0 = world.col_of(view.center);
    std::vector<BlockId> out;
    out.reserve(static_cast<std::size_t>(2 * w + 1) * (2 * w + 1));
    for (int r = std::max(0, r0 - w); r <= std::min(world.rows() - 1, r0 + w); ++r) {
        for (int c = std::max(0, c0 - w); c <= std::min(world.cols() - 1, c0 + w); ++c) {
            out.push_back(world.block_at(r, c));
        }
    }
    return out;
}

int squared_dist(const GridWorld& world, BlockId i, BlockId j) {
    check_block(world, i, "squared_dist");
    check_block(world, j, "squared_dist");
    const int dr = world.row_of(i) - world.row_of(j);
    const int dc = world.col_of(i) - world.col_of(j);
    return dr * dr + dc * dc;
}

double dist(const GridWorld& world, BlockId i, BlockId j) {
    return std::sqrt(static_cast<double>(squared_dist(world, i, j)));
}

DistanceBand distance_band(const GridWorld& world, BlockId i, BlockId j) {
    // Band edges are sqrt2, 2, 2*sqrt2, sqrt10; comparing squared distances
    // (2, 4, 8, 10) keeps the classification exact.
    const int d2 = squared_dist(world, i, j);
    if (d2 == 0) return DistanceBand::d0;
    if (d2 <= 2) return DistanceBand::d1;
    if (d2 <= 4) return DistanceBand::d2;
    if (d2 <= 8) return DistanceBand::d3;
    if (d2 <= 10) return DistanceBand::d4;
    return DistanceBand::d5;
}

int num_at_band(const GridWorld& world, std::span<const BlockId> centers, BlockId i,
                DistanceBand band) {
    if (std::find(centers.begin(), centers.end(), i) == centers.end()) {
        throw std::invalid_argument("num_at_band: block " + std::to_string(i) +
                                    " is not one of the centers");
    }
    int count = 0;
    for (BlockId j : centers) {
        if (j != i && distance_band(world, i, j) == band) ++count;
    }
    return count;
}

ObjectSpec ObjectSpec::single_cell() {
    return ObjectSpec{{{{0, 0}}}, 1.0};
}

ObjectSpec ObjectSpec::domino() {
    return ObjectSpec{{{{0, 0}, {0, 1}}, {{0, 0}, {1, 0}}}, 2.0};
}

ObjectSpec ObjectSpec::triple_bar() {
    return ObjectSpec{{{{0, 0}, {0, 1}, {0, 2}}, {{0, 0}, {1, 0}, {2, 0}}}, 3.0};
}

void ObjectSpec::validate() const {
    if (orientations.empty()) throw std::invalid_argument("ObjectSpec: no orientations");
    if (!(aspect_ratio > 0)) throw std::invalid_argument("ObjectSpec: aspect_ratio must be > 0");
    for (std::size_t k = 0; k < orientations.size(); ++k) {
        const auto& cells = orientations[k];
        const std::string where = "ObjectSpec orientation " + std::to_string(k);
        if (cells.empty() || cells.size() > 3) {
            throw std::invalid_argument(where + ": footprint must have 1-3 cells");
        }
        std::set<CellOffset> uniq(cells.begin(), cells.end());
        if (uniq.size() != cells.size()) {
            throw std::invalid_argument(where + ": duplicate cells");
        }
        if (!uniq.count(CellOffset{0, 0})) {
            throw std::invalid_argument(where + ": footprint must contain the anchor (0,0)");
        }
        // 4-neighbor connectivity
        std::set<CellOffset> seen;
        std::queue<CellOffset> frontier;
        frontier.push(CellOffset{0, 0});
        seen.insert(CellOffset{0, 0});
        while (!frontier.empty()) {
            const CellOffset cur = frontier.front();
            frontier.pop();
            const CellOffset nbrs[4] = {{cur.dr - 1, cur.dc},
                                        {cur.dr + 1, cur.dc},
                                        {cur.dr, cur.dc - 1},
                                        {cur.dr, cur.dc + 1}};
            for (const CellOffset& n : nbrs) {
                if (uniq.count(n) && !seen.count(n)) {
                    seen.insert(n);
                    frontier.push(n);
                }
            }
        }
        if (seen.size() != uniq.size()) {
            throw std::invalid_argument(where + ": footprint cells are not edge-connected");
        }
    }
}

std::vector<BlockId> reduced_centers(const GridWorld& world, const ObjectSpec& spec) {
    std::vector<BlockId> out;
    const bool reduce = spec.aspect_ratio >= 2.0;
    for (BlockId id = 1; id <= world.block_count(); ++id) {
        if (!reduce || (world.row_of(id) + world.col_of(id)) % 2 == 0) {
            out.push_back(id);
        }
    }
    return out;
}

bool pose_fits(const GridWorld& world, const ObjectSpec& spec, BlockId anchor, int orientation) {
    check_block(world, anchor, "pose_fits");
    if (orientation < 0 || orientation >= static_cast<int>(spec.orientations.size())) {
        throw std::invalid_argument("pose_fits: orientation " + std::to_string(orientation) +
                                    " out of range");
    }
    const int r0 = world.row_of(anchor);
    const int c0 = world.col_of(anchor);
    for (const CellOffset& off : spec.orientations[orientation]) {
        if (!world.contains_cell(r0 + off.dr, c0 + off.dc)) return false;
    }
    return true;
}

std::vector<ObjectPose> enumerate_poses(const GridWorld& world, const ObjectSpec& spec,
                                        bool allow_absent) {
    spec.validate();
    std::vector<ObjectPose> out;
    for (BlockId anchor = 1; anchor <= world.block_count(); ++anchor) {
        for (int o = 0; o < static_cast<int>(spec.orientations.size()); ++o) {
            if (pose_fits(world, spec, anchor, o)) out.push_back(ObjectPose::placed(anchor, o));
        }
    }
    if (allow_absent) out.push_back(ObjectPose::absent());
    if (out.empty()) {
        throw NoHypothesisError("no placement of the object fits the " +
                                std::to_string(world.rows()) + "x" + std::to_string(world.cols()) +
                                " grid and Absent is not allowed");
    }
    return out;
}

std::vector<BlockId> occupied_blocks(const GridWorld& world, const ObjectSpec& spec,
                                     const ObjectPose& pose) {
    if (pose.is_absent()) return {};
    if (!pose_fits(world, spec, pose.anchor, pose.orientation)) {
        throw std::invalid_argument("occupied_blocks: pose at block " +
                                    std::to_string(pose.anchor) + " does not fit the grid");
    }
    const int r0 = world.row_of(pose.anchor);
    const int c0 = world.col_of(pose.anchor);
    std::vector<BlockId> out;
    for (const CellOffset& off : spec.orientations[pose.orientation]) {
        out.push_back(world.block_at(r0 + off.dr, c0 + off.dc));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace scout
