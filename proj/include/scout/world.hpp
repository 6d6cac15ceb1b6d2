#pragma once

#include <span>
#include <string>
#include <vector>

#include "scout/errors.hpp"

namespace scout {

/// 1-based block identifier; blocks number 1..N in row-major order.
using BlockId = int;

/// Rectangular lattice of unit-side blocks laid over the search area.
class GridWorld {
public:
    GridWorld(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int block_count() const { return rows_ * cols_; }

    bool contains(BlockId id) const { return id >= 1 && id <= block_count(); }
    bool contains_cell(int row, int col) const {
        return row >= 0 && row < rows_ && col >= 0 && col < cols_;
    }

    /// (row, col) are 0-based; ids are 1-based.
    BlockId block_at(int row, int col) const { return row * cols_ + col + 1; }
    int row_of(BlockId id) const { return (id - 1) / cols_; }
    int col_of(BlockId id) const { return (id - 1) % cols_; }

private:
    int rows_;
    int cols_;
};

/// An observation point: camera centered on a block at a given zoom level.
/// Zoom k covers a (2k-1) x (2k-1) block window clipped to the grid.
struct CameraView {
    BlockId center = 0;
    int zoom = 1;

    bool operator==(const CameraView&) const = default;
};

/// Relative cell of a footprint, (row delta, col delta) from the anchor.
struct CellOffset {
    int dr = 0;
    int dc = 0;

    bool operator==(const CellOffset&) const = default;
    auto operator<=>(const CellOffset&) const = default;
};

/// Shape of the searched object: one footprint per orientation, each a set of
/// 1-3 edge-connected cells containing the anchor (0,0). aspect_ratio is the
/// length/width ratio used to decide whether the observation centers can be
/// thinned to a checkerboard.
struct ObjectSpec {
    std::vector<std::vector<CellOffset>> orientations;
    double aspect_ratio = 1.0;

    static ObjectSpec single_cell();
    static ObjectSpec domino();
    static ObjectSpec triple_bar();

    /// Throws std::invalid_argument on empty, oversized or disconnected
    /// footprints, a missing anchor cell, or a non-positive aspect ratio.
    void validate() const;
};

/// Ground-truth placement: either Absent, or anchored at a block with one of
/// the spec's orientations.
struct ObjectPose {
    BlockId anchor = 0;  // 0 encodes Absent
    int orientation = 0;

    static ObjectPose absent() { return ObjectPose{0, 0}; }
    static ObjectPose placed(BlockId anchor, int orientation) {
        return ObjectPose{anchor, orientation};
    }
    bool is_absent() const { return anchor == 0; }

    bool operator==(const ObjectPose&) const = default;
};

/// Discretized inter-block center distance class. d1..d4 correspond to the
/// four distances arising between checkerboard centers (sqrt2, 2, 2*sqrt2,
/// sqrt10); d5 is everything farther, d0 is the same block.
enum class DistanceBand : int { d0 = 0, d1 = 1, d2 = 2, d3 = 3, d4 = 4, d5 = 5 };

inline constexpr int kBandCount = 6;

std::string to_string(DistanceBand band);

/// Blocks covered by a view: the square window centered on view.center,
/// clipped to the grid. Ascending block ids; never empty for a valid view.
std::vector<BlockId> view_footprint(const GridWorld& world, const CameraView& view);

/// Squared Euclidean distance between block centers (exact integer).
int squared_dist(const GridWorld& world, BlockId i, BlockId j);

/// Euclidean distance between block centers, in block-side units.
double dist(const GridWorld& world, BlockId i, BlockId j);

/// Band of dist(i, j). Intervals are half-open with inclusive upper ends:
/// d0 = {0}, d1 = (0, sqrt2], d2 = (sqrt2, 2], d3 = (2, 2*sqrt2],
/// d4 = (2*sqrt2, sqrt10], d5 = (sqrt10, inf).
DistanceBand distance_band(const GridWorld& world, BlockId i, BlockId j);

/// Number of other centers at the given band from block i. i must be a center.
int num_at_band(const GridWorld& world, std::span<const BlockId> centers, BlockId i,
                DistanceBand band);

/// Observation centers after space reduction: the even-parity checkerboard
/// sublattice (anchored at block 1) when the object's aspect ratio is >= 2,
/// otherwise every block. Ascending ids.
std::vector<BlockId> reduced_centers(const GridWorld& world, const ObjectSpec& spec);

/// True when every cell of the orientation's footprint lies inside the grid.
bool pose_fits(const GridWorld& world, const ObjectSpec& spec, BlockId anchor, int orientation);

/// All in-bounds placements (anchor ascending, orientation ascending), with
/// Absent appended last when allow_absent is set. Throws NoHypothesisError if
/// the result would be empty.
std::vector<ObjectPose> enumerate_poses(const GridWorld& world, const ObjectSpec& spec,
                                        bool allow_absent);

/// Blocks occupied by a pose, ascending. Empty for Absent.
std::vector<BlockId> occupied_blocks(const GridWorld& world, const ObjectSpec& spec,
                                     const ObjectPose& pose);

}  // namespace scout
