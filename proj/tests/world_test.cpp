#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "scout/rng.hpp"
#include "scout/world.hpp"

using namespace scout;

namespace {

bool is_checker(const GridWorld& w, BlockId id) {
    return (w.row_of(id) + w.col_of(id)) % 2 == 0;
}

}  // namespace

TEST_SUITE("world") {

TEST_CASE("grid indexing round-trips") {
    GridWorld w(3, 5);
    CHECK(w.block_count() == 15);
    CHECK(w.block_at(0, 0) == 1);
    CHECK(w.block_at(2, 4) == 15);
    for (BlockId id = 1; id <= w.block_count(); ++id) {
        CHECK(w.block_at(w.row_of(id), w.col_of(id)) == id);
        CHECK(w.contains(id));
    }
    CHECK_FALSE(w.contains(0));
    CHECK_FALSE(w.contains(16));
    CHECK_FALSE(w.contains_cell(-1, 0));
    CHECK_FALSE(w.contains_cell(0, 5));
    CHECK_THROWS_AS(GridWorld(0, 4), std::invalid_argument);
    CHECK_THROWS_AS(GridWorld(4, -1), std::invalid_argument);
}

TEST_CASE("view footprint: interior window") {
    GridWorld w(8, 8);
    CHECK(view_footprint(w, {28, 1}) == std::vector<BlockId>{28});
    CHECK(view_footprint(w, {28, 2}) ==
          std::vector<BlockId>{19, 20, 21, 27, 28, 29, 35, 36, 37});
    CHECK(view_footprint(w, {28, 3}).size() == 25);
}

TEST_CASE("view footprint: border clipping") {
    GridWorld w(8, 8);
    CHECK(view_footprint(w, {1, 3}) == std::vector<BlockId>{1, 2, 3, 9, 10, 11, 17, 18, 19});
    CHECK(view_footprint(w, {64, 2}) == std::vector<BlockId>{55, 56, 63, 64});
    CHECK(view_footprint(w, {8, 2}) == std::vector<BlockId>{7, 8, 15, 16});
}

TEST_CASE("view footprint rejects bad views") {
    GridWorld w(4, 4);
    CHECK_THROWS_AS(view_footprint(w, {0, 1}), InvalidViewError);
    CHECK_THROWS_AS(view_footprint(w, {17, 1}), InvalidViewError);
    CHECK_THROWS_AS(view_footprint(w, {1, 0}), InvalidViewError);
}

TEST_CASE("footprint equals the clipped Chebyshev window") {
    for (auto [rows, cols] : {std::pair{4, 4}, {8, 8}, {3, 5}}) {
        GridWorld w(rows, cols);
        for (BlockId c = 1; c <= w.block_count(); ++c) {
            for (int zoom = 1; zoom <= 4; ++zoom) {
                const auto fp = view_footprint(w, {c, zoom});
                CHECK(std::is_sorted(fp.begin(), fp.end()));
                CHECK(std::adjacent_find(fp.begin(), fp.end()) == fp.end());
                const std::set<BlockId> in_view(fp.begin(), fp.end());
                for (BlockId b = 1; b <= w.block_count(); ++b) {
                    const int cheb = std::max(std::abs(w.row_of(b) - w.row_of(c)),
                                              std::abs(w.col_of(b) - w.col_of(c)));
                    CHECK(in_view.count(b) == (cheb <= zoom - 1 ? 1u : 0u));
                }
            }
        }
    }
}

TEST_CASE("distances") {
    GridWorld w(8, 8);
    CHECK(squared_dist(w, 1, 1) == 0);
    CHECK(squared_dist(w, 1, 10) == 2);
    CHECK(squared_dist(w, 10, 1) == 2);
    CHECK(squared_dist(w, 1, 64) == 98);
    CHECK(dist(w, 1, 10) == doctest::Approx(std::sqrt(2.0)));
    CHECK(dist(w, 1, 12) == doctest::Approx(std::sqrt(10.0)));
    CHECK_THROWS_AS(squared_dist(w, 0, 1), std::invalid_argument);
}

TEST_CASE("dist is a metric") {
    GridWorld w(8, 8);
    Rng rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const BlockId a = static_cast<BlockId>(rng.uniform_int(64)) + 1;
        const BlockId b = static_cast<BlockId>(rng.uniform_int(64)) + 1;
        const BlockId c = static_cast<BlockId>(rng.uniform_int(64)) + 1;
        CHECK(dist(w, a, b) == dist(w, b, a));
        CHECK((dist(w, a, b) == 0.0) == (a == b));
        CHECK(dist(w, a, c) <= dist(w, a, b) + dist(w, b, c) + 1e-12);
    }
}

TEST_CASE("max-zoom footprints of reduced centers cover the grid") {
    for (auto [rows, cols, zoom] : {std::tuple{8, 8, 3}, {8, 8, 2}, {6, 9, 3}, {7, 3, 2}}) {
        GridWorld w(rows, cols);
        std::set<BlockId> covered;
        for (BlockId c : reduced_centers(w, ObjectSpec::domino())) {
            const auto fp = view_footprint(w, {c, zoom});
            covered.insert(fp.begin(), fp.end());
        }
        CHECK(static_cast<int>(covered.size()) == w.block_count());
    }
}

TEST_CASE("band intervals have inclusive upper ends") {
    GridWorld w(8, 8);
    // Reachable squared distances near the edges: 1,2 | 4 | 5,8 | 9,10 | 13+.
    CHECK(distance_band(w, 1, 1) == DistanceBand::d0);
    CHECK(distance_band(w, 1, 2) == DistanceBand::d1);    // sq 1
    CHECK(distance_band(w, 1, 10) == DistanceBand::d1);   // sq 2 = (sqrt2)^2
    CHECK(distance_band(w, 1, 3) == DistanceBand::d2);    // sq 4 = 2^2
    CHECK(distance_band(w, 1, 11) == DistanceBand::d3);   // sq 5
    CHECK(distance_band(w, 1, 19) == DistanceBand::d3);   // sq 8 = (2*sqrt2)^2
    CHECK(distance_band(w, 1, 4) == DistanceBand::d4);    // sq 9
    CHECK(distance_band(w, 1, 12) == DistanceBand::d4);   // sq 10 = (sqrt10)^2
    CHECK(distance_band(w, 1, 20) == DistanceBand::d5);   // sq 13
    CHECK(distance_band(w, 1, 5) == DistanceBand::d5);    // sq 16
    CHECK(to_string(DistanceBand::d4) == "d4");
}

TEST_CASE("checkerboard reduction") {
    GridWorld w(8, 8);
    const auto all = reduced_centers(w, ObjectSpec::single_cell());
    CHECK(all.size() == 64);
    const auto checker = reduced_centers(w, ObjectSpec::domino());
    CHECK(checker.size() == 32);
    CHECK(std::is_sorted(checker.begin(), checker.end()));
    CHECK(checker.front() == 1);
    for (BlockId id : checker) CHECK(is_checker(w, id));
    CHECK(std::find(checker.begin(), checker.end(), 2) == checker.end());
    CHECK(std::find(checker.begin(), checker.end(), 28) != checker.end());

    CHECK(reduced_centers(GridWorld(1, 1), ObjectSpec::domino()) == std::vector<BlockId>{1});
    CHECK(reduced_centers(GridWorld(3, 3), ObjectSpec::triple_bar()) ==
          std::vector<BlockId>{1, 3, 5, 7, 9});
}

TEST_CASE("checkerboard band counts: interior and corner") {
    GridWorld w(8, 8);
    const auto centers = reduced_centers(w, ObjectSpec::domino());
    // Interior center (3,3): the four bands hold 4, 4, 4, 8 neighbors.
    CHECK(num_at_band(w, centers, 28, DistanceBand::d0) == 0);
    CHECK(num_at_band(w, centers, 28, DistanceBand::d1) == 4);
    CHECK(num_at_band(w, centers, 28, DistanceBand::d2) == 4);
    CHECK(num_at_band(w, centers, 28, DistanceBand::d3) == 4);
    CHECK(num_at_band(w, centers, 28, DistanceBand::d4) == 8);
    CHECK(num_at_band(w, centers, 28, DistanceBand::d5) == 11);
    // Corner center (0,0) loses the out-of-grid neighbors.
    CHECK(num_at_band(w, centers, 1, DistanceBand::d1) == 1);
    CHECK(num_at_band(w, centers, 1, DistanceBand::d2) == 2);
    CHECK(num_at_band(w, centers, 1, DistanceBand::d3) == 1);
    CHECK(num_at_band(w, centers, 1, DistanceBand::d4) == 2);
    CHECK_THROWS_AS(num_at_band(w, centers, 2, DistanceBand::d1), std::invalid_argument);
}

TEST_CASE("every interior checkerboard center sees (4,4,4,8)") {
    for (int n : {8, 12}) {
        GridWorld w(n, n);
        const auto centers = reduced_centers(w, ObjectSpec::domino());
        int interior = 0;
        for (BlockId c : centers) {
            const int r = w.row_of(c), col = w.col_of(c);
            if (r < 3 || col < 3 || r > n - 4 || col > n - 4) continue;
            ++interior;
            CHECK(num_at_band(w, centers, c, DistanceBand::d1) == 4);
            CHECK(num_at_band(w, centers, c, DistanceBand::d2) == 4);
            CHECK(num_at_band(w, centers, c, DistanceBand::d3) == 4);
            CHECK(num_at_band(w, centers, c, DistanceBand::d4) == 8);
        }
        CHECK(interior > 0);
    }
}

TEST_CASE("object spec validation") {
    CHECK_NOTHROW(ObjectSpec::single_cell().validate());
    CHECK_NOTHROW(ObjectSpec::domino().validate());
    CHECK_NOTHROW(ObjectSpec::triple_bar().validate());

    CHECK_THROWS_AS(ObjectSpec{}.validate(), std::invalid_argument);
    ObjectSpec four{{{{0, 0}, {0, 1}, {0, 2}, {0, 3}}}, 4.0};
    CHECK_THROWS_AS(four.validate(), std::invalid_argument);
    ObjectSpec no_anchor{{{{0, 1}, {0, 2}}}, 2.0};
    CHECK_THROWS_AS(no_anchor.validate(), std::invalid_argument);
    ObjectSpec dup{{{{0, 0}, {0, 0}}}, 1.0};
    CHECK_THROWS_AS(dup.validate(), std::invalid_argument);
    ObjectSpec gap{{{{0, 0}, {0, 2}}}, 3.0};
    CHECK_THROWS_AS(gap.validate(), std::invalid_argument);
    ObjectSpec diag{{{{0, 0}, {1, 1}}}, 2.0};
    CHECK_THROWS_AS(diag.validate(), std::invalid_argument);
    ObjectSpec bad_aspect{{{{0, 0}}}, 0.0};
    CHECK_THROWS_AS(bad_aspect.validate(), std::invalid_argument);
}

TEST_CASE("pose enumeration") {
    GridWorld w(2, 2);
    const auto singles = enumerate_poses(w, ObjectSpec::single_cell(), true);
    REQUIRE(singles.size() == 5);
    for (int i = 0; i < 4; ++i) CHECK(singles[i] == ObjectPose::placed(i + 1, 0));
    CHECK(singles.back().is_absent());

    const auto dominoes = enumerate_poses(w, ObjectSpec::domino(), false);
    const std::vector<ObjectPose> expect = {
        ObjectPose::placed(1, 0), ObjectPose::placed(1, 1),
        ObjectPose::placed(2, 1), ObjectPose::placed(3, 0)};
    CHECK(dominoes == expect);

    GridWorld tiny(1, 1);
    CHECK_THROWS_AS(enumerate_poses(tiny, ObjectSpec::triple_bar(), false), NoHypothesisError);
    const auto only_absent = enumerate_poses(tiny, ObjectSpec::triple_bar(), true);
    REQUIRE(only_absent.size() == 1);
    CHECK(only_absent[0].is_absent());
}

TEST_CASE("occupied blocks") {
    GridWorld w(3, 3);
    CHECK(occupied_blocks(w, ObjectSpec::single_cell(), ObjectPose::placed(5, 0)) ==
          std::vector<BlockId>{5});
    CHECK(occupied_blocks(w, ObjectSpec::domino(), ObjectPose::placed(1, 0)) ==
          std::vector<BlockId>{1, 2});
    CHECK(occupied_blocks(w, ObjectSpec::domino(), ObjectPose::placed(1, 1)) ==
          std::vector<BlockId>{1, 4});
    CHECK(occupied_blocks(w, ObjectSpec::triple_bar(), ObjectPose::placed(1, 1)) ==
          std::vector<BlockId>{1, 4, 7});
    CHECK(occupied_blocks(w, ObjectSpec::triple_bar(), ObjectPose::absent()).empty());
    CHECK_FALSE(pose_fits(w, ObjectSpec::triple_bar(), 8, 1));
    CHECK_THROWS_AS(occupied_blocks(w, ObjectSpec::triple_bar(), ObjectPose::placed(8, 1)),
                    std::invalid_argument);
}

}  // TEST_SUITE
