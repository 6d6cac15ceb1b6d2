#include <doctest.h>

#include <string>
#include <vector>

#include "scout/render.hpp"
#include "scout/rng.hpp"

using namespace scout;

TEST_SUITE("render") {

TEST_CASE("golden frame for a handmade belief") {
    const GridWorld world(4, 4);
    const std::vector<double> probs = {
        0.00, 0.05, 0.05, 0.00,  //
        0.10, 0.40, 0.20, 0.00,  //
        0.00, 0.10, 0.05, 0.00,  //
        0.00, 0.00, 0.05, 0.00,  //
    };
    CHECK(ascii_heatmap(world, probs) ==
          " -- \n"
          "#@% \n"
          " #- \n"
          "  - \n");
}

TEST_CASE("zero weight renders blank and a lone peak renders full") {
    const GridWorld world(2, 3);
    const std::vector<double> zeros(6, 0.0);
    CHECK(ascii_heatmap(world, zeros) == "   \n   \n");

    std::vector<double> peak(6, 0.0);
    peak[4] = 0.7;
    CHECK(ascii_heatmap(world, peak) == "   \n @ \n");
}

TEST_CASE("a uniform belief shades every block alike at mid ramp") {
    const GridWorld world(3, 3);
    const std::vector<double> uniform(9, 1.0 / 9.0);
    CHECK(ascii_heatmap(world, uniform) == "+++\n+++\n+++\n");
}

TEST_CASE("shading depends only on the ordering of the weights") {
    const GridWorld world(3, 4);
    Rng rng(417);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> probs(12);
        for (double& p : probs) {
            p = rng.uniform_int(4) == 0 ? 0.0 : rng.uniform01();
        }
        std::vector<double> scaled = probs;
        for (double& p : scaled) p *= 37.5;
        CHECK(ascii_heatmap(world, probs) == ascii_heatmap(world, scaled));
    }
}

TEST_CASE("larger weights never render dimmer") {
    const GridWorld world(4, 4);
    Rng rng(802);
    const std::string ramp(kHeatRamp);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> probs(16);
        for (double& p : probs) p = rng.uniform01();
        const std::string frame = ascii_heatmap(world, probs);
        for (int i = 0; i < 16; ++i) {
            for (int j = 0; j < 16; ++j) {
                if (probs[i] >= probs[j]) continue;
                const char ci = frame[static_cast<std::size_t>(i + i / 4)];
                const char cj = frame[static_cast<std::size_t>(j + j / 4)];
                CHECK(ramp.find(ci) <= ramp.find(cj));
            }
        }
    }
}

TEST_CASE("bad inputs are rejected") {
    const GridWorld world(2, 2);
    const std::vector<double> short_probs(3, 0.1);
    CHECK_THROWS_AS(static_cast<void>(ascii_heatmap(world, short_probs)), std::invalid_argument);
    const std::vector<double> negative = {0.5, -0.1, 0.3, 0.3};
    CHECK_THROWS_AS(static_cast<void>(ascii_heatmap(world, negative)), std::invalid_argument);
    const std::vector<double> nan_probs = {0.5, std::nan(""), 0.3, 0.3};
    CHECK_THROWS_AS(static_cast<void>(ascii_heatmap(world, nan_probs)), std::invalid_argument);
}

}  // TEST_SUITE
