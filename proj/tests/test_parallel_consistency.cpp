#include <doctest.h>

#include <random>

#include "edgebench/serial.hpp"

// The OpenMP kernels and the serial references must agree bit for bit:
// every per-pixel computation is identical and every floating reduction
// is combined in a fixed order.

using namespace edgebench;

namespace {

GrayImage random_image(std::mt19937_64& rng, int w, int h) {
    GrayImage img(w, h);
    for (auto& px : img.cells())
        px = rng() % 256;
    return img;
}

BinaryMap random_map(std::mt19937_64& rng, int w, int h, double density) {
    BinaryMap m(w, h);
    bool any = false;
    for (auto& b : m.cells()) {
        b = ((rng() % 1000) / 1000.0) < density ? 1 : 0;
        any = any || b;
    }
    if (!any)
        m.at(static_cast<int>(rng() % h), static_cast<int>(rng() % w)) = 1;
    return m;
}

const std::pair<int, int> kShapes[] = {{3, 3}, {5, 3}, {3, 7}, {17, 11},
                                       {32, 32}, {41, 23}};

} // namespace

TEST_CASE("smooth matches the serial reference exactly") {
    std::mt19937_64 rng(101);
    for (auto [w, h] : kShapes) {
        const GrayImage img = random_image(rng, w, h);
        for (double sigma : {0.6, 1.0, 2.2})
            CHECK(smooth(img, sigma) == serial::smooth(img, sigma));
    }
}

TEST_CASE("sobel_gradients matches the serial reference exactly") {
    std::mt19937_64 rng(103);
    for (auto [w, h] : kShapes) {
        const RealGrid grid = smooth(random_image(rng, w, h), 1.0);
        const GradientField a = sobel_gradients(grid);
        const GradientField b = serial::sobel_gradients(grid);
        CHECK(a.magnitude == b.magnitude);
        CHECK(a.direction == b.direction);
    }
}

TEST_CASE("nonmax_suppress matches the serial reference exactly") {
    std::mt19937_64 rng(107);
    for (auto [w, h] : kShapes) {
        const GradientField f =
            sobel_gradients(smooth(random_image(rng, w, h), 1.0));
        CHECK(nonmax_suppress(f) == serial::nonmax_suppress(f));
    }
}

TEST_CASE("hysteresis matches the serial reference exactly") {
    std::mt19937_64 rng(109);
    for (auto [w, h] : kShapes) {
        RealGrid grid(w, h);
        for (auto& v : grid.cells())
            v = static_cast<double>(rng() % 200);
        const ThresholdPair t(50, 120);
        CHECK(hysteresis(grid, t) == serial::hysteresis(grid, t));
    }
}

TEST_CASE("canny matches the serial reference exactly") {
    std::mt19937_64 rng(113);
    for (auto [w, h] : kShapes) {
        const GrayImage img = random_image(rng, w, h);
        for (const ThresholdPair& t : default_threshold_chain())
            CHECK(canny(img, t, 1.0) == serial::canny(img, t, 1.0));
    }
}

TEST_CASE("distance_transform matches the serial reference exactly") {
    std::mt19937_64 rng(127);
    for (auto [w, h] : kShapes) {
        const BinaryMap m = random_map(rng, w, h, 0.1);
        CHECK(distance_transform(m) == serial::distance_transform(m));
    }
}

TEST_CASE("fom matches the serial reference exactly") {
    std::mt19937_64 rng(131);
    for (auto [w, h] : kShapes) {
        const BinaryMap e = random_map(rng, w, h, 0.15);
        const BinaryMap g = random_map(rng, w, h, 0.2);
        CHECK(fom(e, g) == serial::fom(e, g));
    }
}
