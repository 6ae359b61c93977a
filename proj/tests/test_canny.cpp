#include <doctest.h>

#include <cmath>
#include <random>

#include "edgebench/canny.hpp"

using namespace edgebench;

namespace {

template <typename T>
Raster<T> rot90(const Raster<T>& in) { // clockwise
    Raster<T> out(in.height(), in.width());
    for (int r = 0; r < in.height(); ++r)
        for (int c = 0; c < in.width(); ++c)
            out.at(c, in.height() - 1 - r) = in.at(r, c);
    return out;
}

GrayImage transpose(const GrayImage& in) {
    GrayImage out(in.height(), in.width());
    for (int r = 0; r < in.height(); ++r)
        for (int c = 0; c < in.width(); ++c)
            out.at(c, r) = in.at(r, c);
    return out;
}

RealGrid transpose(const RealGrid& in) {
    RealGrid out(in.height(), in.width());
    for (int r = 0; r < in.height(); ++r)
        for (int c = 0; c < in.width(); ++c)
            out.at(c, r) = in.at(r, c);
    return out;
}

GrayImage vertical_step(int n, std::uint16_t lo, std::uint16_t hi) {
    GrayImage img(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            img.at(r, c) = c < n / 2 ? lo : hi;
    return img;
}

bool subset(const BinaryMap& inner, const BinaryMap& outer) {
    for (std::size_t i = 0; i < inner.size(); ++i)
        if (inner.cells()[i] && !outer.cells()[i])
            return false;
    return true;
}

// Smoothed profile of a 1-D step (0 below mid, `contrast` at and above),
// evaluated with clamped borders -- an independent route to the values the
// 2-D pipeline produces on a column-constant image.
std::vector<double> step_profile(int n, double contrast, double sigma) {
    const std::vector<double> k = gaussian_kernel(sigma);
    const int radius = (static_cast<int>(k.size()) - 1) / 2;
    std::vector<double> out(n);
    for (int c = 0; c < n; ++c) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i) {
            const int j = std::clamp(c + i, 0, n - 1);
            acc += k[radius + i] * (j >= n / 2 ? contrast : 0.0);
        }
        out[c] = acc;
    }
    return out;
}

} // namespace

TEST_CASE("gaussian_kernel: shape and normalization") {
    const auto k = gaussian_kernel(1.0);
    REQUIRE(k.size() == 7); // radius ceil(3*1) = 3
    const int radius = 3;
    for (int i = 1; i <= radius; ++i)
        CHECK(k[radius + i] == k[radius - i]);

    // center weight = exp(0)/Z with Z summed directly
    double z = 0.0;
    for (int i = -3; i <= 3; ++i)
        z += std::exp(-0.5 * i * i);
    CHECK(k[radius] == doctest::Approx(1.0 / z).epsilon(1e-12));

    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const double sigma = 0.3 + 4.0 * (rng() % 1000) / 1000.0;
        const auto kk = gaussian_kernel(sigma);
        CHECK(kk.size() == 2 * static_cast<std::size_t>(std::ceil(3.0 * sigma)) + 1);
        double sum = 0.0;
        for (double w : kk)
            sum += w;
        CHECK(std::fabs(sum - 1.0) <= 1e-12);
    }

    CHECK_THROWS_AS(gaussian_kernel(0.0), DomainError);
    CHECK_THROWS_AS(gaussian_kernel(-1.0), DomainError);
}

TEST_CASE("smooth: constant image stays constant") {
    GrayImage img(10, 8, 37);
    const RealGrid out = smooth(img, 1.3);
    for (double v : out.cells())
        CHECK(v == doctest::Approx(37.0).epsilon(1e-9));
}

TEST_CASE("smooth: single bright pixel reproduces the separable kernel") {
    const int n = 17;
    GrayImage img(n, n, 0);
    img.at(8, 8) = 255;
    const RealGrid out = smooth(img, 1.0);

    const auto k = gaussian_kernel(1.0);
    const int radius = 3;
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const int dr = r - 8, dc = c - 8;
            const double expected =
                (std::abs(dr) <= radius && std::abs(dc) <= radius)
                    ? 255.0 * k[radius + dr] * k[radius + dc]
                    : 0.0;
            CHECK(out.at(r, c) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("smooth: commutes with transpose") {
    std::mt19937_64 rng(5);
    GrayImage img(13, 9);
    for (auto& px : img.cells())
        px = rng() % 256;
    const RealGrid a = transpose(smooth(img, 1.0));
    const RealGrid b = smooth(transpose(img), 1.0);
    REQUIRE(a.same_shape(b));
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(a.cells()[i] == doctest::Approx(b.cells()[i]).epsilon(1e-12));
}

TEST_CASE("sobel: constant grid has zero magnitude") {
    RealGrid grid(6, 5, 9.5);
    const GradientField f = sobel_gradients(grid);
    for (double m : f.magnitude.cells())
        CHECK(m == 0.0);
}

TEST_CASE("sobel: vertical step gives magnitude 1020 at the step columns") {
    const int n = 8;
    RealGrid grid(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            grid.at(r, c) = c < 4 ? 0.0 : 255.0;
    const GradientField f = sobel_gradients(grid);
    for (int r = 0; r < n; ++r) {
        CHECK(f.magnitude.at(r, 3) == 1020.0); // 4 * 255, by hand
        CHECK(f.magnitude.at(r, 4) == 1020.0);
        CHECK(f.direction.at(r, 3) == 0);
        CHECK(f.direction.at(r, 4) == 0);
        CHECK(f.magnitude.at(r, 1) == 0.0);
    }
}

TEST_CASE("sobel: horizontal step quantizes to 90 degrees") {
    const int n = 8;
    RealGrid grid(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            grid.at(r, c) = r < 4 ? 0.0 : 255.0;
    const GradientField f = sobel_gradients(grid);
    for (int c = 0; c < n; ++c) {
        CHECK(f.magnitude.at(3, c) == 1020.0);
        CHECK(f.direction.at(3, c) == 90);
        CHECK(f.direction.at(4, c) == 90);
    }
}

TEST_CASE("sobel: grids below 3x3 are rejected") {
    CHECK_THROWS_AS(sobel_gradients(RealGrid(2, 5)), DimensionError);
    CHECK_THROWS_AS(sobel_gradients(RealGrid(5, 2)), DimensionError);
}

TEST_CASE("nonmax_suppress: zero field stays zero") {
    GradientField f{RealGrid(6, 6), Raster<std::uint8_t>(6, 6)};
    const RealGrid out = nonmax_suppress(f);
    for (double v : out.cells())
        CHECK(v == 0.0);
}

TEST_CASE("nonmax_suppress: one-pixel ridge survives") {
    GradientField f{RealGrid(7, 5), Raster<std::uint8_t>(7, 5)};
    for (int r = 0; r < 5; ++r)
        f.magnitude.at(r, 3) = 10.0; // vertical ridge, horizontal gradient
    const RealGrid out = nonmax_suppress(f);
    for (int r = 0; r < 5; ++r) {
        CHECK(out.at(r, 3) == 10.0);
        CHECK(out.at(r, 2) == 0.0);
        CHECK(out.at(r, 4) == 0.0);
    }
}

TEST_CASE("nonmax_suppress: equal-magnitude plateau keeps both columns") {
    GradientField f{RealGrid(7, 5), Raster<std::uint8_t>(7, 5)};
    for (int r = 0; r < 5; ++r) {
        f.magnitude.at(r, 3) = 10.0;
        f.magnitude.at(r, 4) = 10.0;
    }
    const RealGrid out = nonmax_suppress(f);
    for (int r = 0; r < 5; ++r) {
        CHECK(out.at(r, 3) == 10.0); // >= rule keeps ties
        CHECK(out.at(r, 4) == 10.0);
    }
}

TEST_CASE("hysteresis: no seeds, no edges") {
    RealGrid grid(6, 6, 80.0); // all weak for (50,100)
    const BinaryMap out = hysteresis(grid, ThresholdPair(50, 100));
    for (auto b : out.cells())
        CHECK(b == 0);
}

TEST_CASE("hysteresis: weak chain linked to one strong pixel") {
    RealGrid grid(7, 3);
    grid.at(1, 1) = 150.0; // strong
    for (int c = 2; c <= 6; ++c)
        grid.at(1, c) = 70.0; // weak chain of length 5
    const BinaryMap out = hysteresis(grid, ThresholdPair(50, 100));
    // flood fill by hand: the whole row lights up, nothing else
    int ones = 0;
    for (auto b : out.cells())
        ones += b;
    CHECK(ones == 6);
    for (int c = 1; c <= 6; ++c)
        CHECK(out.at(1, c) == 1);
}

TEST_CASE("hysteresis: sub-low gap breaks the link") {
    RealGrid grid(5, 3);
    grid.at(1, 0) = 150.0; // strong
    grid.at(1, 1) = 10.0;  // below low
    grid.at(1, 2) = 70.0;  // weak, disconnected
    const BinaryMap out = hysteresis(grid, ThresholdPair(50, 100));
    CHECK(out.at(1, 0) == 1);
    CHECK(out.at(1, 1) == 0);
    CHECK(out.at(1, 2) == 0);
}

TEST_CASE("canny: constant image yields an empty map") {
    GrayImage img(12, 12, 99);
    const BinaryMap out = canny(img, ThresholdPair(50, 100), 1.0);
    for (auto b : out.cells())
        CHECK(b == 0);
}

TEST_CASE("canny: 16x16 vertical step marks exactly the step columns") {
    const GrayImage img = vertical_step(16, 0, 255);

    // Staged oracle: the image is constant along rows, so the pipeline
    // reduces to the 1-D smoothed profile; the Sobel row sums contribute
    // a factor 4 and the two center columns tie by mirror symmetry.
    const auto s = step_profile(16, 255.0, 1.0);
    const double center_mag = 4.0 * (s[8] - s[6]);
    const double shoulder_mag = 4.0 * (s[7] - s[5]);
    REQUIRE(center_mag > 100.0);          // strong at (50,100)
    REQUIRE(shoulder_mag < center_mag);   // shoulders suppressed by NMS

    const BinaryMap out = canny(img, ThresholdPair(50, 100), 1.0);
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c)
            CHECK(out.at(r, c) == ((c == 7 || c == 8) ? 1 : 0));
}

TEST_CASE("canny: thresholds above the magnitude bound yield empty maps") {
    // Sobel magnitude of a 255 step is at most 1020*sqrt(2) < 2000.
    const GrayImage img = vertical_step(16, 0, 255);
    const BinaryMap out = canny(img, ThresholdPair(2000, 3000), 1.0);
    for (auto b : out.cells())
        CHECK(b == 0);
}

TEST_CASE("canny: images below 3x3 are rejected") {
    CHECK_THROWS_AS(canny(GrayImage(2, 8), ThresholdPair(50, 100), 1.0),
                    DimensionError);
}

TEST_CASE("canny: threshold chain produces nested edge maps") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 6; ++trial) {
        GrayImage img(40, 40);
        for (auto& px : img.cells())
            px = rng() % 256;
        BinaryMap prev = canny(img, default_threshold_chain()[0], 1.0);
        for (std::size_t i = 1; i < default_threshold_chain().size(); ++i) {
            const BinaryMap next = canny(img, default_threshold_chain()[i], 1.0);
            CHECK(subset(next, prev));
            prev = next;
        }
    }
}

TEST_CASE("canny: rotating the input rotates the output") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 16 + static_cast<int>(rng() % 32);
        GrayImage img(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                switch (trial % 3) {
                case 0:
                    img.at(r, c) = rng() % 256;
                    break;
                case 1: // blocky plateaus with exact ties
                    img.at(r, c) = ((r / 4 + c / 4) % 2) ? 200 : 30;
                    break;
                default:
                    img.at(r, c) = c < n / 2 ? 10 : 240;
                }
            }
        const ThresholdPair t(50, 100);
        CHECK(rot90(canny(img, t, 1.0)) == canny(rot90(img), t, 1.0));
    }
}

TEST_CASE("canny: deterministic") {
    std::mt19937_64 rng(71);
    GrayImage img(24, 24);
    for (auto& px : img.cells())
        px = rng() % 256;
    const ThresholdPair t(50, 150);
    CHECK(canny(img, t, 1.0) == canny(img, t, 1.0));
}

TEST_CASE("canny: every edge pixel has post-NMS magnitude above low") {
    std::mt19937_64 rng(42);
    GrayImage img(32, 32);
    for (auto& px : img.cells())
        px = rng() % 256;
    const ThresholdPair t(50, 100);
    const RealGrid thinned = nonmax_suppress(sobel_gradients(smooth(img, 1.0)));
    const BinaryMap edges = canny(img, t, 1.0);
    for (int r = 0; r < 32; ++r)
        for (int c = 0; c < 32; ++c)
            if (edges.at(r, c))
                CHECK(thinned.at(r, c) > t.low);
}

TEST_CASE("mask_to_edges: all-land mask is empty") {
    BinaryMap mask(12, 12); // all zero
    const BinaryMap edges = mask_to_edges(mask);
    for (auto b : edges.cells())
        CHECK(b == 0);
}

TEST_CASE("mask_to_edges: vertical half-plane boundary gives one line") {
    const int n = 16;
    BinaryMap mask(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = n / 2; c < n; ++c)
            mask.at(r, c) = 1;
    const BinaryMap edges = mask_to_edges(mask);
    // same configuration as the 255-step image: the tied center columns
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            CHECK(edges.at(r, c) == ((c == 7 || c == 8) ? 1 : 0));
}

TEST_CASE("mask_to_edges: edges stay within one pixel of a transition") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        BinaryMap mask(16, 16);
        for (auto& b : mask.cells())
            b = rng() % 2;
        const BinaryMap edges = mask_to_edges(mask);
        for (int r = 0; r < 16; ++r) {
            for (int c = 0; c < 16; ++c) {
                if (!edges.at(r, c))
                    continue;
                // some 0/1 transition within a chebyshev-1 neighborhood
                bool near_transition = false;
                for (int dr = -1; dr <= 1 && !near_transition; ++dr) {
                    for (int dc = -1; dc <= 1 && !near_transition; ++dc) {
                        const int rr = r + dr, cc = c + dc;
                        if (rr < 0 || rr >= 16 || cc < 0 || cc >= 16)
                            continue;
                        // transition: this neighbor differs from some
                        // 4-neighbor of its own
                        const int v = mask.at(rr, cc);
                        const int offs[4][2] = {{0, 1}, {0, -1}, {1, 0}, {-1, 0}};
                        for (const auto& o : offs) {
                            const int r2 = rr + o[0], c2 = cc + o[1];
                            if (r2 < 0 || r2 >= 16 || c2 < 0 || c2 >= 16)
                                continue;
                            if (mask.at(r2, c2) != v)
                                near_transition = true;
                        }
                    }
                }
                CHECK(near_transition);
            }
        }
    }
}

TEST_CASE("threshold pair: bounds are validated") {
    CHECK_THROWS_AS(ThresholdPair(0, 100), DomainError);
    CHECK_THROWS_AS(ThresholdPair(100, 100), DomainError);
    CHECK_THROWS_AS(ThresholdPair(150, 100), DomainError);
    CHECK_THROWS_AS(ThresholdPair(-5, 100), DomainError);
}

TEST_CASE("default threshold chain matches the swept pairs") {
    const auto& chain = default_threshold_chain();
    REQUIRE(chain.size() == 6);
    CHECK(chain[0].low == 50);
    CHECK(chain[0].high == 100);
    CHECK(chain[5].low == 200);
    CHECK(chain[5].high == 600);
    for (std::size_t i = 1; i < chain.size(); ++i) {
        CHECK(chain[i].low >= chain[i - 1].low);
        CHECK(chain[i].high >= chain[i - 1].high);
    }
}
