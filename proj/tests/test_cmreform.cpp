#include <doctest.h>

#include <cmath>
#include <random>

#include "edgebench/cmreform.hpp"

using namespace edgebench;

namespace {

BinaryMap from_bits(int w, int h, std::initializer_list<int> bits) {
    BinaryMap m(w, h);
    std::size_t i = 0;
    for (int b : bits)
        m.cells()[i++] = static_cast<std::uint8_t>(b);
    return m;
}

const BinaryMap kE = from_bits(2, 2, {1, 0, 0, 0});
const BinaryMap kG = from_bits(2, 2, {1, 1, 0, 0});
const ConfusionCounts kWorked{1, 2, 0, 1}; // tp,tn,fp,fn of the pair above

bool map_is_constant(const BinaryMap& m) {
    for (auto b : m.cells())
        if (b != m.cells()[0])
            return false;
    return true;
}

} // namespace

TEST_CASE("mse_from_counts") {
    CHECK(mse_from_counts({4, 6, 0, 0}) == 0.0);
    CHECK(mse_from_counts(kWorked) == 0.25);
    CHECK(mse_from_counts({0, 0, 3, 1}) == 1.0); // every pixel wrong
    CHECK_THROWS_AS(mse_from_counts({0, 0, 0, 0}), DomainError);
}

TEST_CASE("rmse_from_counts") {
    CHECK(rmse_from_counts({4, 6, 0, 0}) == 0.0);
    CHECK(rmse_from_counts(kWorked) == 0.5);
    CHECK(rmse_from_counts({0, 0, 3, 1}) == 1.0);
}

TEST_CASE("psnr_from_counts") {
    CHECK(is_perfect_psnr(psnr_from_counts({4, 6, 0, 0})));
    CHECK(psnr_from_counts(kWorked) ==
          doctest::Approx(10.0 * std::log10(4.0 * 65025.0)).epsilon(1e-12));
    CHECK(psnr_from_counts({0, 0, 3, 1}) ==
          doctest::Approx(10.0 * std::log10(65025.0)).epsilon(1e-12));
    CHECK(psnr_from_counts(kWorked) == doctest::Approx(54.152).epsilon(1e-4));
}

TEST_CASE("ssim_from_counts: worked value and identity") {
    // P'=1, P=2, T=4: 4*1*2*(4*1-2) / ((1+4)*(1*3+2*2)) = 16/35
    CHECK(ssim_from_counts(kWorked) == 16.0 / 35.0);

    // detected == truth: the closed form collapses to 1 exactly
    for (std::uint64_t p = 1; p < 30; ++p) {
        const ConfusionCounts same{p, 30 - p, 0, 0};
        CHECK(ssim_from_counts(same) == 1.0);
    }
}

TEST_CASE("ssim_from_counts: degenerate counts raise") {
    CHECK_THROWS_AS(ssim_from_counts({0, 4, 0, 0}), DegenerateStatsError);
    CHECK_THROWS_AS(ssim_from_counts({4, 0, 0, 0}), DegenerateStatsError);
    CHECK_THROWS_AS(ssim_from_counts({0, 2, 0, 2}), DegenerateStatsError);
    CHECK_THROWS_AS(ssim_from_counts({0, 2, 2, 0}), DegenerateStatsError);
    CHECK_THROWS_AS(ssim_from_counts({0, 0, 0, 0}), DomainError);
}

TEST_CASE("verify_reformulations: identical non-constant maps") {
    const EquivalenceReport report = verify_reformulations(kG, kG);
    REQUIRE(report.rows.size() == 4);
    CHECK(report.all_passed());
    for (const MetricComparison& row : report.rows)
        CHECK(row.status == CompareStatus::pass);
    const MetricComparison& srow = report.rows.back();
    CHECK(srow.metric == "ssim");
    CHECK(srow.direct == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(srow.from_counts == 1.0);
}

TEST_CASE("verify_reformulations: the worked 2x2 pair") {
    const EquivalenceReport report = verify_reformulations(kE, kG, 1e-12, 1e-9);
    CHECK(report.all_passed());
    for (const MetricComparison& row : report.rows) {
        if (row.metric == "ssim")
            CHECK(row.rel_diff <= 1e-9);
        else
            CHECK(row.abs_diff <= 1e-12);
    }
}

TEST_CASE("verify_reformulations: constant maps skip ssim") {
    const BinaryMap a(3, 3); // all zeros
    const BinaryMap b(3, 3);
    const EquivalenceReport report = verify_reformulations(a, b);
    CHECK(report.all_passed()); // skipped is not failed
    CHECK(report.rows[0].abs_diff == 0.0);
    bool saw_skip = false;
    for (const MetricComparison& row : report.rows)
        if (row.metric == "ssim") {
            CHECK(row.status == CompareStatus::skipped);
            saw_skip = true;
        }
    CHECK(saw_skip);
}

TEST_CASE("reformulations agree exhaustively on 2x2 maps") {
    for (int eb = 0; eb < 16; ++eb) {
        for (int gb = 0; gb < 16; ++gb) {
            BinaryMap e(2, 2), g(2, 2);
            for (int i = 0; i < 4; ++i) {
                e.cells()[i] = (eb >> i) & 1;
                g.cells()[i] = (gb >> i) & 1;
            }
            const ConfusionCounts cc = confusion(e, g);
            CHECK(std::fabs(mse(e, g) - mse_from_counts(cc)) <= 1e-12);
            CHECK(std::fabs(rmse(e, g) - rmse_from_counts(cc)) <= 1e-12);
            const double pd = psnr(e, g);
            const double pc = psnr_from_counts(cc);
            if (is_perfect_psnr(pd) || is_perfect_psnr(pc))
                CHECK(pd == pc);
            else
                CHECK(std::fabs(pd - pc) <= 1e-9);
        }
    }
}

TEST_CASE("reformulations agree on random 32x32 maps") {
    std::mt19937_64 rng(999);
    for (int trial = 0; trial < 100; ++trial) {
        BinaryMap e(32, 32), g(32, 32);
        const double de = 0.05 + 0.9 * (rng() % 100) / 100.0;
        const double dg = 0.05 + 0.9 * (rng() % 100) / 100.0;
        for (auto& b : e.cells())
            b = ((rng() % 1000) / 1000.0) < de ? 1 : 0;
        for (auto& b : g.cells())
            b = ((rng() % 1000) / 1000.0) < dg ? 1 : 0;

        const ConfusionCounts cc = confusion(e, g);
        CHECK(std::fabs(mse(e, g) - mse_from_counts(cc)) <= 1e-12);
        CHECK(std::fabs(rmse(e, g) - rmse_from_counts(cc)) <= 1e-12);
        const double pd = psnr(e, g);
        const double pc = psnr_from_counts(cc);
        if (is_perfect_psnr(pd) || is_perfect_psnr(pc))
            CHECK(pd == pc);
        else
            CHECK(std::fabs(pd - pc) <= 1e-9);

        if (!map_is_constant(e) && !map_is_constant(g)) {
            const double sd = ssim(e, g, SsimParams::zero_constants());
            const double sc = ssim_from_counts(cc);
            const double mag = std::max(std::fabs(sd), std::fabs(sc));
            CHECK(std::fabs(sd - sc) <= 1e-9 * std::max(mag, 1e-30));
        }
    }
}

TEST_CASE("ssim approximation gap vanishes as constants shrink") {
    // With nonzero constants the counts form is only approximate; the gap
    // must contract as the constants go to zero.
    const BinaryMap e = from_bits(2, 2, {1, 0, 0, 0});
    const BinaryMap g = from_bits(2, 2, {1, 1, 0, 0});
    const double target = ssim_from_counts(confusion(e, g));
    double prev_gap = std::numeric_limits<double>::infinity();
    for (double scale : {1.0, 1e-2, 1e-4, 1e-6}) {
        SsimParams p;
        p.c1 = 1e-4 * scale;
        p.c2 = 9e-4 * scale;
        p.c3 = p.c2 / 2.0;
        const double gap = std::fabs(ssim(e, g, p) - target);
        CHECK(gap <= prev_gap + 1e-15);
        prev_gap = gap;
    }
    CHECK(prev_gap <= 1e-6);
}

TEST_CASE("equivalence report serializes one csv row per metric") {
    const std::string csv = verify_reformulations(kE, kG).to_csv();
    CHECK(csv.find("metric,direct,from_counts,abs_diff,rel_diff,status\n") == 0);
    CHECK(csv.find("\nmse,") != std::string::npos);
    CHECK(csv.find("\nrmse,") != std::string::npos);
    CHECK(csv.find("\npsnr,") != std::string::npos);
    CHECK(csv.find("\nssim,") != std::string::npos);
    CHECK(csv.find(",pass") != std::string::npos);

    // perfect psnr serializes as the literal "inf"
    const std::string perfect = verify_reformulations(kG, kG).to_csv();
    CHECK(perfect.find("psnr,inf,inf,0,0,pass") != std::string::npos);
}
