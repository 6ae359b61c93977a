#include "edgebench/cmreform.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace edgebench {

namespace {

void require_nonzero_total(const ConfusionCounts& cc) {
    if (cc.total() == 0)
        throw DomainError("confusion counts with zero total");
}

const char* status_name(CompareStatus s) {
    switch (s) {
    case CompareStatus::pass:
        return "pass";
    case CompareStatus::fail:
        return "fail";
    default:
        return "skipped";
    }
}

std::string number(double v) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

MetricComparison compare_abs(const char* name, double direct, double counts,
                             double tol) {
    MetricComparison row;
    row.metric = name;
    row.direct = direct;
    row.from_counts = counts;
    if (std::isinf(direct) && std::isinf(counts) && direct == counts) {
        row.abs_diff = 0.0;
        row.rel_diff = 0.0;
        row.status = CompareStatus::pass;
        return row;
    }
    row.abs_diff = std::fabs(direct - counts);
    const double mag = std::max(std::fabs(direct), std::fabs(counts));
    row.rel_diff = mag > 0.0 ? row.abs_diff / mag : 0.0;
    row.status = row.abs_diff <= tol ? CompareStatus::pass : CompareStatus::fail;
    return row;
}

} // namespace

double mse_from_counts(const ConfusionCounts& cc) {
    require_nonzero_total(cc);
    return static_cast<double>(cc.fp + cc.fn) / static_cast<double>(cc.total());
}

double rmse_from_counts(const ConfusionCounts& cc) {
    return std::sqrt(mse_from_counts(cc));
}

double psnr_from_counts(const ConfusionCounts& cc) {
    require_nonzero_total(cc);
    const std::uint64_t wrong = cc.fp + cc.fn;
    if (wrong == 0)
        return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(static_cast<double>(cc.total()) * 255.0 * 255.0 /
                             static_cast<double>(wrong));
}

double ssim_from_counts(const ConfusionCounts& cc) {
    require_nonzero_total(cc);
    const double t = static_cast<double>(cc.total());
    const double pp = static_cast<double>(cc.predicted_positive()); // P'
    const double p = static_cast<double>(cc.actual_positive());     // P
    if (pp == 0.0 || pp == t || p == 0.0 || p == t)
        throw DegenerateStatsError(
            "counts describe a constant map; ssim closed form is undefined");
    const double num =
        4.0 * pp * p * (t * static_cast<double>(cc.tp) - pp * p);
    const double den = (pp * pp + p * p) *
                       (pp * (t - pp) + p * (t - p));
    return num / den;
}

bool EquivalenceReport::all_passed() const {
    return std::all_of(rows.begin(), rows.end(), [](const MetricComparison& r) {
        return r.status != CompareStatus::fail;
    });
}

std::string EquivalenceReport::to_csv() const {
    std::string out = "metric,direct,from_counts,abs_diff,rel_diff,status\n";
    for (const MetricComparison& r : rows) {
        out += r.metric;
        out += ',';
        out += number(r.direct);
        out += ',';
        out += number(r.from_counts);
        out += ',';
        out += number(r.abs_diff);
        out += ',';
        out += number(r.rel_diff);
        out += ',';
        out += status_name(r.status);
        out += '\n';
    }
    return out;
}

EquivalenceReport verify_reformulations(const BinaryMap& detected,
                                        const BinaryMap& truth,
                                        double tol_exact, double tol_ssim) {
    const ConfusionCounts cc = confusion(detected, truth);

    EquivalenceReport report;
    report.rows.push_back(
        compare_abs("mse", mse(detected, truth), mse_from_counts(cc), tol_exact));
    report.rows.push_back(compare_abs("rmse", rmse(detected, truth),
                                      rmse_from_counts(cc), tol_exact));
    report.rows.push_back(compare_abs("psnr", psnr(detected, truth),
                                      psnr_from_counts(cc), tol_exact));

    MetricComparison srow;
    srow.metric = "ssim";
    const std::uint64_t t = cc.total();
    const std::uint64_t pp = cc.predicted_positive();
    const std::uint64_t p = cc.actual_positive();
    if (pp == 0 || pp == t || p == 0 || p == t) {
        srow.direct = std::numeric_limits<double>::quiet_NaN();
        srow.from_counts = std::numeric_limits<double>::quiet_NaN();
        srow.status = CompareStatus::skipped;
    } else {
        srow.direct = ssim(detected, truth, SsimParams::zero_constants());
        srow.from_counts = ssim_from_counts(cc);
        srow.abs_diff = std::fabs(srow.direct - srow.from_counts);
        const double mag =
            std::max(std::fabs(srow.direct), std::fabs(srow.from_counts));
        srow.rel_diff = mag > 0.0 ? srow.abs_diff / mag : 0.0;
        srow.status =
            srow.rel_diff <= tol_ssim ? CompareStatus::pass : CompareStatus::fail;
    }
    report.rows.push_back(srow);
    return report;
}

} // namespace edgebench
