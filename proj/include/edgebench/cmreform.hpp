#pragma once

#include <string>
#include <vector>

#include "edgebench/metrics.hpp"

namespace edgebench {

// Closed forms of the pixel-difference metrics written purely in terms of
// confusion counts, valid because edge maps are binary, plus machinery to
// verify they agree with the direct computations.

/// (FP + FN) / T.
double mse_from_counts(const ConfusionCounts& cc);

/// sqrt((FP + FN) / T).
double rmse_from_counts(const ConfusionCounts& cc);

/// 10*log10(T * 255^2 / (FP + FN)); +infinity when FP + FN is zero.
double psnr_from_counts(const ConfusionCounts& cc);

/// Global SSIM at unit exponents and zero constants, rewritten over
/// counts: 4*P'*P*(T*TP - P'*P) / ((P'^2 + P^2) * (P'*(T-P') + P*(T-P))).
/// The denominator vanishes exactly when a map is constant, which raises
/// DegenerateStatsError (matching the direct route's undefined statistic).
double ssim_from_counts(const ConfusionCounts& cc);

enum class CompareStatus { pass, fail, skipped };

struct MetricComparison {
    std::string metric;
    double direct = 0.0;
    double from_counts = 0.0;
    double abs_diff = 0.0;
    double rel_diff = 0.0;
    CompareStatus status = CompareStatus::pass;
};

struct EquivalenceReport {
    std::vector<MetricComparison> rows;

    bool all_passed() const;
    /// One CSV row per metric: metric,direct,from_counts,abs_diff,rel_diff,status
    std::string to_csv() const;
};

/// Compares mse/rmse/psnr direct vs counts-based at tol_exact (absolute),
/// and zero-constant global ssim vs ssim_from_counts at tol_ssim
/// (relative). Degenerate ssim cases are reported as skipped, not failed.
EquivalenceReport verify_reformulations(const BinaryMap& detected,
                                        const BinaryMap& truth,
                                        double tol_exact = 1e-12,
                                        double tol_ssim = 1e-9);

} // namespace edgebench
