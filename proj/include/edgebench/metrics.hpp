#pragma once

#include <cmath>
#include <cstdint>

#include "edgebench/raster.hpp"

namespace edgebench {

/// Per-pixel classification tallies. Edge (value 1) is the positive class.
struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;

    std::uint64_t actual_positive() const { return tp + fn; }    // P
    std::uint64_t actual_negative() const { return fp + tn; }    // N
    std::uint64_t predicted_positive() const { return tp + fp; } // P'
    std::uint64_t predicted_negative() const { return fn + tn; } // N'
    std::uint64_t total() const { return tp + tn + fp + fn; }    // T
};

/// Exponents and stabilizing constants for the structural similarity
/// index. Defaults follow the usual k1=0.01, k2=0.03 choice with dynamic
/// range 1 (binary maps) and c3 = c2/2.
struct SsimParams {
    double alpha = 1.0;
    double beta = 1.0;
    double gamma = 1.0;
    double c1 = 1e-4;
    double c2 = 9e-4;
    double c3 = 4.5e-4;

    static SsimParams zero_constants() { return {1.0, 1.0, 1.0, 0.0, 0.0, 0.0}; }
};

/// Distance-penalty scaling for the figure of merit; 1/9 is the standard
/// Pratt constant.
struct FomParams {
    double alpha = 1.0 / 9.0;
};

/// Result of psnr when the maps are identical (MSE zero): positive
/// infinity, which orders above every finite value and serializes as
/// the literal "inf".
inline bool is_perfect_psnr(double v) { return std::isinf(v) && v > 0; }

ConfusionCounts confusion(const BinaryMap& detected, const BinaryMap& truth);

/// Mean of squared per-pixel differences over {0,1} values.
double mse(const BinaryMap& detected, const BinaryMap& truth);
double rmse(const BinaryMap& detected, const BinaryMap& truth);

/// 10*log10(255^2 / MSE); +infinity when MSE is zero.
double psnr(const BinaryMap& detected, const BinaryMap& truth);

/// Global (single-window) structural similarity: whole-map means, and
/// variances/covariance with the 1/(N-1) sample convention. With all
/// stabilizing constants zero, a constant map makes the statistic
/// undefined and raises DegenerateStatsError.
double ssim(const BinaryMap& detected, const BinaryMap& truth,
            const SsimParams& params = {});

/// Exact squared Euclidean distance to the nearest set pixel, for every
/// cell. Raises EmptyMapError when the map has no set pixel.
Raster<std::int64_t> distance_transform(const BinaryMap& map);

/// Pratt's figure of merit in [0,1]. Conventions: 1 when both maps are
/// empty, 0 when exactly one is.
double fom(const BinaryMap& detected, const BinaryMap& truth,
           const FomParams& params = {});

} // namespace edgebench
