#include "edgebench/metrics.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <vector>

namespace edgebench {

namespace {

void require_same_shape(const BinaryMap& a, const BinaryMap& b) {
    if (!a.same_shape(b))
        throw DimensionError("maps must share dimensions");
}

std::uint64_t count_ones(const BinaryMap& m) {
    const auto& cells = m.cells();
    const std::int64_t n = static_cast<std::int64_t>(cells.size());
    std::int64_t ones = 0;
#pragma omp parallel for reduction(+ : ones) if (n > 16384)
    for (std::int64_t i = 0; i < n; ++i)
        ones += cells[i];
    return static_cast<std::uint64_t>(ones);
}

} // namespace

ConfusionCounts confusion(const BinaryMap& detected, const BinaryMap& truth) {
    require_same_shape(detected, truth);
    const auto& e = detected.cells();
    const auto& g = truth.cells();
    const std::int64_t n = static_cast<std::int64_t>(e.size());
    std::int64_t tp = 0, tn = 0, fp = 0, fn = 0;
#pragma omp parallel for reduction(+ : tp, tn, fp, fn) if (n > 16384)
    for (std::int64_t i = 0; i < n; ++i) {
        if (e[i]) {
            if (g[i])
                ++tp;
            else
                ++fp;
        } else {
            if (g[i])
                ++fn;
            else
                ++tn;
        }
    }
    return {static_cast<std::uint64_t>(tp), static_cast<std::uint64_t>(tn),
            static_cast<std::uint64_t>(fp), static_cast<std::uint64_t>(fn)};
}

double mse(const BinaryMap& detected, const BinaryMap& truth) {
    require_same_shape(detected, truth);
    const auto& e = detected.cells();
    const auto& g = truth.cells();
    const std::int64_t n = static_cast<std::int64_t>(e.size());
    // Each term is 0 or 1, so the partial sums are integers and the
    // reduction is exact in any association order.
    double acc = 0.0;
#pragma omp parallel for reduction(+ : acc) if (n > 16384)
    for (std::int64_t i = 0; i < n; ++i) {
        const double diff = static_cast<double>(e[i]) - static_cast<double>(g[i]);
        acc += diff * diff;
    }
    return acc / static_cast<double>(n);
}

double rmse(const BinaryMap& detected, const BinaryMap& truth) {
    return std::sqrt(mse(detected, truth));
}

double psnr(const BinaryMap& detected, const BinaryMap& truth) {
    const double m = mse(detected, truth);
    if (m == 0.0)
        return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / m);
}

double ssim(const BinaryMap& detected, const BinaryMap& truth,
            const SsimParams& params) {
    require_same_shape(detected, truth);
    const auto& e = detected.cells();
    const auto& g = truth.cells();
    const std::int64_t n = static_cast<std::int64_t>(e.size());
    const int h = detected.height();
    const int w = detected.width();

    std::int64_t se = 0, sg = 0;
#pragma omp parallel for reduction(+ : se, sg) if (n > 16384)
    for (std::int64_t i = 0; i < n; ++i) {
        se += e[i];
        sg += g[i];
    }
    const double mu_e = static_cast<double>(se) / static_cast<double>(n);
    const double mu_g = static_cast<double>(sg) / static_cast<double>(n);

    // Deviation sums are accumulated per row and combined in row order,
    // which keeps the result independent of the thread count.
    std::vector<std::array<double, 3>> parts(h, {0.0, 0.0, 0.0});
#pragma omp parallel for if (n > 16384)
    for (int r = 0; r < h; ++r) {
        double ve = 0.0, vg = 0.0, veg = 0.0;
        for (int c = 0; c < w; ++c) {
            const double de = static_cast<double>(detected.at(r, c)) - mu_e;
            const double dg = static_cast<double>(truth.at(r, c)) - mu_g;
            ve += de * de;
            vg += dg * dg;
            veg += de * dg;
        }
        parts[r] = {ve, vg, veg};
    }
    double ve = 0.0, vg = 0.0, veg = 0.0;
    for (int r = 0; r < h; ++r) {
        ve += parts[r][0];
        vg += parts[r][1];
        veg += parts[r][2];
    }
    const double denom = n >= 2 ? static_cast<double>(n - 1) : 1.0;
    const double var_e = ve / denom;
    const double var_g = vg / denom;
    const double cov = veg / denom;

    if (params.c1 == 0.0 && params.c2 == 0.0 && params.c3 == 0.0 &&
        (var_e == 0.0 || var_g == 0.0))
        throw DegenerateStatsError(
            "ssim with zero constants is undefined for constant maps");

    const double sd_e = std::sqrt(var_e);
    const double sd_g = std::sqrt(var_g);

    const double l = (2.0 * mu_e * mu_g + params.c1) /
                     (mu_e * mu_e + mu_g * mu_g + params.c1);
    const double c = (2.0 * sd_e * sd_g + params.c2) /
                     (var_e + var_g + params.c2);
    const double s = (cov + params.c3) / (sd_e * sd_g + params.c3);

    auto powq = [](double base, double exponent) {
        return exponent == 1.0 ? base : std::pow(base, exponent);
    };
    return powq(l, params.alpha) * powq(c, params.beta) * powq(s, params.gamma);
}

namespace detail {

// Column pass: for every cell, squared distance to the nearest set pixel
// in its own column, or the sentinel when the column has none.
constexpr std::int64_t kNoSite = -1;

void column_distances(const BinaryMap& map, Raster<std::int64_t>& dcol2) {
    const int w = map.width();
    const int h = map.height();
#pragma omp parallel for if (w * h > 16384)
    for (int c = 0; c < w; ++c) {
        int last = -1;
        for (int r = 0; r < h; ++r) {
            if (map.at(r, c)) {
                dcol2.at(r, c) = 0;
                last = r;
            } else {
                dcol2.at(r, c) = last < 0 ? kNoSite
                                          : static_cast<std::int64_t>(r - last) *
                                                (r - last);
            }
        }
        last = -1;
        for (int r = h - 1; r >= 0; --r) {
            if (map.at(r, c)) {
                last = r;
            } else if (last >= 0) {
                const std::int64_t d =
                    static_cast<std::int64_t>(last - r) * (last - r);
                if (dcol2.at(r, c) == kNoSite || d < dcol2.at(r, c))
                    dcol2.at(r, c) = d;
            }
        }
    }
}

// Row pass: lower envelope of the parabolas j -> f(j) + (c-j)^2
// (Felzenszwalb-Huttenlocher). Envelope bookkeeping uses doubles but the
// emitted distances are integer arithmetic, so results are exact.
void row_envelope(const Raster<std::int64_t>& dcol2, Raster<std::int64_t>& out) {
    const int w = dcol2.width();
    const int h = dcol2.height();
    constexpr double kInf = std::numeric_limits<double>::infinity();

#pragma omp parallel if (w * h > 16384)
    {
        std::vector<int> v(w);
        std::vector<double> z(w + 1);
#pragma omp for
        for (int r = 0; r < h; ++r) {
            int k = -1;
            for (int q = 0; q < w; ++q) {
                const std::int64_t fq = dcol2.at(r, q);
                if (fq == kNoSite)
                    continue;
                double s = 0.0;
                while (k >= 0) {
                    const std::int64_t fp = dcol2.at(r, v[k]);
                    s = (static_cast<double>(fq - fp) +
                         (static_cast<double>(q) * q -
                          static_cast<double>(v[k]) * v[k])) /
                        (2.0 * (q - v[k]));
                    if (s <= z[k])
                        --k;
                    else
                        break;
                }
                if (k < 0) {
                    k = 0;
                    v[0] = q;
                    z[0] = -kInf;
                    z[1] = kInf;
                } else {
                    ++k;
                    v[k] = q;
                    z[k] = s;
                    z[k + 1] = kInf;
                }
            }
            int j = 0;
            for (int c = 0; c < w; ++c) {
                while (z[j + 1] < c)
                    ++j;
                const std::int64_t dc = c - v[j];
                out.at(r, c) = dc * dc + dcol2.at(r, v[j]);
            }
        }
    }
}

double fom_sum(const BinaryMap& detected, const Raster<std::int64_t>& d2,
               double alpha) {
    const int h = detected.height();
    const int w = detected.width();
    std::vector<double> parts(h, 0.0);
#pragma omp parallel for if (h * w > 16384)
    for (int r = 0; r < h; ++r) {
        double acc = 0.0;
        for (int c = 0; c < w; ++c)
            if (detected.at(r, c))
                acc += 1.0 / (1.0 + alpha * static_cast<double>(d2.at(r, c)));
        parts[r] = acc;
    }
    double total = 0.0;
    for (int r = 0; r < h; ++r)
        total += parts[r];
    return total;
}

} // namespace detail

Raster<std::int64_t> distance_transform(const BinaryMap& map) {
    if (count_ones(map) == 0)
        throw EmptyMapError("distance transform of a map with no set pixels");
    Raster<std::int64_t> dcol2(map.width(), map.height());
    Raster<std::int64_t> out(map.width(), map.height());
    detail::column_distances(map, dcol2);
    detail::row_envelope(dcol2, out);
    return out;
}

double fom(const BinaryMap& detected, const BinaryMap& truth,
           const FomParams& params) {
    require_same_shape(detected, truth);
    if (!(params.alpha > 0.0))
        throw DomainError("fom alpha must be positive");

    const std::uint64_t n_e = count_ones(detected);
    const std::uint64_t n_g = count_ones(truth);
    if (n_e == 0 && n_g == 0)
        return 1.0;
    if (n_e == 0 || n_g == 0)
        return 0.0;

    const Raster<std::int64_t> d2 = distance_transform(truth);
    const double total = detail::fom_sum(detected, d2, params.alpha);
    return total / static_cast<double>(std::max(n_e, n_g));
}

} // namespace edgebench
