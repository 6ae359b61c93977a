#include "edgebench/serial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace edgebench::serial {

namespace {

constexpr double kSin225 = 0.3826834323650898;
constexpr double kCos225 = 0.9238795325112867;

inline int clamp_index(int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); }

inline double convolve_at(const double* line, int n, int pos,
                          const double* k, int radius) {
    double acc = k[radius] * line[pos];
    for (int i = 1; i <= radius; ++i) {
        const double left = line[clamp_index(pos - i, n)];
        const double right = line[clamp_index(pos + i, n)];
        acc += k[radius + i] * (left + right);
    }
    return acc;
}

std::uint8_t quantize_direction(double gx, double gy) {
    const double ax = std::fabs(gx);
    const double ay = std::fabs(gy);
    if (ay * kCos225 < ax * kSin225)
        return 0;
    if (ax * kCos225 < ay * kSin225)
        return 90;
    return ((gx >= 0.0) == (gy >= 0.0)) ? 45 : 135;
}

} // namespace

RealGrid smooth(const GrayImage& image, double sigma) {
    const std::vector<double> kernel = gaussian_kernel(sigma);
    const int radius = (static_cast<int>(kernel.size()) - 1) / 2;
    const int w = image.width();
    const int h = image.height();

    RealGrid tmp(w, h);
    RealGrid out(w, h);
    std::vector<double> line(std::max(w, h));

    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c)
            line[c] = static_cast<double>(image.at(r, c));
        for (int c = 0; c < w; ++c)
            tmp.at(r, c) = convolve_at(line.data(), w, c, kernel.data(), radius);
    }
    for (int c = 0; c < w; ++c) {
        for (int r = 0; r < h; ++r)
            line[r] = tmp.at(r, c);
        for (int r = 0; r < h; ++r)
            out.at(r, c) = convolve_at(line.data(), h, r, kernel.data(), radius);
    }
    return out;
}

GradientField sobel_gradients(const RealGrid& grid) {
    const int w = grid.width();
    const int h = grid.height();
    if (w < 3 || h < 3)
        throw DimensionError("sobel gradients need a grid of at least 3x3");

    GradientField field{RealGrid(w, h), Raster<std::uint8_t>(w, h)};

    for (int r = 0; r < h; ++r) {
        const int rm = clamp_index(r - 1, h);
        const int rp = clamp_index(r + 1, h);
        for (int c = 0; c < w; ++c) {
            const int cm = clamp_index(c - 1, w);
            const int cp = clamp_index(c + 1, w);
            const double a = grid.at(rm, cm), b = grid.at(rm, c), d = grid.at(rm, cp);
            const double e = grid.at(r, cm), f = grid.at(r, cp);
            const double g = grid.at(rp, cm), i = grid.at(rp, c), j = grid.at(rp, cp);
            const double gx = ((d - a) + (j - g)) + 2.0 * (f - e);
            const double gy = ((g - a) + (j - d)) + 2.0 * (i - b);
            field.magnitude.at(r, c) = std::sqrt(gx * gx + gy * gy);
            field.direction.at(r, c) = quantize_direction(gx, gy);
        }
    }
    return field;
}

RealGrid nonmax_suppress(const GradientField& field) {
    const RealGrid& mag = field.magnitude;
    const int w = mag.width();
    const int h = mag.height();
    if (!mag.same_shape(field.direction))
        throw DimensionError("gradient field grids disagree in shape");

    RealGrid out(w, h);
    auto mag_or_zero = [&](int r, int c) -> double {
        return (r < 0 || r >= h || c < 0 || c >= w) ? 0.0 : mag.at(r, c);
    };

    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const double m = mag.at(r, c);
            double n1, n2;
            switch (field.direction.at(r, c)) {
            case 0:
                n1 = mag_or_zero(r, c - 1);
                n2 = mag_or_zero(r, c + 1);
                break;
            case 90:
                n1 = mag_or_zero(r - 1, c);
                n2 = mag_or_zero(r + 1, c);
                break;
            case 45:
                n1 = mag_or_zero(r - 1, c - 1);
                n2 = mag_or_zero(r + 1, c + 1);
                break;
            default:
                n1 = mag_or_zero(r - 1, c + 1);
                n2 = mag_or_zero(r + 1, c - 1);
                break;
            }
            // Plateaus of mathematically equal magnitude must survive in
            // every orientation, so the comparison tolerates the rounding
            // noise separable smoothing leaves between mirror positions.
            const double slack = 1.0 - 1e-9;
            out.at(r, c) = (m >= n1 * slack && m >= n2 * slack) ? m : 0.0;
        }
    }
    return out;
}

BinaryMap hysteresis(const RealGrid& thinned, const ThresholdPair& t) {
    const int w = thinned.width();
    const int h = thinned.height();

    Raster<std::uint8_t> state(w, h);
    std::vector<int> stack;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const double m = thinned.at(r, c);
            const std::uint8_t s = m > t.high ? 2 : (m > t.low ? 1 : 0);
            state.at(r, c) = s;
            if (s == 2)
                stack.push_back(r * w + c);
        }
    }

    while (!stack.empty()) {
        const int idx = stack.back();
        stack.pop_back();
        const int r = idx / w;
        const int c = idx % w;
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                const int nr = r + dr;
                const int nc = c + dc;
                if (nr < 0 || nr >= h || nc < 0 || nc >= w)
                    continue;
                if (state.at(nr, nc) == 1) {
                    state.at(nr, nc) = 2;
                    stack.push_back(nr * w + nc);
                }
            }
        }
    }

    BinaryMap out(w, h);
    for (std::size_t i = 0; i < out.size(); ++i)
        out.cells()[i] = state.cells()[i] == 2 ? 1 : 0;
    return out;
}

BinaryMap canny(const GrayImage& image, const ThresholdPair& t, double sigma) {
    if (image.width() < 3 || image.height() < 3)
        throw DimensionError("canny needs an image of at least 3x3");
    return serial::hysteresis(
        serial::nonmax_suppress(serial::sobel_gradients(serial::smooth(image, sigma))),
        t);
}

Raster<std::int64_t> distance_transform(const BinaryMap& map) {
    const int w = map.width();
    const int h = map.height();
    constexpr std::int64_t kNoSite = -1;
    constexpr double kInf = std::numeric_limits<double>::infinity();

    bool any = false;
    for (std::uint8_t b : map.cells())
        any = any || b;
    if (!any)
        throw EmptyMapError("distance transform of a map with no set pixels");

    Raster<std::int64_t> dcol2(w, h);
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

    Raster<std::int64_t> out(w, h);
    std::vector<int> v(w);
    std::vector<double> z(w + 1);
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
                     (static_cast<double>(q) * q - static_cast<double>(v[k]) * v[k])) /
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
    return out;
}

double fom(const BinaryMap& detected, const BinaryMap& truth,
           const FomParams& params) {
    if (!detected.same_shape(truth))
        throw DimensionError("maps must share dimensions");
    if (!(params.alpha > 0.0))
        throw DomainError("fom alpha must be positive");

    std::uint64_t n_e = 0, n_g = 0;
    for (std::uint8_t b : detected.cells())
        n_e += b;
    for (std::uint8_t b : truth.cells())
        n_g += b;
    if (n_e == 0 && n_g == 0)
        return 1.0;
    if (n_e == 0 || n_g == 0)
        return 0.0;

    const Raster<std::int64_t> d2 = serial::distance_transform(truth);
    double total = 0.0;
    for (int r = 0; r < detected.height(); ++r) {
        double acc = 0.0;
        for (int c = 0; c < detected.width(); ++c)
            if (detected.at(r, c))
                acc += 1.0 / (1.0 + params.alpha * static_cast<double>(d2.at(r, c)));
        total += acc;
    }
    return total / static_cast<double>(std::max(n_e, n_g));
}

} // namespace edgebench::serial
