#include "edgebench/canny.hpp"

#include <algorithm>
#include <cmath>

namespace edgebench {

namespace {

// sin/cos of 22.5 degrees; the quantizer compares |gy|*cos vs |gx|*sin so
// that transposing the image swaps the 0- and 90-degree tests exactly.
constexpr double kSin225 = 0.3826834323650898;
constexpr double kCos225 = 0.9238795325112867;

inline int clamp_index(int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); }

// 1-D convolution of one line with a symmetric kernel, accumulated
// center-out as w0*x0 + sum_i wi*(x[-i] + x[+i]). The pairwise grouping
// keeps the result bit-identical under reflection of the line.
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

const std::vector<ThresholdPair>& default_threshold_chain() {
    static const std::vector<ThresholdPair> chain = {
        {50, 100}, {50, 150}, {100, 200}, {100, 300}, {200, 400}, {200, 600},
    };
    return chain;
}

std::vector<double> gaussian_kernel(double sigma) {
    if (!(sigma > 0.0))
        throw DomainError("sigma must be positive");
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> k(2 * radius + 1);
    double norm = 1.0; // center tap exp(0)
    for (int i = 1; i <= radius; ++i)
        norm += 2.0 * std::exp(-(double(i) * i) / (2.0 * sigma * sigma));
    for (int i = 0; i <= radius; ++i) {
        const double w = std::exp(-(double(i) * i) / (2.0 * sigma * sigma)) / norm;
        k[radius + i] = w;
        k[radius - i] = w;
    }
    return k;
}

RealGrid smooth(const GrayImage& image, double sigma) {
    const std::vector<double> kernel = gaussian_kernel(sigma);
    const int radius = (static_cast<int>(kernel.size()) - 1) / 2;
    const int w = image.width();
    const int h = image.height();

    RealGrid tmp(w, h);
    RealGrid out(w, h);

    const bool big = w * h > 16384;

    // Horizontal pass.
#pragma omp parallel if (big)
    {
        std::vector<double> line(w);
#pragma omp for
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c)
                line[c] = static_cast<double>(image.at(r, c));
            for (int c = 0; c < w; ++c)
                tmp.at(r, c) =
                    convolve_at(line.data(), w, c, kernel.data(), radius);
        }
    }

    // Vertical pass.
#pragma omp parallel if (big)
    {
        std::vector<double> line(h);
#pragma omp for
        for (int c = 0; c < w; ++c) {
            for (int r = 0; r < h; ++r)
                line[r] = tmp.at(r, c);
            for (int r = 0; r < h; ++r)
                out.at(r, c) =
                    convolve_at(line.data(), h, r, kernel.data(), radius);
        }
    }
    return out;
}

GradientField sobel_gradients(const RealGrid& grid) {
    const int w = grid.width();
    const int h = grid.height();
    if (w < 3 || h < 3)
        throw DimensionError("sobel gradients need a grid of at least 3x3");

    GradientField field{RealGrid(w, h), Raster<std::uint8_t>(w, h)};

#pragma omp parallel for if (w * h > 16384)
    for (int r = 0; r < h; ++r) {
        const int rm = clamp_index(r - 1, h);
        const int rp = clamp_index(r + 1, h);
        for (int c = 0; c < w; ++c) {
            const int cm = clamp_index(c - 1, w);
            const int cp = clamp_index(c + 1, w);
            const double a = grid.at(rm, cm), b = grid.at(rm, c), d = grid.at(rm, cp);
            const double e = grid.at(r, cm), f = grid.at(r, cp);
            const double g = grid.at(rp, cm), i = grid.at(rp, c), j = grid.at(rp, cp);
            // Accumulated so that mirroring rows or columns negates or
            // preserves the value exactly.
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
    const bool big = w * h > 16384;

    auto mag_or_zero = [&](int r, int c) -> double {
        return (r < 0 || r >= h || c < 0 || c >= w) ? 0.0 : mag.at(r, c);
    };

#pragma omp parallel for if (big)
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const double m = mag.at(r, c);
            double n1, n2;
            switch (field.direction.at(r, c)) {
            case 0: // horizontal gradient: compare along the row
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
            default: // 135
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

    // 0 = none, 1 = weak, 2 = strong
    Raster<std::uint8_t> state(w, h);
    std::vector<int> stack;

#pragma omp parallel for if (w * h > 16384)
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const double m = thinned.at(r, c);
            state.at(r, c) = m > t.high ? 2 : (m > t.low ? 1 : 0);
        }
    }
    for (int idx = 0; idx < w * h; ++idx)
        if (state.cells()[idx] == 2)
            stack.push_back(idx);

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
    return hysteresis(nonmax_suppress(sobel_gradients(smooth(image, sigma))), t);
}

BinaryMap mask_to_edges(const BinaryMap& mask) {
    return canny(to_gray(mask, 255), ThresholdPair(50, 100), 1.0);
}

} // namespace edgebench
