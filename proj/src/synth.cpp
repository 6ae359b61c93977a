#include "edgebench/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "edgebench/metrics.hpp"

namespace edgebench {

namespace {

// splitmix64, the usual seed-mixing step function.
struct SplitMix64 {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

// Derives an independent stream from a base seed; used to give the mask
// curve, the noise field and the clutter placement their own sequences.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
    SplitMix64 sm{base + 0x9E3779B97F4A7C15ull * (stream + 1)};
    return sm.next();
}

// Deterministic generator with hand-rolled distributions so outputs are
// identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : sm_{seed} {}

    double uniform01() { // in [0, 1)
        return static_cast<double>(sm_.next() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    int uniform_int(int lo, int hi) { // inclusive bounds
        return lo + static_cast<int>(sm_.next() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    bool coin() { return (sm_.next() & 1) != 0; }

    double normal() { // Box-Muller
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = static_cast<double>((sm_.next() >> 11) + 1) * 0x1.0p-53;
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    int pick_weighted(const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights)
            total += w;
        double x = uniform01() * total;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            x -= weights[i];
            if (x < 0.0)
                return static_cast<int>(i);
        }
        return static_cast<int>(weights.size()) - 1;
    }

private:
    SplitMix64 sm_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

void validate_spec(const SceneSpec& spec) {
    if (spec.width < 16 || spec.height < 16)
        throw DomainError("scene dimensions must be at least 16x16");
    if (spec.land_level == spec.water_level)
        throw DomainError("land and water levels must differ");
    if (spec.land_level < 0 || spec.land_level > 255 || spec.water_level < 0 ||
        spec.water_level > 255)
        throw DomainError("levels must lie in 0..255");
    if (spec.noise_sigma < 0.0 || spec.boundary_amplitude < 0.0 ||
        spec.n_noise_edges < 0)
        throw DomainError("noise parameters must be non-negative");
}

// Shoreline row as a function of column: a horizontal baseline at half
// height displaced by three random-phase sinusoids. Frequencies are kept
// low so the rasterized boundary stays close to axis-aligned, which keeps
// the gradient magnitude along the curve inside one threshold window.
std::vector<double> coastline_curve(const SceneSpec& spec) {
    Rng rng(mix_seed(spec.seed, 0xC04571));
    const double amp_total = spec.boundary_amplitude * spec.height;

    double raw[3], freq[3], phase[3];
    double raw_sum = 0.0;
    for (int k = 0; k < 3; ++k) {
        raw[k] = rng.uniform(0.25, 1.0);
        raw_sum += raw[k];
        freq[k] = rng.uniform(0.6, 1.6);
        phase[k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }

    std::vector<double> curve(spec.width);
    for (int c = 0; c < spec.width; ++c) {
        double b = spec.height / 2.0;
        for (int k = 0; k < 3; ++k) {
            const double amp = amp_total * raw[k] / raw_sum;
            b += amp * std::sin(2.0 * std::numbers::pi * freq[k] * (c + 0.5) /
                                    spec.width +
                                phase[k]);
        }
        curve[c] = b;
    }
    return curve;
}

std::uint16_t quantize_intensity(double v) {
    const double clamped = std::clamp(v, 0.0, 255.0);
    return static_cast<std::uint16_t>(std::floor(clamped + 0.5));
}

} // namespace

BinaryMap gen_coastline_mask(const SceneSpec& spec) {
    validate_spec(spec);
    const std::vector<double> curve = coastline_curve(spec);
    BinaryMap mask(spec.width, spec.height);
    for (int r = 0; r < spec.height; ++r)
        for (int c = 0; c < spec.width; ++c)
            mask.at(r, c) = (r + 0.5 >= curve[c]) ? 1 : 0;
    return mask;
}

GrayImage render_band(const BinaryMap& mask, const SceneSpec& spec) {
    validate_spec(spec);
    if (mask.width() != spec.width || mask.height() != spec.height)
        throw DimensionError("mask does not match the scene dimensions");

    RealGrid values(spec.width, spec.height);
    for (int r = 0; r < spec.height; ++r)
        for (int c = 0; c < spec.width; ++c)
            values.at(r, c) = mask.at(r, c) ? spec.water_level : spec.land_level;

    Rng seg_rng(mix_seed(spec.seed, 0x5E69E27));
    for (int s = 0; s < spec.n_noise_edges; ++s) {
        const double cr = seg_rng.uniform(2.0, spec.height - 3.0);
        const double cc = seg_rng.uniform(2.0, spec.width - 3.0);
        const double angle = seg_rng.uniform(0.0, std::numbers::pi);
        const int len = seg_rng.uniform_int(8, 20);
        const double dr = std::sin(angle);
        const double dc = std::cos(angle);
        for (int t = 0; t < 2 * len; ++t) {
            const int r = static_cast<int>(std::lround(cr + 0.5 * t * dr));
            const int c = static_cast<int>(std::lround(cc + 0.5 * t * dc));
            if (r < 0 || r >= spec.height || c < 0 || c >= spec.width)
                break;
            values.at(r, c) =
                (mask.at(r, c) ? spec.water_level : spec.land_level) +
                spec.distractor_contrast;
        }
    }

    Rng noise_rng(mix_seed(spec.seed, 0xB06E));
    GrayImage out(spec.width, spec.height);
    for (int r = 0; r < spec.height; ++r)
        for (int c = 0; c < spec.width; ++c)
            out.at(r, c) = quantize_intensity(
                values.at(r, c) + spec.noise_sigma * noise_rng.normal());
    return out;
}

double step_gain(double sigma) {
    const std::vector<double> k = gaussian_kernel(sigma);
    const int radius = (static_cast<int>(k.size()) - 1) / 2;
    // Sobel response at a smoothed unit step: 4 * (s(1) - s(-1)) where
    // s is the step convolved with the kernel; that difference telescopes
    // to the center tap plus its neighbor.
    return 4.0 * (k[radius] + k[radius + 1]);
}

ThresholdPair designed_pair(int window_index) {
    const auto& chain = default_threshold_chain();
    if (window_index < 0 || window_index >= static_cast<int>(chain.size()))
        throw DomainError("window index outside the threshold chain");
    return chain[window_index];
}

namespace {

struct PatchBox {
    int r0, c0, h, w;
};

bool boxes_clash(const PatchBox& a, const PatchBox& b, int margin) {
    return a.r0 - margin < b.r0 + b.h && b.r0 - margin < a.r0 + a.h &&
           a.c0 - margin < b.c0 + b.w && b.c0 - margin < a.c0 + a.w;
}

// Upper bounds of the chain plus the center of each magnitude window.
struct ChainWindows {
    std::vector<double> highs;
    std::vector<double> targets; // h_i + 0.3*(h_{i+1} - h_i)
};

ChainWindows chain_windows() {
    const auto& chain = default_threshold_chain();
    ChainWindows cw;
    for (const ThresholdPair& p : chain)
        cw.highs.push_back(p.high);
    for (std::size_t i = 0; i < cw.highs.size(); ++i) {
        const double top =
            i + 1 < cw.highs.size() ? cw.highs[i + 1] : cw.highs[i] * 1.3;
        cw.targets.push_back(cw.highs[i] + 0.30 * (top - cw.highs[i]));
    }
    return cw;
}

// One generation attempt for a scene with a fixed designed window.
// Returns the rendered band; the caller verifies the oracle.
GrayImage render_designed_scene(const SceneSpec& spec,
                                const std::vector<double>& curve,
                                int designed_window) {
    const ChainWindows cw = chain_windows();
    const double gain = step_gain(1.0);
    const int w = spec.width;
    const int h = spec.height;

    const double coast_contrast = cw.targets[designed_window] / gain;

    Rng layout_rng(mix_seed(spec.seed, 0x9A7C4));
    const bool water_bright = layout_rng.coin();
    const double land_level =
        water_bright ? 128.0 - coast_contrast / 2.0 : 128.0 + coast_contrast / 2.0;
    const double water_level = water_bright ? land_level + coast_contrast
                                            : land_level - coast_contrast;

    // The rendered shoreline sits two rows below the labeled boundary,
    // mimicking the annotation offset real reference masks carry. This
    // keeps detected and true edge pixels disjoint even for a perfect
    // detection, while staying within one or two pixels of it.
    constexpr double kBoundaryShift = 2.0;
    constexpr double kFlatMargin = 6.0;
    constexpr double kRampSlope = 4.0;

    RealGrid values(w, h);
    for (int c = 0; c < w; ++c) {
        const double b2 = curve[c] + kBoundaryShift;
        for (int r = 0; r < h; ++r) {
            const double dist = (r + 0.5) - b2;
            double v;
            if (dist >= 0.0) { // water side
                v = water_level;
                if (dist > kFlatMargin) {
                    // Drift gently toward the extreme so the scene spans
                    // the full 0..255 range; the slope stays far below
                    // the lowest hysteresis bound.
                    const double drift = kRampSlope * (dist - kFlatMargin);
                    v = water_bright ? std::min(255.0, v + drift)
                                     : std::max(0.0, v - drift);
                }
            } else {
                v = land_level;
                if (-dist > kFlatMargin) {
                    const double drift = kRampSlope * (-dist - kFlatMargin);
                    v = water_bright ? std::max(0.0, v - drift)
                                     : std::min(255.0, v + drift);
                }
            }
            values.at(r, c) = v;
        }
    }

    std::vector<PatchBox> placed;

    auto clear_of_curve_and_patches = [&](const PatchBox& box) {
        for (int c = std::max(0, box.c0 - 2);
             c < std::min(w, box.c0 + box.w + 2); ++c) {
            const double b2 = curve[c] + kBoundaryShift;
            if (b2 > box.r0 - 12 && b2 < box.r0 + box.h + 12)
                return false;
        }
        for (const PatchBox& other : placed)
            if (boxes_clash(box, other, 6))
                return false;
        return true;
    };

    // Persistent clutter: a few large full-contrast patches in the zones
    // the drift has pulled to 0 or 255. Their edges exceed the top chain
    // bound, so they survive every pair and keep even the sparsest edge
    // map comparable in mass to the ground truth.
    {
        int painted = 0;
        for (int attempt = 0; attempt < 120 && painted < 3; ++attempt) {
            PatchBox box;
            box.w = layout_rng.uniform_int(16, 26);
            box.h = layout_rng.uniform_int(10, 16);
            if (layout_rng.coin())
                std::swap(box.w, box.h);
            box.r0 = layout_rng.uniform_int(4, h - 4 - box.h);
            box.c0 = layout_rng.uniform_int(4, w - 4 - box.w);
            if (!clear_of_curve_and_patches(box))
                continue;

            // The whole footprint must sit on one extreme plateau.
            bool all_low = true, all_high = true;
            for (int r = box.r0 - 2; r < box.r0 + box.h + 2; ++r) {
                for (int c = box.c0 - 2; c < box.c0 + box.w + 2; ++c) {
                    const double bg = values.at(r, c);
                    all_low = all_low && bg <= 2.0;
                    all_high = all_high && bg >= 253.0;
                }
            }
            if (!all_low && !all_high)
                continue;

            const double level = all_low ? 255.0 : 0.0;
            for (int r = box.r0; r < box.r0 + box.h; ++r)
                for (int c = box.c0; c < box.c0 + box.w; ++c)
                    values.at(r, c) = level;
            placed.push_back(box);
            ++painted;
        }
        if (painted < 2)
            return GrayImage(1, 1); // degenerate scene, caller resamples
    }

    // Clutter ladder: for every magnitude window below the top, paint a
    // few rectangular patches whose edges land inside that window. Each
    // chain pair therefore sheds a known amount of clutter relative to
    // its predecessor.
    for (std::size_t j = 0; j < cw.highs.size() - 1; ++j) {
        const double delta = cw.targets[j] / gain;
        int painted = 0;
        for (int attempt = 0; attempt < 80 && painted < 3; ++attempt) {
            PatchBox box;
            box.w = layout_rng.uniform_int(6, 10);
            box.h = layout_rng.uniform_int(4, 6);
            if (layout_rng.coin())
                std::swap(box.w, box.h);
            box.r0 = layout_rng.uniform_int(4, h - 4 - box.h);
            box.c0 = layout_rng.uniform_int(4, w - 4 - box.w);
            if (!clear_of_curve_and_patches(box))
                continue;

            const double bg = values.at(box.r0 + box.h / 2, box.c0 + box.w / 2);
            double sign;
            const bool can_up = bg + delta <= 252.0;
            const bool can_down = bg - delta >= 3.0;
            if (can_up && can_down)
                sign = layout_rng.coin() ? 1.0 : -1.0;
            else if (can_up)
                sign = 1.0;
            else if (can_down)
                sign = -1.0;
            else
                continue;

            for (int r = box.r0; r < box.r0 + box.h; ++r)
                for (int c = box.c0; c < box.c0 + box.w; ++c)
                    values.at(r, c) += sign * delta;
            placed.push_back(box);
            ++painted;
        }
        if (painted == 0)
            return GrayImage(1, 1); // degenerate scene, caller resamples
    }

    Rng noise_rng(mix_seed(spec.seed, 0xB06E));
    GrayImage out(w, h);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            out.at(r, c) = quantize_intensity(
                values.at(r, c) + spec.noise_sigma * noise_rng.normal());
    return out;
}

} // namespace

std::vector<Scene> gen_corpus(int n, const SceneSpec& base) {
    if (n < 1)
        throw DomainError("corpus size must be at least 1");
    validate_spec(base);

    const auto& chain = default_threshold_chain();
    // Window draw skewed toward the middle pairs; the top pair is never a
    // designed label so pixel-count metrics have room to prefer it.
    const std::vector<double> window_weights = {2, 7, 12, 30, 29};

    std::vector<Scene> scenes;
    scenes.reserve(n);

    for (int i = 0; i < n; ++i) {
        Rng scene_rng(mix_seed(base.seed, 0x5C00 + static_cast<std::uint64_t>(i)));
        const int k = scene_rng.pick_weighted(window_weights);

        bool accepted = false;
        for (int attempt = 0; attempt < 10 && !accepted; ++attempt) {
            SceneSpec spec = base;
            spec.seed = mix_seed(base.seed,
                                 0xA77E0000ull + 64ull * i + attempt);

            const std::vector<double> curve = coastline_curve(spec);
            GrayImage band = render_designed_scene(spec, curve, k);
            if (band.width() == 1)
                continue;

            BinaryMap mask(spec.width, spec.height);
            for (int r = 0; r < spec.height; ++r)
                for (int c = 0; c < spec.width; ++c)
                    mask.at(r, c) = (r + 0.5 >= curve[c]) ? 1 : 0;

            // Post-hoc construction oracle: the designed pair must carry
            // the best fom across the chain, strictly beating the lower
            // pairs (a tie there would resolve against the label).
            const BinaryMap truth = mask_to_edges(mask);
            const GrayImage norm = normalize_to_255(band);
            std::vector<double> foms;
            foms.reserve(chain.size());
            for (const ThresholdPair& pair : chain)
                foms.push_back(fom(canny(norm, pair, 1.0), truth));

            bool best = true;
            for (std::size_t j = 0; j < foms.size(); ++j) {
                if (static_cast<int>(j) < k && foms[j] >= foms[k])
                    best = false;
                if (static_cast<int>(j) > k && foms[j] > foms[k])
                    best = false;
            }
            if (!best)
                continue;

            scenes.push_back(
                Scene{std::move(band), std::move(mask), chain[k], spec.seed});
            accepted = true;
        }
        if (!accepted)
            throw Error("corpus rejection sampling exceeded 10 attempts for scene " +
                        std::to_string(i));
    }
    return scenes;
}

} // namespace edgebench
