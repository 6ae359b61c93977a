#pragma once

#include <cstdint>
#include <vector>

#include "edgebench/canny.hpp"
#include "edgebench/raster.hpp"

namespace edgebench {

/// Parameters for one synthetic coastline scene. All randomness derives
/// from the seed, so every generator here is a pure function of its spec.
struct SceneSpec {
    int width = 128;
    int height = 128;
    std::uint64_t seed = 0;
    int land_level = 80;
    int water_level = 176;
    double noise_sigma = 2.0;
    int n_noise_edges = 8;
    int distractor_contrast = 40;
    /// Vertical displacement of the shoreline from the horizontal
    /// midline, as a fraction of the image height. Zero degenerates to
    /// an exact half-plane.
    double boundary_amplitude = 0.06;
};

/// Land/water partition whose boundary is a sum of three random-phase
/// sinusoids displacing a horizontal baseline. Water is 1, land is 0.
BinaryMap gen_coastline_mask(const SceneSpec& spec);

/// Renders a mask as a two-level image, then adds seeded Gaussian noise
/// and short line segments at distractor_contrast, clamped to 0..255.
GrayImage render_band(const BinaryMap& mask, const SceneSpec& spec);

struct Scene {
    GrayImage band;
    BinaryMap mask;
    ThresholdPair designed_best;
    std::uint64_t seed;
};

/// Peak gradient magnitude produced by the detector pipeline for an
/// axis-aligned unit-contrast step at the given smoothing sigma.
double step_gain(double sigma);

/// The pair labeled best for a scene whose coastline peak magnitude lies
/// in (high_i, high_{i+1}], where high_i are the chain's upper bounds
/// (window_index 5 means "above 600"). E.g. magnitudes above 600 label
/// (200,600); magnitudes in (300,400] label (100,300).
ThresholdPair designed_pair(int window_index);

/// Generates scenes whose per-scene contrasts are chosen so that one
/// chain pair is correct by construction: the coastline's gradients sit
/// in that pair's magnitude window while clutter patches are laddered
/// across the lower windows. Each scene is verified post hoc (the
/// designed pair must maximize fom against the scene's ground truth);
/// violators are resampled, at most 10 attempts per scene.
std::vector<Scene> gen_corpus(int n, const SceneSpec& base);

} // namespace edgebench
