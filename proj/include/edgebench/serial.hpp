#pragma once

#include "edgebench/canny.hpp"
#include "edgebench/metrics.hpp"

// Single-threaded reference implementations of the data-parallel kernels.
// Each mirrors the arithmetic of its OpenMP counterpart exactly, so tests
// can assert bit-identical outputs and the benchmark can compare them.
namespace edgebench::serial {

RealGrid smooth(const GrayImage& image, double sigma);
GradientField sobel_gradients(const RealGrid& grid);
RealGrid nonmax_suppress(const GradientField& field);
BinaryMap hysteresis(const RealGrid& thinned, const ThresholdPair& t);
BinaryMap canny(const GrayImage& image, const ThresholdPair& t,
                double sigma = 1.0);
Raster<std::int64_t> distance_transform(const BinaryMap& map);
double fom(const BinaryMap& detected, const BinaryMap& truth,
           const FomParams& params = {});

} // namespace edgebench::serial
