#pragma once

#include <array>
#include <cassert>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "edgebench/errors.hpp"

namespace edgebench {

/// Row-major rectangular grid of pixels. Rows index top to bottom,
/// columns left to right.
template <typename T>
class Raster {
public:
    Raster() = default;

    Raster(int width, int height, T fill = T{})
        : width_(width), height_(height) {
        if (width < 1 || height < 1)
            throw DimensionError("raster dimensions must be at least 1x1");
        cells_.assign(static_cast<std::size_t>(width) * height, fill);
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return cells_.size(); }

    T& at(int row, int col) {
        assert(row >= 0 && row < height_ && col >= 0 && col < width_);
        return cells_[static_cast<std::size_t>(row) * width_ + col];
    }
    const T& at(int row, int col) const {
        assert(row >= 0 && row < height_ && col >= 0 && col < width_);
        return cells_[static_cast<std::size_t>(row) * width_ + col];
    }

    std::vector<T>& cells() { return cells_; }
    const std::vector<T>& cells() const { return cells_; }

    template <typename U>
    bool same_shape(const Raster<U>& other) const {
        return width_ == other.width() && height_ == other.height();
    }

    friend bool operator==(const Raster&, const Raster&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> cells_;
};

/// One spectral band as non-negative integer intensities, 0..65535.
using GrayImage = Raster<std::uint16_t>;
/// Land/water mask or edge map; every cell is 0 or 1.
using BinaryMap = Raster<std::uint8_t>;
/// Intermediate real-valued grid (smoothed intensities, gradient magnitudes).
using RealGrid = Raster<double>;

/// The twelve spectral bands of a level-2A scene. b08 is the
/// near-infrared band used as the reference band for visual checks.
enum class Band : std::uint8_t {
    b01, b02, b03, b04, b05, b06, b07, b08, b8a, b09, b11, b12,
};

inline constexpr Band kNirBand = Band::b08;

const std::array<Band, 12>& all_bands();
std::string_view band_name(Band band);
std::optional<Band> parse_band(std::string_view name);

enum class PgmFormat { binary, ascii };

/// Reads a P2 (ASCII) or P5 (binary) portable graymap with maxval <= 65535.
/// Pixel values are returned exactly as stored; no rescaling happens.
GrayImage load_pgm(const std::filesystem::path& path);

/// Writes a portable graymap. maxval is the largest pixel value present
/// (at least 1), so a {0,1}-valued image round-trips as a maxval-1 file.
void save_pgm(const GrayImage& image, const std::filesystem::path& path,
              PgmFormat format = PgmFormat::binary);

/// Reads a strictly two-valued PGM as a mask: maxval-valued pixels map
/// to 1, zero pixels to 0. Any intermediate value raises InvalidMaskError.
BinaryMap load_mask(const std::filesystem::path& path);

/// Linear min-max rescale to 0..255, rounding half up. A constant image
/// maps to all zeros.
GrayImage normalize_to_255(const GrayImage& image);

/// Expands a {0,1} map to a gray image with ones drawn at on_value.
GrayImage to_gray(const BinaryMap& map, std::uint16_t on_value);

} // namespace edgebench
