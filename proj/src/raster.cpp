#include "edgebench/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace edgebench {

namespace {

constexpr std::array<Band, 12> kAllBands = {
    Band::b01, Band::b02, Band::b03, Band::b04, Band::b05, Band::b06,
    Band::b07, Band::b08, Band::b8a, Band::b09, Band::b11, Band::b12,
};

constexpr std::array<std::string_view, 12> kBandNames = {
    "B01", "B02", "B03", "B04", "B05", "B06",
    "B07", "B08", "B8A", "B09", "B11", "B12",
};

// Skips whitespace and '#' comments, the separators Netpbm allows
// between header tokens.
void skip_separators(std::istream& in) {
    for (;;) {
        int c = in.peek();
        if (c == '#') {
            while (c != EOF && c != '\n')
                c = in.get();
        } else if (c != EOF && std::isspace(static_cast<unsigned char>(c))) {
            in.get();
        } else {
            return;
        }
    }
}

long read_header_int(std::istream& in, const char* what) {
    skip_separators(in);
    long value = 0;
    if (!(in >> value))
        throw PgmParseError(PgmParseError::Kind::malformed_header,
                            std::string("missing or non-numeric ") + what);
    if (value < 0)
        throw PgmParseError(PgmParseError::Kind::malformed_header,
                            std::string("negative ") + what);
    return value;
}

struct PgmContents {
    GrayImage image;
    long maxval = 0;
};

PgmContents load_pgm_contents(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());

    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || (magic[1] != '2' && magic[1] != '5'))
        throw PgmParseError(PgmParseError::Kind::bad_magic,
                            "not a P2/P5 portable graymap: " + path.string());
    const bool binary = magic[1] == '5';

    const long width = read_header_int(in, "width");
    const long height = read_header_int(in, "height");
    const long maxval = read_header_int(in, "maxval");
    if (width < 1 || height < 1)
        throw PgmParseError(PgmParseError::Kind::malformed_header,
                            "image dimensions must be positive");
    if (maxval < 1 || maxval > 65535)
        throw PgmParseError(PgmParseError::Kind::maxval_out_of_range,
                            "maxval " + std::to_string(maxval) +
                                " outside 1..65535");

    GrayImage image(static_cast<int>(width), static_cast<int>(height));
    auto& px = image.cells();

    if (binary) {
        // Exactly one whitespace byte separates the header from the raster.
        int sep = in.get();
        if (sep == EOF || !std::isspace(static_cast<unsigned char>(sep)))
            throw PgmParseError(PgmParseError::Kind::malformed_header,
                                "missing separator before binary raster");
        const bool wide = maxval > 255;
        std::vector<unsigned char> raw(px.size() * (wide ? 2 : 1));
        in.read(reinterpret_cast<char*>(raw.data()),
                static_cast<std::streamsize>(raw.size()));
        if (static_cast<std::size_t>(in.gcount()) != raw.size())
            throw PgmParseError(PgmParseError::Kind::truncated_payload,
                                "binary raster shorter than width*height");
        for (std::size_t i = 0; i < px.size(); ++i) {
            // Two-byte samples are big-endian per the Netpbm convention.
            const unsigned value =
                wide ? (static_cast<unsigned>(raw[2 * i]) << 8) | raw[2 * i + 1]
                     : raw[i];
            if (value > static_cast<unsigned long>(maxval))
                throw PgmParseError(PgmParseError::Kind::bad_pixel,
                                    "pixel value exceeds maxval");
            px[i] = static_cast<std::uint16_t>(value);
        }
    } else {
        for (std::size_t i = 0; i < px.size(); ++i) {
            skip_separators(in);
            long value = 0;
            if (!(in >> value))
                throw PgmParseError(PgmParseError::Kind::truncated_payload,
                                    "ASCII raster shorter than width*height");
            if (value < 0 || value > maxval)
                throw PgmParseError(PgmParseError::Kind::bad_pixel,
                                    "pixel value outside 0..maxval");
            px[i] = static_cast<std::uint16_t>(value);
        }
    }
    return {std::move(image), maxval};
}

} // namespace

const std::array<Band, 12>& all_bands() { return kAllBands; }

std::string_view band_name(Band band) {
    return kBandNames[static_cast<std::size_t>(band)];
}

std::optional<Band> parse_band(std::string_view name) {
    for (std::size_t i = 0; i < kBandNames.size(); ++i)
        if (kBandNames[i] == name)
            return kAllBands[i];
    return std::nullopt;
}

GrayImage load_pgm(const std::filesystem::path& path) {
    return load_pgm_contents(path).image;
}

void save_pgm(const GrayImage& image, const std::filesystem::path& path,
              PgmFormat format) {
    const auto& px = image.cells();
    std::uint16_t maxval = 1;
    for (std::uint16_t v : px)
        maxval = std::max(maxval, v);

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");

    out << (format == PgmFormat::binary ? "P5" : "P2") << "\n"
        << image.width() << " " << image.height() << "\n"
        << maxval << "\n";

    if (format == PgmFormat::binary) {
        std::vector<unsigned char> raw;
        if (maxval > 255) {
            raw.resize(px.size() * 2);
            for (std::size_t i = 0; i < px.size(); ++i) {
                raw[2 * i] = static_cast<unsigned char>(px[i] >> 8);
                raw[2 * i + 1] = static_cast<unsigned char>(px[i] & 0xff);
            }
        } else {
            raw.resize(px.size());
            for (std::size_t i = 0; i < px.size(); ++i)
                raw[i] = static_cast<unsigned char>(px[i]);
        }
        out.write(reinterpret_cast<const char*>(raw.data()),
                  static_cast<std::streamsize>(raw.size()));
    } else {
        for (int r = 0; r < image.height(); ++r) {
            for (int c = 0; c < image.width(); ++c) {
                if (c)
                    out << ' ';
                out << image.at(r, c);
            }
            out << '\n';
        }
    }
    out.flush();
    if (!out)
        throw IoError("failed writing " + path.string());
}

BinaryMap load_mask(const std::filesystem::path& path) {
    PgmContents contents = load_pgm_contents(path);
    const GrayImage& img = contents.image;
    BinaryMap mask(img.width(), img.height());
    for (std::size_t i = 0; i < img.size(); ++i) {
        const std::uint16_t v = img.cells()[i];
        if (v == 0)
            mask.cells()[i] = 0;
        else if (v == contents.maxval)
            mask.cells()[i] = 1;
        else
            throw InvalidMaskError("mask " + path.string() +
                                   " contains intermediate value " +
                                   std::to_string(v));
    }
    return mask;
}

GrayImage normalize_to_255(const GrayImage& image) {
    const auto [lo_it, hi_it] =
        std::minmax_element(image.cells().begin(), image.cells().end());
    const double lo = *lo_it;
    const double hi = *hi_it;

    GrayImage out(image.width(), image.height());
    if (lo == hi)
        return out; // constant image maps to all zeros

    // Multiply before dividing so exact halves like 127.5 survive and
    // round up.
    const double range = hi - lo;
    for (std::size_t i = 0; i < image.size(); ++i) {
        const double v =
            std::floor((image.cells()[i] - lo) * 255.0 / range + 0.5);
        out.cells()[i] = static_cast<std::uint16_t>(v);
    }
    return out;
}

GrayImage to_gray(const BinaryMap& map, std::uint16_t on_value) {
    GrayImage out(map.width(), map.height());
    for (std::size_t i = 0; i < map.size(); ++i)
        out.cells()[i] = map.cells()[i] ? on_value : 0;
    return out;
}

} // namespace edgebench
