#pragma once

#include <stdexcept>
#include <string>

namespace edgebench {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Filesystem-level failure (missing file, unwritable destination, short write).
class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed portable graymap. The kind distinguishes the failure modes so
/// callers and tests can tell a bad header from a short payload.
class PgmParseError : public Error {
public:
    enum class Kind {
        bad_magic,
        malformed_header,
        maxval_out_of_range,
        truncated_payload,
        bad_pixel,
    };

    PgmParseError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// A mask file contained a pixel that is neither 0 nor maxval.
class InvalidMaskError : public Error {
public:
    using Error::Error;
};

/// Two rasters that must share a shape do not, or a raster is too small
/// for the requested operation.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A numeric argument is outside its valid domain (non-positive sigma,
/// inverted thresholds, zero pixel totals, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A statistic needed by a metric is undefined for the given inputs,
/// e.g. zero-variance maps with all stabilizing constants set to zero.
class DegenerateStatsError : public Error {
public:
    using Error::Error;
};

/// An operation that needs at least one set pixel received an empty map.
class EmptyMapError : public Error {
public:
    using Error::Error;
};

} // namespace edgebench
