#ifndef VCC_ERRORS_HPP
#define VCC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vcc {

// Common base so callers can catch everything the library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// I/O and parsing.
struct IoError : Error { using Error::Error; };            // missing/unreadable file
struct ParseError : Error { using Error::Error; };         // non-numeric cell etc.
struct ShapeError : Error { using Error::Error; };         // ragged rows, dim mismatch
struct FormatError : Error { using Error::Error; };        // bad binary magic/truncation
struct LengthError : Error { using Error::Error; };        // paired-input length mismatch
struct ArgumentError : Error { using Error::Error; };      // invalid argument value

// Graph / sampling.
struct OverflowGuardError : Error { using Error::Error; }; // edge multiplicity above cap
struct EmptyPoolError : Error { using Error::Error; };     // no edges to batch over
struct SaturationError : Error { using Error::Error; };    // rejection sampler starved

// Training.
struct NonFiniteError : Error { using Error::Error; };         // NaN/Inf in an update
struct DegenerateColumnError : Error { using Error::Error; };  // dead cluster column
struct DegenerateError : Error { using Error::Error; };        // too few distinct points

// CLI / export.
struct DimensionError : Error { using Error::Error; };     // operation needs d == 2

} // namespace vcc

#endif
