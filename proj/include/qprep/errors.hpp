#pragma once

#include <stdexcept>

namespace qprep {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input; the message names the byte or line where parsing stopped.
struct ParseError : Error {
    using Error::Error;
};

// Well-formed input that uses a feature outside the supported subset.
struct UnsupportedError : Error {
    using Error::Error;
};

struct ArgumentError : Error {
    using Error::Error;
};

// A value, register, or state exceeds what the component can hold.
struct CapacityError : Error {
    using Error::Error;
};

// Idealized reset hit a qubit whose |0> partner amplitude is not empty;
// relabeling would silently discard information.
struct CoherenceError : Error {
    using Error::Error;
};

// A position of the prepared state carries more than one value pattern, or
// the position amplitudes are not uniform.
struct NonBasisEncodingError : Error {
    using Error::Error;
};

// The auxiliary qubit is not |0> in every component of the final state.
struct ResidualEntanglementError : Error {
    using Error::Error;
};

}  // namespace qprep
