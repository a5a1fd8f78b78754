#pragma once

#include <stdexcept>

namespace qoc {

// Bad user input: config keys, malformed files, out-of-range parameters.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical breakdown: eigensolver failure, unstable poles, singular fits.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem and serialization trouble.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qoc
