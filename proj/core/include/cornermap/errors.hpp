#pragma once

#include <stdexcept>
#include <string>

namespace cornermap {

// Invalid configuration, constraint violation, out-of-range input, or a
// computed result that fails its admissibility checks.
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Iterative computation failed: non-convergence, NaN divergence, or a
// root-find with no bracket.
struct solver_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unreadable or malformed files and serialized data.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace cornermap
