#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace countcast {

// Error taxonomy mirrored by the CLI exit codes:
//   InputError -> 1, ModelError -> 2, ExplosivePathError -> 3.

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A simulated path diverged (exp overflow of the linear predictor) while
// damping was disabled.
struct ExplosivePathError : std::runtime_error {
    ExplosivePathError(const std::string& msg, std::int64_t step_index)
        : std::runtime_error(msg), step(step_index) {}
    std::int64_t step;
};

}  // namespace countcast
