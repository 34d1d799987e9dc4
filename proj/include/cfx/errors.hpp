#pragma once

#include <stdexcept>

namespace cfx {

/// The bit budget hit its cap while the enclosure still straddles a digit
/// boundary: the sample is indistinguishable from a rational at the allowed
/// precision. Callers discard the trial and record the event.
struct RefinementExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An exact-law computation could not reach the requested error bound at the
/// configured truncation depth.
struct TruncationTooCoarse : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A dependency structure violates its invariants (overlapping blocks,
/// neighborhood not containing its own index, ...).
struct InvalidSpec : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace cfx
