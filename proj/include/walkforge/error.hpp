#pragma once

#include <stdexcept>
#include <string>

namespace walkforge {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed text input (edge lists, query files); message carries the line number.
struct ParseError : Error {
    using Error::Error;
};

// Binary graph files: bad magic, truncation, section/size mismatch.
struct FormatError : Error {
    using Error::Error;
};

// Invalid run configuration: illegal sampler/program pairing, bad ring sizes,
// out-of-range parameters.
struct ConfigError : Error {
    using Error::Error;
};

// Weight sequences a sampler cannot be built over: empty, negative, non-finite,
// or summing to zero.
struct DistributionError : Error {
    using Error::Error;
};

// A walk program broke its contract at runtime (negative weight, bogus max_weight).
struct ContractError : Error {
    using Error::Error;
};

// Rejection sampling exceeded its trial cap; the asserted bound does not match
// the actual weights (or they are all zero).
struct RejectionCapError : Error {
    using Error::Error;
};

// Filesystem trouble: a file that cannot be opened or a write that failed.
struct IoError : Error {
    using Error::Error;
};

}  // namespace walkforge
