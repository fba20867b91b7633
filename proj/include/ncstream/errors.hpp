#pragma once

#include <stdexcept>
#include <string>

namespace ncstream {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Empty recombination selection passed to combine().
struct EmptySelection : Error {
    using Error::Error;
};

// Packets with mismatched generation id, generation size or block size.
struct Incompatible : Error {
    using Error::Error;
};

// recover() called before rank reached the generation size.
struct NotFullRank : Error {
    using Error::Error;
};

// draw_coefficients() over an empty input buffer.
struct EmptyBuffer : Error {
    using Error::Error;
};

// Scenario/sweep file problems; message carries "file:line" when known.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace ncstream
