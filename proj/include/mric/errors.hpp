#pragma once

#include <stdexcept>
#include <string>

namespace mric {

// Bad arguments or contract violations (dimension mismatch, odd size in
// half-resolution mode, out-of-range quality factor, ...).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem problems: unreadable file, unwritable output.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Underlying JPEG/PNG codec failure.
struct CodecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed container: bad magic, version mismatch, truncated payload.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Training aborted (non-finite loss).
struct TrainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace mric
