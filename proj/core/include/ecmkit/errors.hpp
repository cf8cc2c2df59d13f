#pragma once

#include <stdexcept>
#include <string>

namespace ecmkit {

/// Bad user input: malformed files, violated model invariants, out-of-range
/// arguments. Maps to CLI exit code 2.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem trouble: missing files, short reads, unwritable outputs.
/// Maps to CLI exit code 3.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

/// A broken internal invariant, i.e. a bug. Maps to CLI exit code 4.
class internal_error : public std::logic_error {
public:
    explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

} // namespace ecmkit
