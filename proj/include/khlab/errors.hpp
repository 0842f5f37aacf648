#pragma once

#include <stdexcept>
#include <string>

namespace khlab {

/// Malformed or invalid user input (braid text, PD records, flags).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation that only accepts positive braid words got a negative letter.
class NotPositiveError : public InputError {
public:
    using InputError::InputError;
};

/// A configured resource limit (crossing cap) would be exceeded.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An internal consistency violation, e.g. d*d != 0 on a homology block.
class ComplexError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace khlab
