#pragma once

#include <stdexcept>
#include <string>

namespace obstruct {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A result would leave the materialised degree window.
class WindowOverflow : public Error {
  public:
    using Error::Error;
};

/// Malformed or inconsistent input (bad JSON, dimension mismatch, non-prime characteristic, ...).
class InvalidInput : public Error {
  public:
    using Error::Error;
};

/// Input is well formed but outside the family of rings / localisations we can handle.
class Unsupported : public Error {
  public:
    using Error::Error;
};

class NotACocycle : public Error {
  public:
    using Error::Error;
};

} // namespace obstruct
