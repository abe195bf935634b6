#pragma once

#include <stdexcept>
#include <string>

namespace varlp {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A sup/inf query over an empty cell set.
class EmptyRegionError : public Error {
public:
    using Error::Error;
};

// Input outside an operation's domain: bad grid, exponent below 1, map leaving
// [lo, hi], zero-measure ball where a positive one is required.
class DomainError : public Error {
public:
    using Error::Error;
};

// Root-finding hit its iteration cap.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

} // namespace varlp
