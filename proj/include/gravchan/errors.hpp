#pragma once

#include <stdexcept>
#include <string>

namespace gravchan {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ZeroNorm : public Error {
public:
    ZeroNorm() : Error("state has zero norm") {}
};

class UncoveredBasisVector : public Error {
public:
    using Error::Error;
};

class BasisMismatch : public Error {
public:
    using Error::Error;
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

class InvalidSpec : public Error {
public:
    using Error::Error;
};

/// Cavity did not return to the vacuum after Bell-pair preparation.
class ResidualPhoton : public Error {
public:
    using Error::Error;
};

class OutOfRange : public Error {
public:
    using Error::Error;
};

/// Derivative-based noise propagation requested too close to a fringe extremum.
class IllConditioned : public Error {
public:
    using Error::Error;
};

class Multimodal : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace gravchan
