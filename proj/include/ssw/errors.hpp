#ifndef SSW_ERRORS_HPP
#define SSW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ssw {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParams : public Error {
public:
    using Error::Error;
};

/// Quadrature hit max_nodes without meeting its tolerance.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, double last_delta, long nodes)
        : Error(what), last_delta_(last_delta), nodes_(nodes) {}
    double last_delta() const noexcept { return last_delta_; }
    long nodes() const noexcept { return nodes_; }

private:
    double last_delta_;
    long nodes_;
};

class InvalidAxes : public Error {
public:
    using Error::Error;
};

class EmptyGrid : public Error {
public:
    using Error::Error;
};

class UnsupportedSeparation : public Error {
public:
    using Error::Error;
};

/// (1+zz)^2 < 4 z^2 beyond round-off: the correlators do not describe a state.
class NegativeVy : public Error {
public:
    using Error::Error;
};

class SizeLimit : public Error {
public:
    using Error::Error;
};

class EigensolverFailure : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class InvalidDensityMatrix : public Error {
public:
    using Error::Error;
};

} // namespace ssw

#endif // SSW_ERRORS_HPP
