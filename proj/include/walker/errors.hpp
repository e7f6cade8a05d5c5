#pragma once

#include <stdexcept>
#include <string>

namespace walker {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A primitive is undefined at the evaluation point (log of a nonpositive
/// argument, negative power of zero, point outside a model's domain).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A jet coefficient or state component became non-finite.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// Requested derivative order exceeds the configured jet order.
class OrderError : public Error {
public:
    using Error::Error;
};

class ZeroCurvatureError : public Error {
public:
    using Error::Error;
};

/// f_yy has the wrong sign for a construction that assumes f_yy > 0.
class SignError : public Error {
public:
    using Error::Error;
};

class DivisionError : public Error {
public:
    using Error::Error;
};

class NotNormalizedError : public Error {
public:
    using Error::Error;
};

class UnclassifiedError : public Error {
public:
    using Error::Error;
};

class OdeSolveError : public Error {
public:
    using Error::Error;
};

class BuildError : public Error {
public:
    using Error::Error;
};

class InconsistencyError : public Error {
public:
    using Error::Error;
};

/// Malformed expression text, JSON document or configuration file.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace walker
