#pragma once

#include <stdexcept>
#include <string>

namespace ssblow {

// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error { public: using Error::Error; };
class ConfigError : public Error { public: using Error::Error; };
class PreconditionError : public Error { public: using Error::Error; };
class UnsupportedError : public Error { public: using Error::Error; };
class NumericError : public Error { public: using Error::Error; };
class TailError : public NumericError { public: using NumericError::NumericError; };
class SolverError : public NumericError { public: using NumericError::NumericError; };
class InstabilityError : public NumericError { public: using NumericError::NumericError; };
class DivergenceError : public NumericError { public: using NumericError::NumericError; };

}  // namespace ssblow
