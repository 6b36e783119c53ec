#ifndef LSM_ERRORS_HPP
#define LSM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lsm {

/// Root of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A series was accessed outside the index range it is defined on.
class SupportError : public Error {
public:
    using Error::Error;
};

/// A parameter violates the documented domain of an operation.
class ParamError : public Error {
public:
    using Error::Error;
};

/// Baseline normalization hit an empty first bucket.
class EmptyPrefixError : public Error {
public:
    using Error::Error;
};

/// A dataset lacks the per-example source provenance an operation needs.
class ProvenanceError : public Error {
public:
    using Error::Error;
};

/// Configuration document failed schema validation.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// File could not be read, written, or parsed.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace lsm

#endif
