#pragma once

#include <stdexcept>
#include <string>

namespace buffon {

/// Bad input: violated precondition or malformed spec. CLI exit code 1.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A configured work or memory budget would be exceeded. CLI exit code 2.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numeric result could not be certified, or a self-check failed. CLI exit code 3.
class CertificationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what)
{
    if (!cond)
        throw InvalidArgument(what);
}

} // namespace buffon
