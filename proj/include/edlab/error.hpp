#pragma once

#include <stdexcept>
#include <string>

namespace edlab {

/// Bad parameter value or range (CLI exit code 1).
class DomainError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A size cap or materialization horizon was exceeded (CLI exit code 2).
class ResourceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A multiplicative function was asked for a prime-power value it does not carry.
class SpecIncompleteError : public DomainError {
  public:
    SpecIncompleteError(const std::string& what, unsigned long long key)
        : DomainError(what), key_(key) {}
    unsigned long long missing_key() const noexcept { return key_; }

  private:
    unsigned long long key_;
};

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
}

} // namespace edlab
