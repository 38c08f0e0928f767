#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fiid {

// Out-of-domain arguments are reported with std::domain_error.

/// Raised when a computation would exceed a configured budget (memory, retries).
class ResourceError : public std::runtime_error {
public:
  ResourceError(const std::string &what, std::uint64_t requested)
      : std::runtime_error(what), requested_(requested) {}

  std::uint64_t requested() const noexcept { return requested_; }

private:
  std::uint64_t requested_;
};

/// Raised when a caller violates an operation's precondition on its inputs'
/// structure (as opposed to a scalar parameter being out of range).
class ContractError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

} // namespace fiid
