#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mertenslab {

// Precondition violated: argument outside the domain of the operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Request would exceed the configured memory budget.
class ResourceError : public std::runtime_error {
public:
  ResourceError(const std::string& what, std::uint64_t required_bytes)
      : std::runtime_error(what), required_bytes_(required_bytes) {}

  std::uint64_t required_bytes() const noexcept { return required_bytes_; }

private:
  std::uint64_t required_bytes_;
};

namespace detail {

inline void require(bool ok, const std::string& message) {
  if (!ok) throw DomainError(message);
}

}  // namespace detail
}  // namespace mertenslab
