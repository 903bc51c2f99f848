#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace nq {

using Timestamp = std::int64_t;  // unix seconds
using WeekIndex = std::int32_t;  // 7-day bins counted from the epoch
using UserIndex = std::uint32_t; // dense position of a user inside one graph

inline constexpr Timestamp kSecondsPerWeek = 604800;

/// Opaque 64-bit user identifier. The total order is used for tie-breaking.
struct UserId {
  std::uint64_t value = 0;

  auto operator<=>(const UserId&) const = default;
};

/// floor(t / 604800). Throws InputError for negative timestamps.
WeekIndex week_of(Timestamp t);

inline constexpr Timestamp week_start(WeekIndex w) {
  return static_cast<Timestamp>(w) * kSecondsPerWeek;
}

// Error hierarchy. Everything thrown by the library derives from Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or rejected input. Carries the source and line when known.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what, std::string source = {}, std::size_t line = 0);

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

/// A statistic that has no defined value on the given data (zero variance, empty set).
class UndefinedError : public Error {
 public:
  using Error::Error;
};

/// Caller violated an operation precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace nq

template <>
struct std::hash<nq::UserId> {
  std::size_t operator()(const nq::UserId& id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};
