#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace memchan {

enum class ErrorKind {
  InvalidInput,
  NoUniqueStationaryState,
  EnumerationTooLarge,
  ParameterOverflow,
  DegenerateMps,
  NotRank1,
  NilpotentSymbol,
  DeterministicLimit,
  InvalidCovariance,
  NoConvergence,
};

std::string_view to_string(ErrorKind kind);

/// Exception carrying a machine-readable kind alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::InvalidInput, what);
}

}  // namespace memchan
