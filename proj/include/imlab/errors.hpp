#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace imlab {

// Base of every error the library raises. kind() is the machine-readable tag
// the CLI writes into its error JSON.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept = 0;
};

class ConfigError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "config_error"; }
};

// Raised when an estimator is queried before it has enough data.
class NotReadyError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "not_ready"; }
};

// A reward module produced a non-finite value or broke its declared bound.
class RewardFault : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "reward_fault"; }
};

// Internal bookkeeping disagreed with itself (e.g. a visit count of zero for a
// state that was just entered).
class ConsistencyFault : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "consistency_fault"; }
};

class StateSpaceTooLarge : public Error {
 public:
  StateSpaceTooLarge(std::uint64_t size, std::uint64_t cap)
      : Error("state space has " + std::to_string(size) +
              " states, exceeding the cap of " + std::to_string(cap)),
        size_(size),
        cap_(cap) {}
  const char* kind() const noexcept override { return "state_space_too_large"; }
  std::uint64_t size() const noexcept { return size_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t size_;
  std::uint64_t cap_;
};

class IoError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "io_error"; }
};

}  // namespace imlab
