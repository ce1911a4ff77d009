#pragma once

#include <cstdint>
#include <random>

namespace imlab {

// Seeded random stream. Every run component draws from its own stream id so
// that adding draws in one component never shifts another component's
// sequence.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  // Uniform in [0, 1).
  double uniform();
  // Uniform over {0, ..., n - 1}; n must be positive.
  std::size_t uniform_index(std::size_t n);
  double gamma(double shape);
  double beta(double a, double b);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

}  // namespace imlab
