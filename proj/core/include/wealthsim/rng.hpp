#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace wealthsim {

/// Name of the generator recorded in every manifest. Streams are xoshiro256**
/// states seeded by SplitMix64 from a hash of (base_seed, stream key).
inline constexpr std::string_view kRngAlgorithm = "xoshiro256starstar-splitmix64-keyed-v1";

/// Independent draw channels. Returns and saving rates never share a stream so
/// that switching savings on or off leaves the return draws untouched.
enum class Channel : std::uint64_t { Returns = 0, Savings = 1 };

struct StreamKey {
  std::uint64_t replication = 0;
  std::uint64_t block = 0;
  Channel channel = Channel::Returns;

  friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

/// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// One SplitMix64 step: advances `state` and returns the next output.
constexpr std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
  state += 0x9e3779b97f4a7c15ULL;
  return mix64(state);
}

/// A single-consumer random stream. Identical (base_seed, key) pairs produce
/// bit-identical integer sequences on every platform.
class RngStream {
 public:
  RngStream(std::uint64_t base_seed, StreamKey key) noexcept;

  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform01() noexcept;

  /// Uniform on (0, 1); never returns 0.
  double uniform_open01() noexcept;

  /// Standard normal via the Marsaglia polar method. The second variate of
  /// each accepted pair is cached and returned by the next call.
  double standard_normal() noexcept;

  /// Gamma(shape, 1) via Marsaglia-Tsang; shape < 1 uses the
  /// G(shape + 1) * U^(1/shape) boost.
  double standard_gamma(double shape) noexcept;

 private:
  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace wealthsim
