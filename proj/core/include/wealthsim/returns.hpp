#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wealthsim/rng.hpp"

namespace wealthsim {

struct NormalReturns {
  double mu = 0.05;
  double sigma = 0.05;
  friend bool operator==(const NormalReturns&, const NormalReturns&) = default;
};

/// Gamma with shape `a` and scale `b`: mean a*b, variance a*b^2.
struct GammaReturns {
  double shape = 0.25;
  double scale = 0.2;
  friend bool operator==(const GammaReturns&, const GammaReturns&) = default;
};

struct ConstantReturn {
  double rate = 0.05;
  friend bool operator==(const ConstantReturn&, const ConstantReturn&) = default;
};

using ReturnSpec = std::variant<NormalReturns, GammaReturns, ConstantReturn>;

/// Throws ConfigError unless sigma > 0, shape/scale > 0, or rate >= -1.
void validate(const ReturnSpec& spec);

/// Analytic mean and variance of the unclamped distribution.
double analytic_mean(const ReturnSpec& spec);
double analytic_variance(const ReturnSpec& spec);

std::string describe(const ReturnSpec& spec);

/// One per-period return, clamped to >= -1.
double sample_return(const ReturnSpec& spec, RngStream& stream);

/// Saving rate drawn uniformly from [0, 1).
double sample_saving_rate(RngStream& stream);

/// Agents per RNG block. Agent i draws from the stream of block i / kAgentBlock.
inline constexpr std::size_t kAgentBlock = 256;

/// The per-block streams of one replication and channel. Filling a vector
/// walks blocks in order, and each block consumes only its own stream, so the
/// draws for an agent never depend on how work is scheduled.
class StreamSet {
 public:
  StreamSet(std::uint64_t base_seed, std::uint64_t replication, Channel channel,
            std::size_t agents);

  void fill_returns(const ReturnSpec& spec, std::span<double> out);
  void fill_saving_rates(std::span<double> out);

  std::size_t agents() const noexcept { return agents_; }

 private:
  std::size_t agents_;
  std::vector<RngStream> blocks_;
};

}  // namespace wealthsim
