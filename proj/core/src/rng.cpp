#include "wealthsim/rng.hpp"

#include <bit>
#include <cmath>

namespace wealthsim {

namespace {

constexpr std::uint64_t kReplicationSalt = 0xd1b54a32d192ed03ULL;
constexpr std::uint64_t kBlockSalt = 0xaef17502108ef2d9ULL;
constexpr std::uint64_t kChannelSalt = 0xf1357aea2e62a9c5ULL;

std::uint64_t derive_seed(std::uint64_t base_seed, const StreamKey& key) noexcept {
  std::uint64_t h = mix64(base_seed + 0x9e3779b97f4a7c15ULL);
  h = mix64(h ^ ((key.replication + 1) * kReplicationSalt));
  h = mix64(h ^ ((key.block + 1) * kBlockSalt));
  h = mix64(h ^ ((static_cast<std::uint64_t>(key.channel) + 1) * kChannelSalt));
  return h;
}

}  // namespace

RngStream::RngStream(std::uint64_t base_seed, StreamKey key) noexcept {
  std::uint64_t sm = derive_seed(base_seed, key);
  for (auto& word : s_) word = splitmix64_next(sm);
  // xoshiro must not start from the all-zero state.
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

std::uint64_t RngStream::next_u64() noexcept {
  const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = std::rotl(s_[3], 45);
  return result;
}

double RngStream::uniform01() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_open01() noexcept {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::standard_normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

double RngStream::standard_gamma(double shape) noexcept {
  if (shape < 1.0) {
    const double boosted = standard_gamma(shape + 1.0);
    return boosted * std::pow(uniform_open01(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = standard_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open01();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace wealthsim
