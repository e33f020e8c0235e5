#ifndef ARCHIPELAGO_RNG_HPP
#define ARCHIPELAGO_RNG_HPP

#include <cmath>
#include <cstdint>

namespace archipelago {

/// Anything that can hand out uniforms in [0, 1). Concrete streams and the
/// fixed-sequence stubs used by the tests both implement this.
struct UniformSource {
  virtual ~UniformSource() = default;
  virtual double next_uniform() = 0;
};

/// Role of a random stream inside one algorithm step. Part of the stream key,
/// so draws made for different purposes never alias.
enum class StreamRole : std::uint64_t {
  init = 1,
  island_selection = 2,
  individual_selection = 3,
  mutation = 4,
  simulation = 5,
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  return mix64(state);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace detail

/// Counter-keyed random stream: the state is derived by hashing
/// (master_seed, epoch, island, role), so streams with distinct keys are
/// statistically independent and a given key always reproduces the same
/// sequence regardless of which worker consumes it. Core generator is
/// xoshiro256**.
class RngStream final : public UniformSource {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t epoch, std::uint64_t island,
            StreamRole role) {
    std::uint64_t acc = 0x243f6a8885a308d3ULL;  // arbitrary non-zero phase
    const std::uint64_t key[4] = {master_seed, epoch, island,
                                  static_cast<std::uint64_t>(role)};
    for (std::uint64_t k : key) {
      acc = detail::mix64(acc ^ (k + 0x9e3779b97f4a7c15ULL + (acc << 6) + (acc >> 2)));
    }
    for (auto& s : state_) s = detail::splitmix64(acc);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = detail::rotl64(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = detail::rotl64(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1), 53-bit resolution.
  double next_uniform() override { return (next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_[4];
};

/// One standard normal draw; always consumes exactly two uniforms
/// (Box-Muller, discarding the sine branch) so stream consumption is
/// independent of the realized values.
inline double standard_gaussian(UniformSource& rng) {
  const double u1 = rng.next_uniform();
  const double u2 = rng.next_uniform();
  const double r = std::sqrt(-2.0 * std::log1p(-u1));
  return r * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace archipelago

#endif  // ARCHIPELAGO_RNG_HPP
