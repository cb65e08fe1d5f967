#pragma once

#include <cmath>
#include <cstdint>

namespace egf::detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Counter-based stream of standard normals. Stream k of a given seed is
// independent of how many draws other streams made, so per-column sample
// generation can run in parallel and still be reproducible.
class NormalStream {
public:
  NormalStream(std::uint64_t seed, std::uint64_t stream) {
    state_ = seed ^ (0xD1B54A32D192ED03ull * (stream + 1));
    // burn one output so nearby (seed, stream) pairs decorrelate
    splitmix64(state_);
  }

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // Box-Muller on uniforms in (0, 1]
    const double u1 = to_unit(splitmix64(state_));
    const double u2 = to_unit(splitmix64(state_));
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

private:
  static double to_unit(std::uint64_t x) {
    return (static_cast<double>(x >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace egf::detail
