#pragma once

#include <cstdint>
#include <string_view>

namespace ise {

// Deterministic splittable generator (splitmix64 core). A stream's identity
// is fixed by (seed, derivation keys), never by draw order in other streams,
// so measurement channels and MC trials reproduce bit-identically and can be
// evaluated in any order. Distributions are computed explicitly rather than
// through std::*_distribution, which is implementation defined.
class StreamRng {
 public:
  explicit StreamRng(std::uint64_t seed);

  // Independent child stream; derivation depends only on this stream's
  // identity and the key, not on how many values were drawn.
  StreamRng stream(std::uint64_t key) const;
  StreamRng stream(std::string_view name) const;

  std::uint64_t next_u64();
  double uniform();                    // [0, 1)
  double uniform(double a, double b);
  double normal();                     // standard normal, Box-Muller
  // Standard normal conditioned on |z| <= max_abs (rejection sampling).
  double truncated_normal(double max_abs);

 private:
  StreamRng() = default;
  std::uint64_t base_ = 0;
  std::uint64_t state_ = 0;
};

std::uint64_t fnv1a64(std::string_view s);

}  // namespace ise
