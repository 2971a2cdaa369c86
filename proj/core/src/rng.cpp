#include "ise/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ise {

namespace {

inline std::uint64_t fmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

StreamRng::StreamRng(std::uint64_t seed)
    : base_(fmix64(seed ^ 0x9e3779b97f4a7c15ULL)), state_(base_) {}

StreamRng StreamRng::stream(std::uint64_t key) const {
  StreamRng r;
  r.base_ = fmix64(base_ ^ (0x9e3779b97f4a7c15ULL * (key + 0x632be59bd9b4e019ULL)));
  r.state_ = r.base_;
  return r;
}

StreamRng StreamRng::stream(std::string_view name) const {
  return stream(fnv1a64(name));
}

std::uint64_t StreamRng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return fmix64(state_);
}

double StreamRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double StreamRng::uniform(double a, double b) {
  return a + (b - a) * uniform();
}

double StreamRng::normal() {
  double u1 = uniform();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double StreamRng::truncated_normal(double max_abs) {
  if (max_abs <= 0.0)
    throw std::invalid_argument("truncated_normal: bound must be positive");
  for (;;) {
    double z = normal();
    if (std::fabs(z) <= max_abs) return z;
  }
}

}  // namespace ise
