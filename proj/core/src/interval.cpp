#include "ise/interval.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <ostream>

namespace ise {

Interval sqrt(const Interval& a) {
  if (a.lo() < 0.0)
    throw std::domain_error("Interval sqrt: negative lower endpoint");
  return Interval(rounding::sqrt_down(a.lo()), rounding::sqrt_up(a.hi()));
}

namespace {

// libm sin/cos are faithful to within a couple ulps but not correctly
// rounded; results are padded outward by four ulps and clamped to [-1, 1].
double pad_down(double x) {
  for (int i = 0; i < 4; ++i) x = rounding::next_down(x);
  return std::max(x, -1.0);
}
double pad_up(double x) {
  for (int i = 0; i < 4; ++i) x = rounding::next_up(x);
  return std::min(x, 1.0);
}

// Conservative test for "k*pi + offset may lie inside [lo, hi]".
bool crossing_inside(double k, double offset, double lo, double hi) {
  constexpr double slop = 1e-9;
  double c = k * std::numbers::pi + offset;
  return c >= lo - slop && c <= hi + slop;
}

}  // namespace

Interval cos(const Interval& a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (a.width() >= two_pi) return Interval(-1.0, 1.0);
  double cl = std::cos(a.lo());
  double ch = std::cos(a.hi());
  double lo = pad_down(std::min(cl, ch));
  double hi = pad_up(std::max(cl, ch));
  // extrema of cos at k*pi: +1 for even k, -1 for odd k
  long k0 = static_cast<long>(std::floor(a.lo() / std::numbers::pi)) - 1;
  long k1 = static_cast<long>(std::ceil(a.hi() / std::numbers::pi)) + 1;
  for (long k = k0; k <= k1; ++k) {
    if (!crossing_inside(static_cast<double>(k), 0.0, a.lo(), a.hi())) continue;
    if (k % 2 == 0) hi = 1.0;
    else lo = -1.0;
  }
  return Interval(lo, hi);
}

Interval sin(const Interval& a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (a.width() >= two_pi) return Interval(-1.0, 1.0);
  double sl = std::sin(a.lo());
  double sh = std::sin(a.hi());
  double lo = pad_down(std::min(sl, sh));
  double hi = pad_up(std::max(sl, sh));
  // extrema of sin at pi/2 + k*pi: +1 for even k, -1 for odd k
  long k0 = static_cast<long>(std::floor(a.lo() / std::numbers::pi)) - 1;
  long k1 = static_cast<long>(std::ceil(a.hi() / std::numbers::pi)) + 1;
  for (long k = k0; k <= k1; ++k) {
    if (!crossing_inside(static_cast<double>(k), std::numbers::pi / 2.0, a.lo(), a.hi()))
      continue;
    long km = ((k % 2) + 2) % 2;
    if (km == 0) hi = 1.0;
    else lo = -1.0;
  }
  return Interval(lo, hi);
}

std::ostream& operator<<(std::ostream& os, const Interval& iv) {
  auto old = os.precision(std::numeric_limits<double>::max_digits10);
  os << "[" << iv.lo() << ", " << iv.hi() << "]";
  os.precision(old);
  return os;
}

}  // namespace ise
