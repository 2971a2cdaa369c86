#pragma once

#include <cfloat>
#include <cmath>
#include <iosfwd>
#include <optional>
#include <stdexcept>

namespace ise {

namespace rounding {

// Directed rounding without touching the FPU rounding mode. Each primitive
// computes in round-to-nearest, recovers the exact residual with an
// error-free transformation (two-sum, fma), and steps the result one ulp
// outward only when the residual shows the result is inexact. Exactly
// representable results therefore stay exact.
//
// Residuals themselves can flush to zero below ~1e-292; kEftTrust guards
// that region by widening unconditionally.
inline constexpr double kEftTrust = 1e-270;

inline double next_down(double x) {
  return std::nextafter(x, -std::numeric_limits<double>::infinity());
}
inline double next_up(double x) {
  return std::nextafter(x, std::numeric_limits<double>::infinity());
}

inline double two_sum_residual(double a, double b, double s) {
  double bv = s - a;
  return (a - (s - bv)) + (b - bv);
}

inline double add_down(double a, double b) {
  double s = a + b;
  if (std::isinf(s)) return s > 0 ? DBL_MAX : s;
  double e = two_sum_residual(a, b, s);
  return e < 0.0 ? next_down(s) : s;
}
inline double add_up(double a, double b) {
  double s = a + b;
  if (std::isinf(s)) return s < 0 ? -DBL_MAX : s;
  double e = two_sum_residual(a, b, s);
  return e > 0.0 ? next_up(s) : s;
}
inline double sub_down(double a, double b) { return add_down(a, -b); }
inline double sub_up(double a, double b) { return add_up(a, -b); }

inline double mul_down(double a, double b) {
  double p = a * b;
  if (std::isinf(p)) return p > 0 ? DBL_MAX : p;
  double e = std::fma(a, b, -p);
  if (e < 0.0) return next_down(p);
  if (e > 0.0) return p;
  if (p == 0.0 ? (a != 0.0 && b != 0.0) : (std::fabs(p) < kEftTrust))
    return next_down(p);
  return p;
}
inline double mul_up(double a, double b) {
  double p = a * b;
  if (std::isinf(p)) return p < 0 ? -DBL_MAX : p;
  double e = std::fma(a, b, -p);
  if (e > 0.0) return next_up(p);
  if (e < 0.0) return p;
  if (p == 0.0 ? (a != 0.0 && b != 0.0) : (std::fabs(p) < kEftTrust))
    return next_up(p);
  return p;
}

// a/b = q - (q*b - a)/b, so the sign of fma(q, b, -a) relative to b tells
// which side of q the true quotient lies on.
inline double div_down(double a, double b) {
  double q = a / b;
  if (std::isinf(q)) return q > 0 ? DBL_MAX : q;
  double r = std::fma(q, b, -a);
  if (r == 0.0) {
    if (a != 0.0 && std::fabs(a) < kEftTrust) return next_down(q);
    return q;
  }
  bool true_below = (r > 0.0) == (b > 0.0);
  return true_below ? next_down(q) : q;
}
inline double div_up(double a, double b) {
  double q = a / b;
  if (std::isinf(q)) return q < 0 ? -DBL_MAX : q;
  double r = std::fma(q, b, -a);
  if (r == 0.0) {
    if (a != 0.0 && std::fabs(a) < kEftTrust) return next_up(q);
    return q;
  }
  bool true_below = (r > 0.0) == (b > 0.0);
  return true_below ? q : next_up(q);
}

inline double sqrt_down(double x) {
  double s = std::sqrt(x);
  double r = std::fma(s, s, -x);
  if (r == 0.0) {
    if (x != 0.0 && x < kEftTrust) return next_down(s);
    return s;
  }
  return r > 0.0 ? next_down(s) : s;
}
inline double sqrt_up(double x) {
  double s = std::sqrt(x);
  double r = std::fma(s, s, -x);
  if (r == 0.0) {
    if (x != 0.0 && x < kEftTrust) return next_up(s);
    return s;
  }
  return r < 0.0 ? next_up(s) : s;
}

}  // namespace rounding

// Closed interval with finite endpoints, lo <= hi. Inverted or non-finite
// endpoints are rejected at construction; an empty intersection is reported
// through the std::optional sentinel, never via inverted endpoints.
class Interval {
 public:
  Interval() : lo_(0.0), hi_(0.0) {}
  Interval(double point) : Interval(point, point) {}  // NOLINT: implicit thin
  Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!std::isfinite(lo_) || !std::isfinite(hi_))
      throw std::invalid_argument("Interval: endpoints must be finite");
    if (lo_ > hi_)
      throw std::invalid_argument("Interval: lo > hi");
    if (lo_ == 0.0) lo_ = 0.0;  // normalize -0.0 for stable serialization
    if (hi_ == 0.0) hi_ = 0.0;
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double mid() const {
    double m = 0.5 * (lo_ + hi_);
    if (!std::isfinite(m)) m = 0.5 * lo_ + 0.5 * hi_;
    return m;
  }
  double rad() const { return rounding::sub_up(hi_, lo_) * 0.5; }
  double width() const { return rounding::sub_up(hi_, lo_); }
  double mag() const { return std::max(std::fabs(lo_), std::fabs(hi_)); }
  // Distance from zero to the interval; 0 when the interval contains zero.
  double mig() const {
    if (lo_ <= 0.0 && 0.0 <= hi_) return 0.0;
    return std::min(std::fabs(lo_), std::fabs(hi_));
  }
  bool is_thin() const { return lo_ == hi_; }
  bool contains(double x) const { return lo_ <= x && x <= hi_; }
  bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }

  friend bool operator==(const Interval& a, const Interval& b) {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }
  friend bool operator!=(const Interval& a, const Interval& b) { return !(a == b); }

 private:
  double lo_;
  double hi_;
};

inline Interval operator+(const Interval& a, const Interval& b) {
  return Interval(rounding::add_down(a.lo(), b.lo()), rounding::add_up(a.hi(), b.hi()));
}
inline Interval operator-(const Interval& a, const Interval& b) {
  return Interval(rounding::sub_down(a.lo(), b.hi()), rounding::sub_up(a.hi(), b.lo()));
}
inline Interval operator-(const Interval& a) { return Interval(-a.hi(), -a.lo()); }

inline Interval operator*(const Interval& a, const Interval& b) {
  using namespace rounding;
  double lo = std::min(std::min(mul_down(a.lo(), b.lo()), mul_down(a.lo(), b.hi())),
                       std::min(mul_down(a.hi(), b.lo()), mul_down(a.hi(), b.hi())));
  double hi = std::max(std::max(mul_up(a.lo(), b.lo()), mul_up(a.lo(), b.hi())),
                       std::max(mul_up(a.hi(), b.lo()), mul_up(a.hi(), b.hi())));
  return Interval(lo, hi);
}

inline Interval operator/(const Interval& a, const Interval& b) {
  using namespace rounding;
  if (b.contains(0.0))
    throw std::domain_error("Interval division: divisor contains zero");
  double lo = std::min(std::min(div_down(a.lo(), b.lo()), div_down(a.lo(), b.hi())),
                       std::min(div_down(a.hi(), b.lo()), div_down(a.hi(), b.hi())));
  double hi = std::max(std::max(div_up(a.lo(), b.lo()), div_up(a.lo(), b.hi())),
                       std::max(div_up(a.hi(), b.lo()), div_up(a.hi(), b.hi())));
  return Interval(lo, hi);
}

inline Interval& operator+=(Interval& a, const Interval& b) { return a = a + b; }
inline Interval& operator-=(Interval& a, const Interval& b) { return a = a - b; }
inline Interval& operator*=(Interval& a, const Interval& b) { return a = a * b; }

inline std::optional<Interval> intersect(const Interval& a, const Interval& b) {
  double lo = std::max(a.lo(), b.lo());
  double hi = std::min(a.hi(), b.hi());
  if (lo > hi) return std::nullopt;
  return Interval(lo, hi);
}

inline Interval hull(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

// Hausdorff distance between intervals.
inline double distance(const Interval& a, const Interval& b) {
  return std::max(std::fabs(a.lo() - b.lo()), std::fabs(a.hi() - b.hi()));
}

// Enclosure of {x^2 : x in a}; tighter than a*a when a straddles zero.
inline Interval square(const Interval& a) {
  using namespace rounding;
  double m = a.mig(), M = a.mag();
  return Interval(mul_down(m, m), mul_up(M, M));
}

Interval sqrt(const Interval& a);  // requires a.lo() >= 0
Interval sin(const Interval& a);
Interval cos(const Interval& a);

std::ostream& operator<<(std::ostream& os, const Interval& iv);

}  // namespace ise
