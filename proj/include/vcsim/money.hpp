#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <string>

namespace vcsim {

// Fixed-point currency: a signed 64-bit count of milli-units (3 decimal
// places). All accounting downstream of workload generation is exact integer
// arithmetic, so reports are reproducible bit-for-bit across platforms.
struct Money {
  std::int64_t milli = 0;

  static constexpr Money zero() { return {}; }
  static constexpr Money from_units(std::int64_t units) { return Money{units * 1000}; }
  // single rounding point for values computed in floating point
  static Money from_double(double v) { return Money{std::llround(v * 1000.0)}; }

  double to_double() const { return static_cast<double>(milli) / 1000.0; }

  // "12.345" / "-0.001"; always three decimals
  std::string str() const {
    std::int64_t whole = milli / 1000;
    std::int64_t frac = milli % 1000;
    const char* sign = (milli < 0) ? "-" : "";
    if (whole < 0) whole = -whole;
    if (frac < 0) frac = -frac;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%s%lld.%03lld", sign,
                  static_cast<long long>(whole), static_cast<long long>(frac));
    return buf;
  }

  constexpr Money& operator+=(Money o) { milli += o.milli; return *this; }
  constexpr Money& operator-=(Money o) { milli -= o.milli; return *this; }
  friend constexpr Money operator+(Money a, Money b) { return Money{a.milli + b.milli}; }
  friend constexpr Money operator-(Money a, Money b) { return Money{a.milli - b.milli}; }
  friend constexpr Money operator-(Money a) { return Money{-a.milli}; }
  friend constexpr Money operator*(Money a, std::int64_t k) { return Money{a.milli * k}; }
  friend constexpr Money operator*(std::int64_t k, Money a) { return Money{a.milli * k}; }
  friend constexpr auto operator<=>(Money a, Money b) = default;
};

}  // namespace vcsim
