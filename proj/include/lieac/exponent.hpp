#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "lieac/errors.hpp"

namespace lieac {

// Exponent p in [1, inf]; arithmetic uses the convention 1/inf = 0.
struct Exponent {
  double value = 1.0;
  bool is_inf = false;

  static Exponent finite(double p) {
    require(std::isfinite(p) && p >= 1.0, ErrorCode::InvalidParameter,
            "exponent must satisfy p >= 1");
    Exponent e;
    e.value = p;
    return e;
  }
  static Exponent inf() {
    Exponent e;
    e.is_inf = true;
    e.value = std::numeric_limits<double>::infinity();
    return e;
  }

  double inv() const { return is_inf ? 0.0 : 1.0 / value; }

  bool operator==(const Exponent& o) const {
    return is_inf == o.is_inf && (is_inf || value == o.value);
  }
  bool operator<=(const Exponent& o) const {
    if (is_inf) return o.is_inf;
    return o.is_inf || value <= o.value;
  }

  std::string str() const { return is_inf ? "inf" : std::to_string(value); }
};

}  // namespace lieac
