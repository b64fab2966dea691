#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "lieac/errors.hpp"

namespace lieac {

// Closed interval [a,b] with a < b.
struct Interval {
  double a = 0.0;
  double b = 1.0;

  Interval() = default;
  Interval(double a_, double b_) : a(a_), b(b_) {
    require(std::isfinite(a) && std::isfinite(b) && a < b,
            ErrorCode::InvalidParameter, "interval requires finite a < b");
  }

  double length() const { return b - a; }
  bool contains(double t, double tol = 0.0) const {
    return t >= a - tol && t <= b + tol;
  }
  bool contains(const Interval& other) const {
    return other.a >= a && other.b <= b;
  }
  double clamp(double t) const { return std::min(b, std::max(a, t)); }

  bool operator==(const Interval& o) const { return a == o.a && b == o.b; }
};

// Finite union of disjoint closed intervals, sorted by left endpoint.
// Components may be degenerate points [x,x].
struct CompactSet {
  struct Component {
    double a, b;  // a <= b
  };
  std::vector<Component> comps;

  CompactSet() = default;

  static CompactSet from_components(std::vector<Component> cs) {
    std::sort(cs.begin(), cs.end(),
              [](const Component& x, const Component& y) { return x.a < y.a; });
    CompactSet out;
    for (const auto& c : cs) {
      require(c.a <= c.b, ErrorCode::InvalidParameter,
              "compact component needs a <= b");
      if (!out.comps.empty())
        require(c.a > out.comps.back().b, ErrorCode::InvalidParameter,
                "compact components must be disjoint");
      out.comps.push_back(c);
    }
    return out;
  }

  double measure() const {
    double m = 0.0;
    for (const auto& c : comps) m += c.b - c.a;
    return m;
  }

  bool empty() const { return comps.empty(); }

  bool contains(double t) const {
    for (const auto& c : comps)
      if (t >= c.a && t <= c.b) return true;
    return false;
  }

  bool intersects(const CompactSet& other) const {
    for (const auto& c : comps)
      for (const auto& d : other.comps)
        if (c.a <= d.b && d.a <= c.b) return true;
    return false;
  }
};

// Removes the open intervals `cuts` from the closed-interval union `base`.
// Inputs sorted and disjoint. Slivers of zero length are dropped.
inline CompactSet interval_difference(
    const std::vector<CompactSet::Component>& base,
    const std::vector<std::pair<double, double>>& cuts) {
  std::vector<CompactSet::Component> out;
  for (auto piece : base) {
    double lo = piece.a;
    for (const auto& [ca, cb] : cuts) {
      if (cb <= lo || ca >= piece.b) continue;
      if (ca > lo) out.push_back({lo, ca});
      lo = std::max(lo, cb);
    }
    if (lo < piece.b) out.push_back({lo, piece.b});
  }
  std::vector<CompactSet::Component> kept;
  for (const auto& c : out)
    if (c.b > c.a) kept.push_back(c);
  return CompactSet::from_components(kept);
}

}  // namespace lieac
