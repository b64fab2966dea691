#pragma once

#include <random>
#include <string>
#include <vector>

#include "lieac/lie_core.hpp"

namespace lieac {

// Declarative control description: coordinates in the group's registered
// algebra basis, turned into a flattened algebra-valued curve. Shared by
// the CLI spec reader and the test corpus.
struct ControlDescriptor {
  std::string kind;  // step | poly | trig | power | samples-file

  // step: values[k] on [breaks[k-1], breaks[k]]
  std::vector<double> breaks;
  std::vector<Vec> values;
  // raw step values are flattened n x n matrices, not basis coordinates;
  // they may miss the algebra and are rejected downstream.
  bool raw = false;

  // poly: coords(t) = sum_j poly[j] * t^j
  std::vector<Vec> poly;

  // trig: coords_i(t) = amp[i] * sin(freq[i] * t + phase[i])
  Vec amp, freq, phase;

  // power: coords * |t - origin|^expo
  Vec coords;
  double expo = 0.0;
  double origin = 0.0;

  // samples-file: whitespace-separated rows "t c_1 ... c_k"
  std::string samples_path;
  double jump_tol = 1e-6;
};

PiecewiseCurve build_control(const GroupPtr& G, Interval dom,
                             const ControlDescriptor& d);

// Smooth low-degree polynomial + trig mix with coefficients in [-scale,
// scale]; used by randomized invariant checks.
PiecewiseCurve random_smooth_control(const GroupPtr& G, Interval dom,
                                     std::mt19937_64& rng, double scale);

}  // namespace lieac
