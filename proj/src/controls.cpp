#include "lieac/controls.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace lieac {

namespace {

Vec flat_coords(const GroupPtr& G, const Vec& coords) {
  return flatten(G->algebra_from_coords(coords));
}

PiecewiseCurve step_control(const GroupPtr& G, Interval dom,
                            const std::vector<double>& breaks,
                            const std::vector<Vec>& values, bool raw) {
  std::vector<Vec> flats;
  flats.reserve(values.size());
  for (const auto& v : values) {
    if (raw) {
      require(v.size() == G->n * G->n, ErrorCode::InvalidInput,
              "raw step values must be flattened n x n matrices");
      flats.push_back(v);
    } else {
      flats.push_back(flat_coords(G, v));
    }
  }
  return PiecewiseCurve::step(dom, breaks, flats);
}

PiecewiseCurve coords_curve(const GroupPtr& G, Interval dom,
                            std::function<Vec(double)> coords) {
  const GroupPtr g = G;
  auto f = [g, coords](double t) {
    return flatten(g->algebra_from_coords(coords(t)));
  };
  return PiecewiseCurve::generic(dom, G->n * G->n, f);
}

PiecewiseCurve samples_control(const GroupPtr& G, Interval dom,
                               const std::string& path, double jump_tol) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::InvalidInput,
          "cannot open samples file: " + path);
  std::vector<double> grid;
  std::vector<Vec> rows;
  std::string line;
  const int k = G->algebra_dim();
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double t;
    if (!(ls >> t)) continue;
    Vec c(k);
    for (int i = 0; i < k; ++i)
      require(static_cast<bool>(ls >> c[i]), ErrorCode::InvalidInput,
              "short sample row in " + path);
    grid.push_back(t);
    rows.push_back(flat_coords(G, c));
  }
  require(grid.size() >= 2, ErrorCode::InvalidInput,
          "samples file needs at least two rows");
  require(grid.front() == dom.a && grid.back() == dom.b,
          ErrorCode::InvalidInput, "sample grid must span the domain");
  return from_borel_samples(grid, rows, jump_tol);
}

}  // namespace

PiecewiseCurve build_control(const GroupPtr& G, Interval dom,
                             const ControlDescriptor& d) {
  const int k = G->algebra_dim();
  if (d.kind == "step") {
    return step_control(G, dom, d.breaks, d.values, d.raw);
  }
  if (d.kind == "poly") {
    require(!d.poly.empty(), ErrorCode::InvalidInput,
            "poly control needs coefficients");
    for (const auto& c : d.poly)
      require(c.size() == k, ErrorCode::InvalidInput,
              "poly coefficient size must equal the algebra dimension");
    auto coeffs = d.poly;
    return coords_curve(G, dom, [coeffs, k](double t) {
      Vec c = Vec::Zero(k);
      double tn = 1.0;
      for (const auto& row : coeffs) {
        c += tn * row;
        tn *= t;
      }
      return c;
    });
  }
  if (d.kind == "trig") {
    require(d.amp.size() == k && d.freq.size() == k && d.phase.size() == k,
            ErrorCode::InvalidInput,
            "trig control needs amp/freq/phase of the algebra dimension");
    Vec amp = d.amp, freq = d.freq, phase = d.phase;
    return coords_curve(G, dom, [amp, freq, phase, k](double t) {
      Vec c(k);
      for (int i = 0; i < k; ++i)
        c[i] = amp[i] * std::sin(freq[i] * t + phase[i]);
      return c;
    });
  }
  if (d.kind == "power") {
    require(d.coords.size() == k, ErrorCode::InvalidInput,
            "power control coords must match the algebra dimension");
    return PiecewiseCurve::power(dom, flat_coords(G, d.coords), d.expo,
                                 d.origin);
  }
  if (d.kind == "samples-file") {
    return samples_control(G, dom, d.samples_path, d.jump_tol);
  }
  fail(ErrorCode::InvalidInput, "unknown control kind: " + d.kind);
}

PiecewiseCurve random_smooth_control(const GroupPtr& G, Interval dom,
                                     std::mt19937_64& rng, double scale) {
  const int k = G->algebra_dim();
  std::uniform_real_distribution<double> u(-scale, scale);
  Mat poly(k, 3);
  Vec amp(k), freq(k), phase(k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < 3; ++j) poly(i, j) = u(rng);
    amp[i] = u(rng);
    freq[i] = 1.0 + std::abs(u(rng));
    phase[i] = u(rng);
  }
  const GroupPtr g = G;
  return PiecewiseCurve::generic(
      dom, G->n * G->n, [g, poly, amp, freq, phase, k](double t) {
        Vec c(k);
        for (int i = 0; i < k; ++i)
          c[i] = poly(i, 0) + poly(i, 1) * t + poly(i, 2) * t * t +
                 amp[i] * std::sin(freq[i] * t + phase[i]);
        return flatten(g->algebra_from_coords(c));
      });
}

}  // namespace lieac
