#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "lieac/controls.hpp"
#include "lieac/evolution.hpp"
#include "lieac/lebesgue.hpp"
#include "lieac/parallel.hpp"

using namespace lieac;

namespace {

// Runs the same computation with the parallel kernels on and off.
template <typename F>
auto both_legs(F&& f) {
  par::set_enabled(true);
  auto hot = f();
  {
    par::ScopedSerial serial;
    auto cold = f();
    return std::make_pair(std::move(hot), std::move(cold));
  }
}

PiecewiseCurve sawtooth(int pieces) {
  std::vector<double> breaks;
  std::vector<Vec> values;
  const Interval dom(0.0, 1.0);
  for (int k = 0; k < pieces; ++k) {
    if (k) breaks.push_back(double(k) / pieces);
    Vec v(2);
    v << std::sin(0.7 * k) + 0.2, std::cos(1.3 * k);
    values.push_back(v);
  }
  return PiecewiseCurve::step(dom, breaks, values);
}

}  // namespace

TEST_CASE("parallel_for covers every index exactly once") {
  std::vector<std::atomic<int>> hits(1000);
  for (auto& h : hits) h.store(0);
  par::parallel_for(1000, [&](int i) { hits[i].fetch_add(1); });
  for (int i = 0; i < 1000; ++i) CHECK(hits[i].load() == 1);
}

TEST_CASE("worker exceptions are rethrown after the join") {
  auto boom = [] {
    par::parallel_for(64, [](int i) {
      if (i == 7) throw std::runtime_error("boom");
    });
  };
  CHECK_THROWS_AS(boom(), std::runtime_error);
}

TEST_CASE("scoped serial restores the previous mode") {
  par::set_enabled(true);
  {
    par::ScopedSerial s;
    CHECK_FALSE(par::enabled());
    {
      par::ScopedSerial nested;
      CHECK_FALSE(par::enabled());
    }
  }
#ifdef _OPENMP
  CHECK(par::enabled());
#else
  CHECK_FALSE(par::enabled());
#endif
}

TEST_CASE("seminorms are bitwise identical across modes") {
  const PiecewiseCurve saw = sawtooth(64);
  const Seminorm q = Seminorm::euclidean(2);
  for (Exponent p : {Exponent::finite(1.0), Exponent::finite(2.0),
                     Exponent::finite(4.0), Exponent::inf()}) {
    auto [hot, cold] = both_legs([&] { return lp_seminorm(saw, q, p); });
    CHECK(hot == cold);
  }
}

TEST_CASE("trajectories are bitwise identical across modes") {
  const GroupPtr g3 = so3();
  ControlDescriptor d;
  d.kind = "trig";
  Vec a(3), f(3), ph(3);
  a << 0.8, 0.5, 0.3;
  f << 1.0, 2.0, 3.0;
  ph << 0.0, 0.4, 1.1;
  d.amp = a;
  d.freq = f;
  d.phase = ph;
  const LpElement gamma(build_control(g3, Interval(0.0, 1.0), d),
                        Exponent::finite(2.0));
  EvolConfig cfg;
  cfg.n_subdivisions = 16;

  auto run = [&] {
    const EvolResult r = evolve(g3, gamma, cfg);
    std::vector<double> samples;
    samples.reserve(201 * 9 + 1);
    for (int i = 0; i <= 200; ++i) {
      const Vec v = flatten(r.curve.value(i / 200.0));
      for (int k = 0; k < v.size(); ++k) samples.push_back(v[k]);
    }
    samples.push_back(r.residual);
    return samples;
  };
  auto [hot, cold] = both_legs(run);
  REQUIRE(hot.size() == cold.size());
  for (size_t i = 0; i < hot.size(); ++i) CHECK(hot[i] == cold[i]);
}

TEST_CASE("defect evaluation is bitwise identical across modes") {
  const GroupPtr g2 = gl(2);
  Mat A(2, 2);
  A << 0.3, 0.1, -0.2, 0.4;
  const Interval dom(0.0, 2.0);
  const GroupACCurve frozen = GroupACCurve::constant(
      make_element(g2, Mat::Identity(2, 2)), dom, Exponent::finite(2.0));
  const LpElement gamma(PiecewiseCurve::constant(dom, flatten(A)),
                        Exponent::finite(2.0));
  auto [hot, cold] = both_legs([&] { return residual(frozen, gamma); });
  CHECK(hot == cold);
}
