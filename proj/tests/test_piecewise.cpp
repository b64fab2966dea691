#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "lieac/piecewise.hpp"

using namespace lieac;

namespace {

Vec v1(double x) {
  Vec v(1);
  v[0] = x;
  return v;
}

Vec v2(double x, double y) {
  Vec v(2);
  v[0] = x;
  v[1] = y;
  return v;
}

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidParameter;
}

PiecewiseCurve one_jump_step() {
  return PiecewiseCurve::step(Interval(0.0, 1.0), {0.5},
                              {v1(-1.0), v1(1.0)});
}

// Indicator of {0.5}: pieces vanish everywhere, the default 1 lives on a
// null set.
PiecewiseCurve point_indicator() {
  std::vector<Piece> ps{Piece::constant(Interval(0.0, 0.5), v1(0.0)),
                        Piece::constant(Interval(0.5, 1.0), v1(0.0))};
  return PiecewiseCurve(Interval(0.0, 1.0), 1, std::move(ps), v1(1.0));
}

}  // namespace

TEST_CASE("pieces evaluate their closed forms") {
  const Piece c = Piece::constant(Interval(0.0, 1.0), v2(3.0, -1.0));
  CHECK(c.eval(0.7) == v2(3.0, -1.0));
  CHECK(c.dim() == 2);

  const Piece g =
      Piece::generic(Interval(0.0, 2.0), [](double t) { return v1(t * t); });
  CHECK(g.eval(1.5)[0] == doctest::Approx(2.25).epsilon(1e-15));

  const Piece p = Piece::power(Interval(0.0, 1.0), v1(2.0), 0.5, 0.0);
  CHECK(p.eval(0.25)[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_FALSE(p.singular());

  const Piece s = Piece::power(Interval(0.0, 1.0), v1(1.0), -0.5, 0.0);
  CHECK(s.singular());
}

TEST_CASE("power pieces reject an interior origin") {
  CHECK(code_of([] {
          Piece::power(Interval(0.0, 1.0), v1(1.0), -0.5, 0.5);
        }) == ErrorCode::InvalidParameter);
}

TEST_CASE("curve construction enforces disjoint supports and dimensions") {
  std::vector<Piece> overlapping{
      Piece::constant(Interval(0.0, 0.6), v1(1.0)),
      Piece::constant(Interval(0.4, 1.0), v1(2.0))};
  CHECK(code_of([&] {
          PiecewiseCurve(Interval(0.0, 1.0), 1, overlapping, v1(0.0));
        }) == ErrorCode::InvalidParameter);

  std::vector<Piece> outside{Piece::constant(Interval(0.0, 2.0), v1(1.0))};
  CHECK(code_of([&] {
          PiecewiseCurve(Interval(0.0, 1.0), 1, outside, v1(0.0));
        }) == ErrorCode::InvalidParameter);

  std::vector<Piece> fine{Piece::constant(Interval(0.0, 1.0), v1(1.0))};
  CHECK(code_of([&] {
          PiecewiseCurve(Interval(0.0, 1.0), 1, fine, v2(0.0, 0.0));
        }) == ErrorCode::InvalidParameter);
}

TEST_CASE("step factory builds touching constant pieces") {
  const PiecewiseCurve s = PiecewiseCurve::step(
      Interval(0.0, 1.0), {1.0 / 3.0, 2.0 / 3.0},
      {v1(1.0), v1(2.0), v1(3.0)});
  CHECK(s.pieces().size() == 3);
  CHECK(s.deficit() == doctest::Approx(0.0));
  CHECK(s.eval(0.1)[0] == 1.0);
  CHECK(s.eval(0.5)[0] == 2.0);
  CHECK(s.eval(0.9)[0] == 3.0);
  // The rightmost piece wins at a shared junction.
  CHECK(s.eval(1.0 / 3.0)[0] == 2.0);

  const auto js = s.junctions();
  REQUIRE(js.size() == 2);
  CHECK(js[0] == doctest::Approx(1.0 / 3.0));
  CHECK(js[1] == doctest::Approx(2.0 / 3.0));
  CHECK_FALSE(s.is_continuous());
  CHECK(PiecewiseCurve::constant(Interval(0.0, 1.0), v1(4.0)).is_continuous());
}

TEST_CASE("restriction and linear maps preserve symbolic structure") {
  const PiecewiseCurve p =
      PiecewiseCurve::power(Interval(0.0, 1.0), v1(1.0), -1.0 / 3.0, 0.0);

  const PiecewiseCurve r = p.restrict_to(Interval(0.25, 0.75));
  REQUIRE(r.pieces().size() == 1);
  CHECK(r.pieces()[0].kind == Piece::Kind::Power);
  CHECK(r.eval(0.5)[0] == doctest::Approx(std::pow(0.5, -1.0 / 3.0)));

  const PiecewiseCurve m =
      p.map_linear([](const Vec& v) { return Vec(2.0 * v); }, 1);
  CHECK(m.pieces()[0].kind == Piece::Kind::Power);
  CHECK(m.eval(0.125)[0] == doctest::Approx(2.0 * std::pow(0.125, -1.0 / 3.0)));

  const PiecewiseCurve sc = p.scaled(-3.0);
  CHECK(sc.eval(0.5)[0] == doctest::Approx(-3.0 * std::pow(0.5, -1.0 / 3.0)));

  CHECK(code_of([&] { p.restrict_to(Interval(0.5, 2.0)); }) ==
        ErrorCode::OutOfDomain);
}

TEST_CASE("lusin approximation excises jumps symmetrically") {
  const PiecewiseCurve s = one_jump_step();
  const CompactSet k = lusin_compact_approx(s, 0.1);
  REQUIRE(k.comps.size() == 2);
  CHECK(k.comps[0].a == doctest::Approx(0.0));
  CHECK(k.comps[0].b == doctest::Approx(0.45));
  CHECK(k.comps[1].a == doctest::Approx(0.55));
  CHECK(k.comps[1].b == doctest::Approx(1.0));
  CHECK(k.measure() == doctest::Approx(0.9));

  const PiecewiseCurve cont =
      PiecewiseCurve::generic(Interval(0.0, 1.0), 1,
                              [](double t) { return v1(std::sin(t)); });
  const CompactSet kc = lusin_compact_approx(cont, 0.2);
  REQUIRE(kc.comps.size() == 1);
  CHECK(kc.comps[0].a == 0.0);
  CHECK(kc.comps[0].b == 1.0);

  const PiecewiseCurve ind = point_indicator();
  const CompactSet ki = lusin_compact_approx(ind, 0.01);
  REQUIRE(ki.comps.size() == 2);
  CHECK(ki.comps[0].b == doctest::Approx(0.495));
  CHECK(ki.comps[1].a == doctest::Approx(0.505));
  const PiecewiseCurve restricted = restrict_to_compact(ind, ki);
  CHECK(restricted.eval(0.2)[0] == 0.0);
  CHECK(restricted.eval(0.8)[0] == 0.0);

  CHECK(code_of([&] { lusin_compact_approx(s, 0.0); }) ==
        ErrorCode::InvalidParameter);
  CHECK(code_of([&] { lusin_compact_approx(s, 2.0); }) ==
        ErrorCode::InvalidParameter);
}

TEST_CASE("lusin approximation deficit never exceeds eps") {
  const std::vector<PiecewiseCurve> corpus = {
      one_jump_step(), point_indicator(),
      PiecewiseCurve::step(Interval(0.0, 1.0), {1.0 / 3.0, 2.0 / 3.0},
                           {v1(0.0), v1(5.0), v1(-2.0)})};
  for (const auto& c : corpus) {
    for (double eps : {0.3, 0.05, 0.004}) {
      const CompactSet k = lusin_compact_approx(c, eps);
      CHECK(c.domain().length() - k.measure() <= eps + 1e-15);
    }
  }
}

TEST_CASE("lusin exhaustion deficits shrink like one over n") {
  const PiecewiseCurve cont =
      PiecewiseCurve::constant(Interval(0.0, 1.0), v1(1.0));
  const auto ks = lusin_exhaustion(cont, 3);
  REQUIRE(ks.size() == 3);
  CHECK(ks[0].measure() == doctest::Approx(1.0));
  CHECK(ks[1].empty());
  CHECK(ks[2].empty());

  const auto two = lusin_exhaustion(one_jump_step(), 2);
  double covered = two[0].measure();
  CHECK(1.0 - covered <= 1.0);
  covered += two[1].measure();
  CHECK(1.0 - covered <= 0.5);
  CHECK_FALSE(two[0].intersects(two[1]));

  const PiecewiseCurve two_jumps = PiecewiseCurve::step(
      Interval(0.0, 1.0), {1.0 / 3.0, 2.0 / 3.0},
      {v1(0.0), v1(1.0), v1(2.0)});
  const auto four = lusin_exhaustion(two_jumps, 4);
  double cum = 0.0;
  for (int n = 1; n <= 4; ++n) {
    cum += four[n - 1].measure();
    CHECK(1.0 - cum <= 1.0 / n);
  }
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      CHECK_FALSE(four[i].intersects(four[j]));
}

TEST_CASE("continuous lifts refine piece structure") {
  const PiecewiseCurve x =
      PiecewiseCurve::step(Interval(0.0, 1.0), {1.0 / 3.0}, {v1(1.0), v1(2.0)});
  const PiecewiseCurve y =
      PiecewiseCurve::step(Interval(0.0, 1.0), {2.0 / 3.0}, {v1(10.0), v1(20.0)});
  const PiecewiseCurve sum = lift_continuous(
      [](const std::vector<Vec>& vs) { return Vec(vs[0] + vs[1]); }, 1, {x, y});
  CHECK(sum.pieces().size() == 3);
  CHECK(sum.eval(0.2)[0] == 11.0);
  CHECK(sum.eval(0.5)[0] == 12.0);
  CHECK(sum.eval(0.9)[0] == 22.0);
  const auto js = sum.junctions();
  REQUIRE(js.size() == 2);
  CHECK(js[0] == doctest::Approx(1.0 / 3.0));
  CHECK(js[1] == doctest::Approx(2.0 / 3.0));

  const PiecewiseCurve id =
      PiecewiseCurve::generic(Interval(0.0, 1.0), 1,
                              [](double t) { return v1(t); });
  const PiecewiseCurve dbl = lift_continuous(
      [](const std::vector<Vec>& vs) { return Vec(2.0 * vs[0]); }, 1, {id});
  CHECK(dbl.pieces().size() == 1);
  CHECK(dbl.eval(0.3)[0] == doctest::Approx(0.6));

  const PiecewiseCurve s = PiecewiseCurve::generic(
      Interval(0.0, 1.0), 1, [](double t) { return v1(std::sin(t)); });
  const PiecewiseCurve c = PiecewiseCurve::generic(
      Interval(0.0, 1.0), 1, [](double t) { return v1(std::cos(t)); });
  const PiecewiseCurve zipped = lift_continuous(
      [](const std::vector<Vec>& vs) { return v2(vs[0][0], vs[1][0]); }, 2,
      {s, c});
  CHECK(zipped.dim() == 2);
  for (double t : {0.1, 0.4, 0.9}) {
    CHECK(zipped.eval(t)[0] == doctest::Approx(std::sin(t)).epsilon(1e-14));
    CHECK(zipped.eval(t)[1] == doctest::Approx(std::cos(t)).epsilon(1e-14));
  }

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double t = u(rng);
    CHECK((sum.eval(t) - (x.eval(t) + y.eval(t))).norm() <= 1e-12);
  }

  const PiecewiseCurve other_dom =
      PiecewiseCurve::constant(Interval(0.0, 2.0), v1(1.0));
  CHECK(code_of([&] {
          lift_continuous(
              [](const std::vector<Vec>& vs) { return vs[0]; }, 1,
              {x, other_dom});
        }) == ErrorCode::IncompatibleDomains);
}

TEST_CASE("a.e. equality ignores defaults and boundaries") {
  const PiecewiseCurve s = one_jump_step();
  PiecewiseCurve altered(Interval(0.0, 1.0), 1,
                         {s.pieces()[0], s.pieces()[1]}, v1(42.0));
  CHECK(ae_equal(s, altered, 1e-12));

  const PiecewiseCurve id = PiecewiseCurve::generic(
      Interval(0.0, 1.0), 1, [](double t) { return v1(t); });
  const PiecewiseCurve shifted = PiecewiseCurve::generic(
      Interval(0.0, 1.0), 1, [](double t) { return v1(t + 1e-3); });
  CHECK_FALSE(ae_equal(id, shifted, 1e-6));

  // Restriction to a Lusin compact drops a non-null set, but the comparison
  // only samples where both curves carry pieces.
  const PiecewiseCurve rebuilt =
      restrict_to_compact(s, lusin_compact_approx(s, 0.1));
  CHECK(ae_equal(s, rebuilt, 1e-12));

  for (const auto& c : {s, id, rebuilt}) CHECK(ae_equal(c, c, 1e-15));
  CHECK(ae_equal(rebuilt, s, 1e-12));
}

TEST_CASE("borel samples rebuild piecewise continuity") {
  std::vector<double> grid;
  std::vector<Vec> smooth, sgn;
  for (int i = 0; i <= 100; ++i) {
    const double t = i / 100.0;
    grid.push_back(t);
    smooth.push_back(v1(t * t));
    sgn.push_back(v1(t < 0.5 ? -1.0 : 1.0));
  }

  const PiecewiseCurve q = from_borel_samples(grid, smooth, 0.1);
  CHECK(q.pieces().size() == 1);
  CHECK(q.eval(0.375)[0] == doctest::Approx(0.375 * 0.375).epsilon(1e-3));

  const PiecewiseCurve s = from_borel_samples(grid, sgn, 0.5);
  REQUIRE(s.pieces().size() == 2);
  CHECK(s.pieces()[0].support.b == doctest::Approx(0.5));
  CHECK(s.pieces()[1].support.a == doctest::Approx(0.5));
  CHECK(s.eval(0.2)[0] == -1.0);
  CHECK(s.eval(0.8)[0] == 1.0);

  std::vector<Vec> bad = smooth;
  bad[10] = v1(std::nan(""));
  CHECK(code_of([&] { from_borel_samples(grid, bad, 0.1); }) ==
        ErrorCode::InvalidInput);

  std::vector<double> nonmono = grid;
  std::swap(nonmono[3], nonmono[4]);
  CHECK(code_of([&] { from_borel_samples(nonmono, smooth, 0.1); }) ==
        ErrorCode::InvalidInput);
}

TEST_CASE("linear combinations keep combinable piece kinds") {
  const PiecewiseCurve a =
      PiecewiseCurve::constant(Interval(0.0, 1.0), v1(2.0));
  const PiecewiseCurve b =
      PiecewiseCurve::constant(Interval(0.0, 1.0), v1(-1.0));
  const PiecewiseCurve lc = linear_combination(3.0, a, 2.0, b);
  CHECK(lc.pieces()[0].kind == Piece::Kind::Constant);
  CHECK(lc.eval(0.5)[0] == doctest::Approx(4.0));

  const PiecewiseCurve p =
      PiecewiseCurve::power(Interval(0.0, 1.0), v1(1.0), -1.0 / 3.0, 0.0);
  const PiecewiseCurve q =
      PiecewiseCurve::power(Interval(0.0, 1.0), v1(2.0), -1.0 / 3.0, 0.0);
  const PiecewiseCurve pc = linear_combination(1.0, p, 1.0, q);
  CHECK(pc.pieces()[0].kind == Piece::Kind::Power);
  CHECK(pc.eval(0.5)[0] == doctest::Approx(3.0 * std::pow(0.5, -1.0 / 3.0)));

  const PiecewiseCurve g = PiecewiseCurve::generic(
      Interval(0.0, 1.0), 1, [](double t) { return v1(t); });
  const PiecewiseCurve mixed = linear_combination(1.0, a, -1.0, g);
  CHECK(mixed.eval(0.25)[0] == doctest::Approx(1.75));
}
