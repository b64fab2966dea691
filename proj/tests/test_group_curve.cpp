#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include <Eigen/LU>

#include "lieac/group_curve.hpp"

using namespace lieac;

namespace {

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

const Exponent p2 = Exponent::finite(2.0);
const Interval unit(0.0, 1.0);

Mat delta_at(const GroupACCurve& eta, double t) {
  return unflatten(delta(eta).rep().eval(t), eta.group()->n);
}

double delta_l1(const GroupACCurve& eta) {
  return lp_seminorm(delta(eta).rep(),
                     Seminorm::matrix_frobenius(eta.group()->n),
                     Exponent::finite(1.0));
}

// Scalar curve e^{t^2} with logarithmic derivative 2t.
GroupACCurve scalar_gauss() {
  const GroupPtr ps = positive_scalars();
  auto value = [](double t) {
    Mat m(1, 1);
    m(0, 0) = std::exp(t * t);
    return m;
  };
  PiecewiseCurve dot_rep = PiecewiseCurve::generic(
      unit, 1, [](double t) {
        Vec v(1);
        v[0] = 2.0 * t * std::exp(t * t);
        return v;
      });
  return GroupACCurve(ps, unit, p2, {}, value, std::move(dot_rep));
}

}  // namespace

TEST_CASE("exponential curves have constant logarithmic derivative") {
  const GroupPtr g3 = so3();
  Vec c(3);
  c << 0.4, -0.7, 1.1;
  const Mat A = g3->algebra_from_coords(c);
  const GroupACCurve eta = GroupACCurve::from_exp({g3, A}, unit, p2);

  for (double t : {0.0, 0.3, 0.77, 1.0}) {
    CHECK((delta_at(eta, t) - A).norm() <= 1e-12);
    const Mat expect = eta.value(t) * A;
    CHECK((unflatten(dot(eta).eval(t), 3) - expect).norm() <= 1e-12);
  }
}

TEST_CASE("delta vanishes exactly for constant curves") {
  const GroupPtr g3 = so3();
  Vec c(3);
  c << 0.2, 0.5, -0.3;
  const GroupElement g = exp_alg({g3, g3->algebra_from_coords(c)});
  const GroupACCurve still = GroupACCurve::constant(g, unit, p2);
  CHECK(delta_l1(still) <= 1e-10);
  double drift = 0.0;
  for (int i = 0; i <= 40; ++i) {
    const double t = i / 40.0;
    drift = std::max(drift, (still.value(t) - g.mat).norm());
  }
  CHECK(drift <= 1e-8);

  // Conversely a moving curve cannot have a vanishing delta.
  const GroupACCurve moving =
      GroupACCurve::from_exp({g3, g3->algebra_from_coords(c)}, unit, p2);
  CHECK(delta_l1(moving) > 1e-3);
  double moved = 0.0;
  for (int i = 0; i <= 40; ++i)
    moved = std::max(moved, (moving.value(i / 40.0) - moving.value(0.0)).norm());
  CHECK(moved > 1e-8);
}

TEST_CASE("abelian products add logarithmic derivatives") {
  const GroupPtr ps = positive_scalars();
  const GroupACCurve expo =
      GroupACCurve::from_exp({ps, Mat::Identity(1, 1)}, unit, p2);
  const GroupACCurve gauss = scalar_gauss();

  for (double t : {0.1, 0.5, 0.9})
    CHECK(delta_at(gauss, t)(0, 0) == doctest::Approx(2.0 * t).epsilon(1e-10));

  const GroupACCurve prod = product(expo, gauss);
  for (double t : {0.0, 0.25, 0.6, 1.0})
    CHECK(delta_at(prod, t)(0, 0) ==
          doctest::Approx(1.0 + 2.0 * t).epsilon(1e-9));
}

TEST_CASE("product rule conjugates the leading factor") {
  const GroupPtr g2 = gl(2);
  Mat A(2, 2), B(2, 2);
  A << 0.0, 1.0, 0.0, 0.0;
  B << 0.0, 0.0, 1.0, 0.0;
  const GroupACCurve eta = GroupACCurve::from_exp({g2, A}, unit, p2);
  const GroupACCurve zeta = GroupACCurve::from_exp({g2, B}, unit, p2);
  const GroupACCurve prod = product(eta, zeta);

  for (double t : {0.1, 0.45, 0.8}) {
    const Mat z = zeta.value(t);
    const Mat expect = z.inverse() * A * z + B;
    CHECK((delta_at(prod, t) - expect).norm() <= 1e-6);
  }
}

TEST_CASE("inverse curves negate delta through conjugation") {
  const GroupPtr ps = positive_scalars();
  const GroupACCurve expo =
      GroupACCurve::from_exp({ps, Mat::Identity(1, 1)}, unit, p2);
  const GroupACCurve inv = inverse(expo);
  for (double t : {0.2, 0.7})
    CHECK(delta_at(inv, t)(0, 0) == doctest::Approx(-1.0).epsilon(1e-10));

  const GroupPtr g2 = gl(2);
  Mat A(2, 2);
  A << 0.1, 1.0, -0.4, 0.3;
  const GroupACCurve eta = GroupACCurve::from_exp({g2, A}, unit, p2);
  const GroupACCurve eta_inv = inverse(eta);
  for (double t : {0.15, 0.85}) {
    const Mat e = eta.value(t);
    const Mat expect = -(e * A * e.inverse());
    CHECK((delta_at(eta_inv, t) - expect).norm() <= 1e-8);
  }

  const GroupACCurve cancel = product(eta, eta_inv);
  for (double t : {0.0, 0.5, 1.0})
    CHECK((cancel.value(t) - Mat::Identity(2, 2)).norm() <= 1e-10);
  CHECK(delta_l1(cancel) <= 1e-8);
}

TEST_CASE("left translation leaves delta unchanged") {
  const GroupPtr g3 = so3();
  Vec c(3);
  c << 0.9, -0.2, 0.4;
  const Mat A = g3->algebra_from_coords(c);
  const GroupACCurve eta = GroupACCurve::from_exp({g3, A}, unit, p2);

  Vec cg(3);
  cg << -0.5, 1.0, 0.7;
  const GroupElement g = exp_alg({g3, g3->algebra_from_coords(cg)});
  const GroupACCurve shifted =
      product(GroupACCurve::constant(g, unit, p2), eta);

  for (double t : {0.0, 0.3, 0.6, 1.0})
    CHECK((delta_at(shifted, t) - delta_at(eta, t)).norm() <= 1e-12);
}

TEST_CASE("homomorphisms push delta through their algebra map") {
  const GroupPtr g2 = gl(2);
  Mat D = Mat::Zero(2, 2);
  D.diagonal() << 1.0, 2.0;
  const GroupACCurve eta = GroupACCurve::from_exp({g2, D}, unit, p2);

  const Homomorphism det2 = hom_det(2);
  const LpElement traced = delta_homomorphism(det2, eta);
  for (double t : {0.1, 0.9})
    CHECK(traced.rep().eval(t)[0] == doctest::Approx(3.0).epsilon(1e-10));

  Mat T(2, 2);
  T << 0.5, 1.0, 0.25, -0.5;  // traceless
  const GroupACCurve free = GroupACCurve::from_exp({g2, T}, unit, p2);
  const LpElement zeroed = delta_homomorphism(det2, free);
  CHECK(lp_seminorm(zeroed.rep(), Seminorm::euclidean(1),
                    Exponent::finite(1.0)) <= 1e-10);

  const LpElement same = delta_homomorphism(hom_identity(g2), eta);
  for (double t : {0.2, 0.8})
    CHECK((unflatten(same.rep().eval(t), 2) - delta_at(eta, t)).norm() <=
          1e-12);

  CHECK(code_of([&] {
          delta_homomorphism(det2, GroupACCurve::from_exp(
                                       {so3(), so3()->algebra_basis[0]},
                                       unit, p2));
        }) == ErrorCode::Incompatible);
}

TEST_CASE("reparametrization rescales delta as a pullback") {
  const GroupPtr g3 = so3();
  Vec c(3);
  c << 0.3, 0.8, -0.6;
  const Mat A = g3->algebra_from_coords(c);
  const GroupACCurve eta = GroupACCurve::from_exp({g3, A}, unit, p2);

  const GroupACCurve same = reparam_group(eta, unit, unit);
  for (double t : {0.2, 0.9})
    CHECK((delta_at(same, t) - A).norm() <= 1e-10);

  const GroupACCurve wide =
      reparam_group(eta, unit, Interval(0.0, 2.0));
  for (double t : {0.4, 1.6})
    CHECK((delta_at(wide, t) - 0.5 * A).norm() <= 1e-8);

  const GroupACCurve head =
      reparam_group(eta, Interval(0.0, 0.5), unit);
  for (double t : {0.25, 0.75})
    CHECK((delta_at(head, t) - 0.5 * A).norm() <= 1e-8);
  CHECK((head.value(1.0) - eta.value(0.5)).norm() <= 1e-10);
}

TEST_CASE("evaluation, split, and glue respect group membership") {
  const GroupPtr g3 = so3();
  Vec c(3);
  c << 1.2, -0.4, 0.6;
  const GroupACCurve eta =
      GroupACCurve::from_exp({g3, g3->algebra_from_coords(c)}, unit, p2);

  for (double t : {0.0, 0.41, 1.0}) {
    const GroupElement g = eval_group(eta, t);
    CHECK(g3->member(g.mat));
  }
  CHECK((eval_group(eta, 0.0).mat - g3->identity()).norm() <= 1e-14);

  const GroupACCurve back = glue_group(split_group(eta, {0.3, 0.8}));
  for (double t : {0.1, 0.5, 0.95})
    CHECK((back.value(t) - eta.value(t)).norm() <= 1e-9);

  const auto parts = split_group(eta, {0.5});
  const GroupACCurve wrong = GroupACCurve::constant(
      exp_alg({g3, g3->algebra_from_coords(Vec(c * 2.0))}),
      Interval(0.5, 1.0), p2);
  CHECK(code_of([&] { glue_group({parts[0], wrong}); }) ==
        ErrorCode::DiscontinuousJunction);
}
