#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/LU>

#include "lieac/lie_core.hpp"

using namespace lieac;

namespace {

const double kPi = std::acos(-1.0);

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

std::vector<GroupPtr> registry() {
  return {translation_group(3), positive_scalars(), gl(2),
          so3(),              se2(),              heisenberg3()};
}

Vec random_coords(const GroupPtr& g, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vec c(g->algebra_dim());
  for (int i = 0; i < g->algebra_dim(); ++i) c[i] = u(rng);
  return c;
}

GroupElement random_near_identity(const GroupPtr& g, std::mt19937_64& rng,
                                  double scale = 0.05) {
  return exp_alg(AlgebraElement{g, g->algebra_from_coords(
                                       random_coords(g, rng, scale))});
}

}  // namespace

TEST_CASE("registered groups satisfy the group axioms near the identity") {
  std::mt19937_64 rng(2024);
  for (const auto& g : registry()) {
    CAPTURE(g->name);
    CHECK(g->member(g->identity()));
    int failures = 0;
    for (int i = 0; i < 1000; ++i) {
      const GroupElement a = random_near_identity(g, rng);
      const GroupElement b = random_near_identity(g, rng);
      if (!g->member(a.mat * b.mat)) ++failures;
      if (!g->member(a.mat.inverse())) ++failures;
      const Mat assoc_gap =
          (a.mat * b.mat) * a.mat - a.mat * (b.mat * a.mat);
      if (assoc_gap.norm() > 1e-10 * std::max(1.0, a.mat.norm())) ++failures;
    }
    CHECK(failures == 0);
  }
}

TEST_CASE("algebra coordinates land inside the algebra predicate") {
  std::mt19937_64 rng(5);
  const std::vector<int> dims = {3, 1, 4, 3, 3, 3};
  const auto groups = registry();
  for (size_t i = 0; i < groups.size(); ++i) {
    CAPTURE(groups[i]->name);
    CHECK(groups[i]->algebra_dim() == dims[i]);
    for (int k = 0; k < 20; ++k) {
      const Mat a =
          groups[i]->algebra_from_coords(random_coords(groups[i], rng, 1.0));
      CHECK(groups[i]->in_algebra(a));
    }
  }
}

TEST_CASE("group exponentials use their closed forms") {
  for (const auto& g : registry()) {
    CAPTURE(g->name);
    const GroupElement e =
        exp_alg(AlgebraElement{g, Mat::Zero(g->n, g->n)});
    CHECK((e.mat - g->identity()).norm() <= 1e-15);
  }

  // Rotation by pi/2 about the z axis.
  const GroupPtr rot = so3();
  Vec cz(3);
  cz << 0.0, 0.0, kPi / 2.0;
  const GroupElement r =
      exp_alg(AlgebraElement{rot, rot->algebra_from_coords(cz)});
  Mat expect(3, 3);
  expect << 0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0;
  CHECK((r.mat - expect).norm() <= 1e-14);

  // Nilpotent of degree 3: the series terminates exactly.
  const GroupPtr h = heisenberg3();
  Mat a = Mat::Zero(3, 3);
  a(0, 1) = 2.0;
  a(1, 2) = -1.0;
  a(0, 2) = 0.5;
  const GroupElement he = exp_alg(AlgebraElement{h, a});
  const Mat exact = Mat::Identity(3, 3) + a + 0.5 * (a * a);
  CHECK((he.mat - exact).norm() <= 1e-15);

  // Translations: exp(A) = I + A.
  const GroupPtr tr = translation_group(3);
  Vec tv(3);
  tv << 1.0, -2.0, 0.25;
  const Mat ta = tr->algebra_from_coords(tv);
  const GroupElement te = exp_alg(AlgebraElement{tr, ta});
  CHECK((te.mat - (Mat::Identity(4, 4) + ta)).norm() <= 1e-15);

  const GroupPtr ps = positive_scalars();
  const GroupElement pe =
      exp_alg(AlgebraElement{ps, 0.7 * Mat::Identity(1, 1)});
  CHECK(pe.mat(0, 0) == doctest::Approx(std::exp(0.7)).epsilon(1e-15));
}

TEST_CASE("exponential is a homomorphism exactly when arguments commute") {
  const GroupPtr g2 = gl(2);
  Mat d1 = Mat::Zero(2, 2), d2 = Mat::Zero(2, 2);
  d1.diagonal() << 0.3, -0.2;
  d2.diagonal() << -0.1, 0.5;
  const Mat lhs = exp_alg(AlgebraElement{g2, d1 + d2}).mat;
  const Mat rhs =
      exp_alg(AlgebraElement{g2, d1}).mat * exp_alg(AlgebraElement{g2, d2}).mat;
  CHECK((lhs - rhs).norm() <= 1e-13);

  Mat n1 = Mat::Zero(2, 2), n2 = Mat::Zero(2, 2);
  n1(0, 1) = 1.0;
  n2(1, 0) = 1.0;
  const Mat nl = exp_alg(AlgebraElement{g2, n1 + n2}).mat;
  const Mat nr =
      exp_alg(AlgebraElement{g2, n1}).mat * exp_alg(AlgebraElement{g2, n2}).mat;
  CHECK((nl - nr).norm() > 1e-3);
}

TEST_CASE("principal log inverts the exponential near the identity") {
  std::mt19937_64 rng(99);
  for (const auto& g : registry()) {
    CAPTURE(g->name);
    const AlgebraElement z = log_grp(GroupElement{g, g->identity()});
    CHECK(z.mat.norm() <= 1e-14);
    for (int i = 0; i < 10; ++i) {
      const Mat a = g->algebra_from_coords(random_coords(g, rng, 0.08));
      const AlgebraElement back =
          log_grp(exp_alg(AlgebraElement{g, a}));
      CHECK((back.mat - a).norm() <= 1e-10);
      const GroupElement fwd = exp_alg(back);
      CHECK((fwd.mat - exp_alg(AlgebraElement{g, a}).mat).norm() <= 1e-10);
    }
  }

  Mat far = Mat::Identity(2, 2);
  far(0, 0) = -1.0;
  CHECK(code_of([&] { log_grp(GroupElement{gl(2), far}); }) ==
        ErrorCode::OutOfChart);
}

TEST_CASE("dense exponential and logarithm round-trip") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (int trial = 0; trial < 10; ++trial) {
    Mat a(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) = u(rng);
    CHECK((log_mat(exp_mat(a)) - a).norm() <= 1e-11);
  }
}

TEST_CASE("tangent translation actions compose associatively") {
  const GroupPtr g3 = so3();
  std::mt19937_64 rng(4);

  const GroupElement id{g3, g3->identity()};
  const GroupElement g = random_near_identity(g3, rng, 0.4);
  const GroupElement h = random_near_identity(g3, rng, 0.4);
  const Mat a = g3->algebra_from_coords(random_coords(g3, rng, 1.0));

  const TangentVector w{h, h.mat * a};
  const TangentVector unchanged = left_act(id, w);
  CHECK((unchanged.mat - w.mat).norm() <= 1e-15);
  CHECK((unchanged.base.mat - h.mat).norm() <= 1e-15);

  const TangentVector at_id{id, a};
  const TangentVector moved = right_act(at_id, h);
  CHECK((moved.mat - a * h.mat).norm() <= 1e-15);
  CHECK((moved.base.mat - h.mat).norm() <= 1e-15);

  for (int i = 0; i < 10; ++i) {
    const GroupElement g1 = random_near_identity(g3, rng, 0.4);
    const GroupElement g2 = random_near_identity(g3, rng, 0.4);
    const TangentVector v{id, g3->algebra_from_coords(
                                  random_coords(g3, rng, 1.0))};
    const TangentVector once =
        left_act(GroupElement{g3, Mat(g1.mat * g2.mat)}, v);
    const TangentVector twice = left_act(g1, left_act(g2, v));
    CHECK((once.mat - twice.mat).norm() <= 1e-12);
  }

  CHECK(code_of([&] {
          left_act(GroupElement{translation_group(2), Mat::Identity(3, 3)},
                   w);
        }) == ErrorCode::Incompatible);
}

TEST_CASE("maurer-cartan form cancels the left translation") {
  const GroupPtr g3 = so3();
  std::mt19937_64 rng(21);
  const GroupElement id{g3, g3->identity()};

  const Mat a = g3->algebra_from_coords(random_coords(g3, rng, 1.0));
  const TangentVector at_id{id, a};
  CHECK((maurer_cartan(at_id).mat - a).norm() <= 1e-15);

  for (int i = 0; i < 10; ++i) {
    const GroupElement g = random_near_identity(g3, rng, 0.6);
    const Mat b = g3->algebra_from_coords(random_coords(g3, rng, 1.0));
    const TangentVector v = left_act(g, TangentVector{id, b});
    const AlgebraElement pulled = maurer_cartan(v);
    CHECK((pulled.mat - b).norm() <= 1e-12);
    CHECK(g3->in_algebra(pulled.mat));
  }

  Mat not_skew = Mat::Zero(3, 3);
  not_skew(0, 0) = 1.0;
  CHECK(code_of([&] { maurer_cartan(TangentVector{id, not_skew}); }) ==
        ErrorCode::InvalidTangent);
}

TEST_CASE("determinant homomorphism carries trace as its algebra map") {
  const Homomorphism f = hom_det(2);
  CHECK(f.map(Mat::Identity(2, 2))(0, 0) == doctest::Approx(1.0));

  Mat d = Mat::Zero(2, 2);
  d.diagonal() << 1.0, 2.0;
  CHECK(f.algebra_map(d)(0, 0) == doctest::Approx(3.0));

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int i = 0; i < 20; ++i) {
    Mat a(2, 2);
    a << u(rng), u(rng), u(rng), u(rng);
    const double lhs = f.map(exp_mat(a))(0, 0);
    const double rhs = std::exp(a.trace());
    CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, std::abs(rhs)));

    Mat b(2, 2);
    b << u(rng), u(rng), u(rng), u(rng);
    const Mat ga = exp_mat(a), gb = exp_mat(b);
    CHECK(std::abs(f.map(ga * gb)(0, 0) -
                   f.map(ga)(0, 0) * f.map(gb)(0, 0)) <= 1e-8);
  }

  const Homomorphism idh = hom_identity(so3());
  const Mat r = exp_alg(AlgebraElement{so3(), so3()->algebra_basis[2]}).mat;
  CHECK((idh.map(r) - r).norm() <= 1e-15);
}

TEST_CASE("membership drift is repaired and audited") {
  audit::clear();
  const GroupPtr g3 = so3();
  Vec cz(3);
  cz << 0.3, -0.2, 0.9;
  Mat drifted =
      exp_alg(AlgebraElement{g3, g3->algebra_from_coords(cz)}).mat;
  drifted(0, 0) += 1e-6;
  const GroupElement fixed = make_element(g3, drifted);
  CHECK(g3->member(fixed.mat));
  const auto log = audit::entries();
  REQUIRE(log.size() == 1);
  CHECK(log[0].find("SO(3)") != std::string::npos);
  audit::clear();
  CHECK(audit::entries().empty());

  // No repair map: genuine failures are rejected.
  CHECK(code_of([&] { make_element(gl(2), Mat::Zero(2, 2)); }) ==
        ErrorCode::InvalidInput);
  Mat not_skew = Mat::Zero(3, 3);
  not_skew(0, 1) = 1.0;
  CHECK(code_of([&] { make_algebra(g3, not_skew); }) ==
        ErrorCode::InvalidControl);
}
