#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "lieac/piecewise.hpp"

namespace lieac {

// Embedded matrix Lie group descriptor. Membership and algebra predicates
// use a 1e-9 tolerance scaled by the matrix norm; groups with closed-form
// exponentials carry them so symbolic controls never hit the generic path.
class MatrixGroup {
 public:
  std::string name;
  int n = 1;  // ambient matrices are n x n
  bool abelian = false;
  bool closed_form_exp = false;

  std::function<bool(const Mat&)> member;
  std::function<bool(const Mat&)> in_algebra;
  std::vector<Mat> algebra_basis;
  std::function<Mat(const Mat&)> closed_exp;  // set iff closed_form_exp
  std::function<Mat(const Mat&)> reproject;   // drift repair (SO(n) polar)

  int algebra_dim() const { return static_cast<int>(algebra_basis.size()); }
  Mat identity() const { return Mat::Identity(n, n); }
  // coords in the registered basis -> algebra matrix
  Mat algebra_from_coords(const Vec& c) const;
};

using GroupPtr = std::shared_ptr<const MatrixGroup>;

// Translations of R^d as (d+1)x(d+1) affine matrices [[I, v], [0, 1]].
GroupPtr translation_group(int d);
GroupPtr positive_scalars();  // 1x1 matrices (x), x > 0
GroupPtr gl(int n);
GroupPtr so3();
GroupPtr se2();
GroupPtr heisenberg3();  // upper unitriangular 3x3

struct GroupElement {
  GroupPtr group;
  Mat mat;
};

struct TangentVector {
  GroupElement base;
  Mat mat;
};

struct AlgebraElement {
  GroupPtr group;
  Mat mat;
};

// Checked constructors. Elements failing membership are reprojected when
// the group supports it (audited), otherwise rejected.
GroupElement make_element(const GroupPtr& g, Mat m);
AlgebraElement make_algebra(const GroupPtr& g, Mat m);

// Reprojection audit trail (drift beyond tolerance during long
// compositions); thread-safe.
namespace audit {
void note(const std::string& entry);
std::vector<std::string> entries();
void clear();
}  // namespace audit

// Generic dense matrix exponential / principal logarithm
// (scaling-and-squaring / inverse scaling-and-squaring backends).
Mat exp_mat(const Mat& A);
Mat log_mat(const Mat& M);

// Group exponential: closed form where the group carries one, generic
// backend otherwise. tol is validated; the backends work at machine
// precision, which dominates any admissible tolerance.
GroupElement exp_alg(const AlgebraElement& A, double tol = 1e-13);

// Principal log near the identity; requires ||g - I|| < 0.5 in the
// operator-norm estimate, else throws out-of-chart.
AlgebraElement log_grp(const GroupElement& g);

// g.w = (g h, g * w.mat) for w at h; v.h = (g h, v.mat * h) for v at g.
TangentVector left_act(const GroupElement& g, const TangentVector& w);
TangentVector right_act(const TangentVector& v, const GroupElement& h);

// omega_l(v) = base^{-1} * mat; throws invalid-tangent when the result
// misses the algebra predicate.
AlgebraElement maurer_cartan(const TangentVector& v);

struct Homomorphism {
  std::string name;
  GroupPtr source;
  GroupPtr target;
  std::function<Mat(const Mat&)> map;          // on group elements
  std::function<Mat(const Mat&)> algebra_map;  // L(f) on the algebra
};

Homomorphism hom_det(int n);  // GL(n) -> PositiveScalars, L(f) = trace
Homomorphism hom_identity(const GroupPtr& g);

}  // namespace lieac
