#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <vector>

#include "lieac/interval.hpp"
#include "lieac/seminorm.hpp"

namespace lieac {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// One compact piece of a measurable curve. Constant and Power pieces are
// symbolic: norm/integral paths use closed forms and never sample them near
// a singular endpoint. Power means value(t) = coeff * |t - origin|^expo with
// origin at or outside a support endpoint, so the support interior is
// singularity-free.
struct Piece {
  enum class Kind { Generic, Constant, Power };

  Interval support{0.0, 1.0};
  Kind kind = Kind::Generic;
  std::function<Vec(double)> f;  // Generic only
  Vec value;                     // Constant value / Power coefficient
  double expo = 0.0;             // Power exponent
  double origin = 0.0;           // Power center, origin <= a or origin >= b

  static Piece generic(Interval sup, std::function<Vec(double)> fn) {
    Piece p;
    p.support = sup;
    p.kind = Kind::Generic;
    p.f = std::move(fn);
    return p;
  }
  static Piece constant(Interval sup, Vec v) {
    Piece p;
    p.support = sup;
    p.kind = Kind::Constant;
    p.value = std::move(v);
    return p;
  }
  static Piece power(Interval sup, Vec coeff, double e, double origin) {
    require(origin <= sup.a || origin >= sup.b, ErrorCode::InvalidParameter,
            "power piece origin must not be interior to the support");
    Piece p;
    p.support = sup;
    p.kind = Kind::Power;
    p.value = std::move(coeff);
    p.expo = e;
    p.origin = origin;
    return p;
  }

  bool singular() const {
    return kind == Kind::Power && expo < 0.0 &&
           (origin == support.a || origin == support.b);
  }

  Vec eval(double t) const {
    switch (kind) {
      case Kind::Generic:
        return f(t);
      case Kind::Constant:
        return value;
      case Kind::Power: {
        double u = std::abs(t - origin);
        if (expo < 0.0) {
          const double tiny = 1e-15 * std::max(1.0, support.length());
          u = std::max(u, tiny);
        }
        return value * std::pow(u, expo);
      }
    }
    return value;
  }

  int dim() const {
    if (kind == Kind::Generic) {
      return static_cast<int>(f(0.5 * (support.a + support.b)).size());
    }
    return static_cast<int>(value.size());
  }
};

// Lusin representation of a measurable curve [a,b] -> R^d: finitely many
// compact pieces with continuous evaluators, a default value on the
// (null or tracked-deficit) remainder.
class PiecewiseCurve {
 public:
  PiecewiseCurve() = default;
  PiecewiseCurve(Interval domain, int dim, std::vector<Piece> pieces, Vec off);

  static PiecewiseCurve constant(Interval dom, Vec v);
  static PiecewiseCurve generic(Interval dom, int dim,
                                std::function<Vec(double)> fn);
  // Step curve: values[k] on [breaks[k-1], breaks[k]] with touching supports.
  static PiecewiseCurve step(Interval dom, const std::vector<double>& breaks,
                             const std::vector<Vec>& values);
  static PiecewiseCurve power(Interval dom, Vec coeff, double e, double origin);

  const Interval& domain() const { return domain_; }
  int dim() const { return dim_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  const Vec& off_value() const { return off_; }

  double covered_measure() const;
  double deficit() const { return domain_.length() - covered_measure(); }

  // Rightmost piece containing t wins at shared junctions; off supports the
  // default value is returned.
  Vec eval(double t) const;
  const Piece* piece_at(double t) const;

  // Interior points where two pieces touch (jump candidates).
  std::vector<double> junctions() const;
  // All piece endpoints strictly inside the domain (cell alignment grid).
  std::vector<double> breakpoints() const;

  bool is_continuous(double jump_tol = 1e-12) const;
  bool has_singular_piece() const;

  PiecewiseCurve restrict_to(Interval sub) const;
  // Applies a linear map L (dimension out_dim) to values, preserving
  // Constant/Power structure.
  PiecewiseCurve map_linear(const std::function<Vec(const Vec&)>& L,
                            int out_dim) const;
  PiecewiseCurve scaled(double c) const;

 private:
  Interval domain_{0.0, 1.0};
  int dim_ = 0;
  std::vector<Piece> pieces_;
  Vec off_;
};

// a*x + b*y with kind-preserving combination where the piece structure
// matches (Constant+Constant, Power+Power with equal origin/exponent).
PiecewiseCurve linear_combination(double a, const PiecewiseCurve& x, double b,
                                  const PiecewiseCurve& y);

// ---- measurable_curves operations ----

// Compact set on which the restriction of the curve is continuous, measure
// within eps of the covered measure; splits eps equally among junctions.
CompactSet lusin_compact_approx(const PiecewiseCurve& curve, double eps);

// Disjoint compact sets K_1..K_N, cumulative deficit after n sets <= 1/n.
std::vector<CompactSet> lusin_exhaustion(const PiecewiseCurve& curve, int N);

// Pointwise continuous combination over the common support refinement.
PiecewiseCurve lift_continuous(
    const std::function<Vec(const std::vector<Vec>&)>& F, int out_dim,
    const std::vector<PiecewiseCurve>& curves);

// a.e. equality by dense sampling of common-refinement interiors; defaults
// and boundaries are ignored (null sets).
bool ae_equal(const PiecewiseCurve& x, const PiecewiseCurve& y, double tol,
              int samples_per_interval = 128);

// Piecewise-continuous rebuild of sampled data; segments split where
// consecutive values differ by more than jump_tol (boundary placed at the
// right-hand sample). NaN values or a non-increasing grid are rejected.
PiecewiseCurve from_borel_samples(const std::vector<double>& grid,
                                  const std::vector<Vec>& values,
                                  double jump_tol);

// Curve restricted to a compact set: pieces clipped to the components.
PiecewiseCurve restrict_to_compact(const PiecewiseCurve& curve,
                                   const CompactSet& K);

}  // namespace lieac
