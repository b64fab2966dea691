#pragma once

#include <optional>

#include "lieac/ac_curve.hpp"
#include "lieac/lie_core.hpp"

namespace lieac {

// Group-valued AC curve: a continuous matrix-valued representative plus the
// derivative class of its flattening. The logarithmic derivative
// delta(t) = eta(t)^{-1} eta_dot(t) is computed from the stored derivative
// class (never by finite differences) and cached; solver-built curves store
// their control as delta directly.
class GroupACCurve {
 public:
  GroupACCurve(GroupPtr group, Interval domain, Exponent p,
               QuadratureConfig quad, std::function<Mat(double)> value,
               PiecewiseCurve dot_rep,
               std::optional<LpElement> stored_delta = std::nullopt,
               std::vector<double> cell_hints = {});

  // eta(t) = exp((t - a) A), delta constant A.
  static GroupACCurve from_exp(const AlgebraElement& A, Interval domain,
                               Exponent p, QuadratureConfig quad = {});
  static GroupACCurve constant(const GroupElement& g, Interval domain,
                               Exponent p, QuadratureConfig quad = {});

  const GroupPtr& group() const { return group_; }
  const Interval& domain() const { return mat_curve_.domain(); }
  const Exponent& p() const { return mat_curve_.deriv().p(); }
  const QuadratureConfig& quad() const { return mat_curve_.deriv().quad(); }
  const ACCurve& mat_curve() const { return mat_curve_; }

  // Continuous representative, unvalidated (hot path).
  Mat value(double t) const;

  // Solver cell boundaries when the curve came out of evolve (empty
  // otherwise); residual discretizes along these so the defect measures
  // the scheme's local truncation error.
  const std::vector<double>& cell_hints() const { return cell_hints_; }

 private:
  GroupPtr group_;
  std::function<Mat(double)> value_;
  ACCurve mat_curve_;
  std::shared_ptr<std::optional<LpElement>> delta_cache_;
  std::shared_ptr<std::mutex> delta_mu_;
  std::vector<double> cell_hints_;

  friend LpElement delta(const GroupACCurve& eta);
};

// Derivative class of the matrix curve (flattened n x n values).
PiecewiseCurve dot(const GroupACCurve& eta);

// delta(eta)(t) = eta(t)^{-1} eta_dot(t); algebra-valued, cached. Throws
// inconsistent-curve when sampled values miss the algebra predicate.
LpElement delta(const GroupACCurve& eta);

// Pointwise operations; derivative classes follow the product rule
// d(eta zeta) = eta_dot zeta + eta zeta_dot and
// d(eta^{-1}) = -eta^{-1} eta_dot eta^{-1}.
GroupACCurve product(const GroupACCurve& eta, const GroupACCurve& zeta);
GroupACCurve inverse(const GroupACCurve& eta);

// L(f) applied to delta(eta); source group must match.
LpElement delta_homomorphism(const Homomorphism& f, const GroupACCurve& eta);

// eta o f on [c,d]; delta transforms as the scaled pullback (recomputed
// from the derivative class, not copied).
GroupACCurve reparam_group(const GroupACCurve& eta, Interval sub,
                           Interval target);

// Membership-enforced evaluation (reprojects with audit where supported).
GroupElement eval_group(const GroupACCurve& eta, double t);

std::vector<GroupACCurve> split_group(const GroupACCurve& eta,
                                      const std::vector<double>& partition);
GroupACCurve glue_group(const std::vector<GroupACCurve>& parts);

}  // namespace lieac
