#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "lieac/lebesgue.hpp"

namespace lieac {

// Weak integral of gamma over [s,t] (sign flips when s > t): closed forms
// for Constant/Power pieces, componentwise adaptive quadrature otherwise.
// Gaps between pieces carry no mass.
Vec weak_integral(const PiecewiseCurve& gamma, double s, double t,
                  const QuadratureConfig& cfg = {});

// Absolutely continuous curve eta(t) = start + int_a^t gamma, determined by
// the pair (start, derivative class). Evaluation reuses a monotone prefix
// cache keyed to the derivative's piece boundaries, so repeated evals only
// integrate the final partial piece.
class ACCurve {
 public:
  ACCurve(Vec start, LpElement deriv);

  const Vec& start() const { return start_; }
  const LpElement& deriv() const { return deriv_; }
  const Interval& domain() const { return deriv_.domain(); }
  int dim() const { return static_cast<int>(start_.size()); }

  // eta(a) == start exactly; throws out-of-domain for t outside [a,b].
  Vec eval(double t) const;

 private:
  Vec start_;
  LpElement deriv_;
  std::vector<double> grid_;  // a, interior piece endpoints, b
  // Prefix integrals over grid_, filled monotonically left to right.
  // Shared across copies: entries are write-once and deterministic.
  std::shared_ptr<std::vector<std::optional<Vec>>> cache_;
  std::shared_ptr<std::mutex> mu_;

  Vec prefix(size_t idx) const;
};

// Central difference (eval(t+h)-eval(t-h))/(2h). `recoverable` is false
// when t is not strictly interior to a derivative piece (jump points form
// the excluded null set; the value is still reported).
struct DerivativeRecovery {
  Vec value;
  bool recoverable = true;
};
DerivativeRecovery derivative_recovery(const ACCurve& eta, double t, double h);

// C^1 map with registered derivative df(x; v), linear in v, plus an
// optional domain predicate.
struct C1Map {
  std::string name;
  int in_dim = 1;
  int out_dim = 1;
  std::function<Vec(const Vec&)> f;
  std::function<Vec(const Vec&, const Vec&)> df;
  std::function<bool(const Vec&)> in_domain;  // null means all of R^in_dim

  static C1Map square(int d);             // componentwise x_i^2
  static C1Map exp_componentwise(int d);  // componentwise exp(x_i)
  static C1Map linear(const Mat& A);
  static C1Map pairing(const Vec& w);     // x -> <x, w>
};

// f o eta with derivative df(eta(t), gamma(t)); sampled range check.
ACCurve pushforward_c1(const C1Map& f, const ACCurve& eta);

// eta o f on [c,d], f the increasing affine map onto [alpha,beta]:
// start = eta(alpha), derivative scaled by (beta-alpha)/(d-c).
ACCurve reparam_affine_ac(const ACCurve& eta, Interval sub, Interval target);

std::vector<ACCurve> split_ac(const ACCurve& eta,
                              const std::vector<double>& partition);
// Requires consecutive endpoint values to match within
// 1e-9 * (1 + |endpoint|); otherwise throws discontinuous-junction.
ACCurve glue_ac(const std::vector<ACCurve>& parts);

// sup_t q(eta(t)) together with the a-priori bound
// q(start) + (b-a)^(1-1/p) * ||eta'||_{L^p,q}; sup <= bound up to tolerance.
struct UniformBound {
  double sup;
  double bound;
};
UniformBound uniform_seminorm(const ACCurve& eta, const Seminorm& q);

// True iff all prefix weak integrals vanish (dense grid); equivalent to
// gamma = 0 almost everywhere.
bool ae_zero_by_integrals(const PiecewiseCurve& gamma, double tol = 1e-10);

}  // namespace lieac
