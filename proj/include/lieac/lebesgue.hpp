#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "lieac/exponent.hpp"
#include "lieac/piecewise.hpp"
#include "lieac/quadrature.hpp"

namespace lieac {

// ||gamma||_{L^p,q}: per-piece adaptive quadrature of (q o gamma)^p, closed
// forms for Constant/Power pieces; p = inf is the max of per-piece suprema.
// Throws not-in-Lp on genuine divergence (detected exactly for Power
// pieces), numerical-singularity when quadrature exhausts depth on a
// nominally finite piece.
double lp_seminorm(const PiecewiseCurve& gamma, const Seminorm& q,
                   const Exponent& p, const QuadratureConfig& cfg = {});

// A.e. class of a curve with exponent bookkeeping and cached seminorms.
class LpElement {
 public:
  LpElement(PiecewiseCurve rep, Exponent p, QuadratureConfig quad = {});

  // Membership vouched for by the caller: solver-built derivative classes
  // are a bounded continuous factor times an already-certified control,
  // and their eager membership quadrature may stall on inherited
  // integrable singularities. Skips the constructor's seminorm gate.
  static LpElement certified(PiecewiseCurve rep, Exponent p,
                             QuadratureConfig quad = {});

  const PiecewiseCurve& rep() const { return rep_; }
  const Exponent& p() const { return p_; }
  const Interval& domain() const { return rep_.domain(); }
  const QuadratureConfig& quad() const { return quad_; }

  // Cached; concurrent calls may race to compute the same key and store
  // identical values (the computation is deterministic).
  double seminorm(const Seminorm& q) const;

  bool ae_equal_to(const LpElement& other, double tol) const {
    return ae_equal(rep_, other.rep_, tol);
  }

 private:
  PiecewiseCurve rep_;
  Exponent p_;
  QuadratureConfig quad_;
  struct certified_tag {};
  LpElement(certified_tag, PiecewiseCurve rep, Exponent p,
            QuadratureConfig quad);

  std::shared_ptr<std::map<std::string, double>> cache_;
  std::shared_ptr<std::mutex> mu_;
};

// Both sides of ||gamma||_{p,q} <= (b-a)^{1/p-1/r} ||gamma||_{r,q}, r >= p.
struct InclusionSides {
  double lhs;
  double rhs;
};
InclusionSides inclusion_check(const LpElement& gamma, const Exponent& r,
                               const Seminorm& q);

// gamma o f on [c,d] where f is the increasing affine map [c,d] -> [alpha,beta].
PiecewiseCurve reparam_affine(const PiecewiseCurve& gamma, Interval sub,
                              Interval target);

std::vector<PiecewiseCurve> split(const PiecewiseCurve& gamma,
                                  const std::vector<double>& partition);
PiecewiseCurve glue(const std::vector<PiecewiseCurve>& parts);

// gamma_{n,k}(t) = (1/n) gamma(a + (k(b-a)+t-a)/n), each on the original
// domain; max_k L^p norms obey the subdivision bounds.
std::vector<PiecewiseCurve> subdivide(const PiecewiseCurve& gamma, int n);

// Map U x R^{d2} -> R^m, linear in the second slot, with an optional
// registered derivative df(u,v,ubar,vbar) and a U-membership predicate.
struct FiberLinearMap {
  std::string name;
  int u_dim = 1;
  int v_dim = 1;
  int out_dim = 1;
  std::function<Vec(const Vec&, const Vec&)> f;
  bool has_df = false;
  std::function<Vec(const Vec&, const Vec&, const Vec&, const Vec&)> df;
  std::function<bool(const Vec&)> in_domain;  // null means all of R^{u_dim}

  static FiberLinearMap projection(int v_dim);
  static FiberLinearMap scalar_multiply(int v_dim);   // f(u,v) = u[0] * v
  static FiberLinearMap square_scale(int v_dim);      // f(u,v) = u[0]^2 * v
  static FiberLinearMap linear(const Mat& A);         // f(u,v) = A v
};

// Continuous curve input for the base slot of fiber-linear maps.
struct ContinuousCurve {
  Interval domain{0.0, 1.0};
  int dim = 1;
  std::function<Vec(double)> f;
};

// Pointwise f(eta(t), gamma(t)) over gamma's pieces.
PiecewiseCurve pushforward_fiberlinear(const FiberLinearMap& f,
                                       const ContinuousCurve& eta,
                                       const PiecewiseCurve& gamma);

// df o (eta, gamma, eta_bar, gamma_bar) over the common refinement.
PiecewiseCurve theta_directional_derivative(const FiberLinearMap& f,
                                            const ContinuousCurve& eta,
                                            const PiecewiseCurve& gamma,
                                            const ContinuousCurve& eta_bar,
                                            const PiecewiseCurve& gamma_bar);

}  // namespace lieac
