#pragma once

#include <Eigen/Core>
#include <functional>
#include <limits>

#include "lieac/errors.hpp"
#include "lieac/interval.hpp"

namespace lieac {

struct QuadratureConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_depth = 48;  // bisection generations per original interval

  QuadratureConfig() = default;
  QuadratureConfig(double at, double rt, int md)
      : abs_tol(at), rel_tol(rt), max_depth(md) {
    require(at > 0 && rt > 0 && md > 0, ErrorCode::InvalidParameter,
            "quadrature tolerances must be positive");
  }
};

struct QuadratureResult {
  Eigen::VectorXd value;
  double error_estimate = 0.0;
  bool converged = true;
};

// Adaptive bisection on a Gauss-Legendre 7/15 pair (Kronrod-style error
// estimate |I15 - I7|); worst-interval-first refinement.
QuadratureResult integrate_adaptive(
    const std::function<Eigen::VectorXd(double)>& f, int dim, double a,
    double b, const QuadratureConfig& cfg);

double integrate_adaptive_scalar(const std::function<double(double)>& f,
                                 double a, double b,
                                 const QuadratureConfig& cfg,
                                 bool* converged = nullptr);

// Supremum of a continuous scalar function over [a,b]: Chebyshev sampling
// (init_samples points) followed by local bracket refinement around the best
// sample. Parallel over samples when the global switch is on; the reduction
// order is fixed, so serial and parallel results agree bitwise.
double sup_scan(const std::function<double(double)>& f, double a, double b,
                int init_samples = 257, int refine_rounds = 64);

// Closed forms for symbolic power pieces: integrals of |t-o|^e and of
// (t-o)*|t-o|^e over [alpha,beta] lying on one side of o (touching allowed).
// Returns +inf when the integral diverges (e <= -1 with the interval
// touching o).
double power_abs_integral(double e, double o, double alpha, double beta);
double power_signed_integral(double e, double o, double alpha, double beta);

}  // namespace lieac
