#pragma once

#include "lieac/group_curve.hpp"

namespace lieac {

enum class EvolMethod { ExactStep, ExpMidpoint, CF4 };

const char* evol_method_name(EvolMethod m);
EvolMethod evol_method_from_name(const std::string& name);

struct EvolConfig {
  int n_subdivisions = 8;
  EvolMethod method = EvolMethod::CF4;
  QuadratureConfig quad;
  double residual_tol = 1e-8;
  int max_refine = 8;

  void validate() const {
    require(n_subdivisions >= 1 && residual_tol > 0.0 && max_refine >= 0,
            ErrorCode::InvalidParameter, "bad evolve configuration");
  }
};

struct CellDiagnostic {
  Interval cell{0.0, 1.0};
  double step_distance = 0.0;  // ||S_j - I||_F of the local step
};

struct EvolResult {
  GroupACCurve curve;
  double residual = 0.0;
  int refinements_used = 0;
  std::vector<CellDiagnostic> cells;
};

// Solves the left logarithmic-derivative equation delta(eta) = gamma,
// eta(a) = identity, for an algebra-valued control (flattened n x n). The
// cell grid refines both the uniform n-subdivision and gamma's breakpoints,
// with geometric grading toward integrable singular endpoints; constant
// cells are solved exactly, other cells by the configured exponential
// scheme. Cells halve until residual <= residual_tol or max_refine is
// exhausted (then throws no-convergence).
EvolResult evolve(const GroupPtr& G, const LpElement& gamma,
                  const EvolConfig& cfg);

GroupElement evol_endpoint(const GroupPtr& G, const LpElement& gamma,
                           const EvolConfig& cfg);

// Discretized defect of delta(eta) = gamma, eta(a) = e: telescoped per-cell
// flow mismatch against an adaptively refined local reference flow, plus
// the initial-condition error ||eta(a) - I||_F. Zero (to rounding) for
// exact solutions; decreases at the scheme's order under grid refinement.
double residual(const GroupACCurve& eta, const LpElement& gamma);

// Central difference (evol(gamma + h d) - evol(gamma - h d)) / (2h) in the
// ambient matrix space.
Mat directional_derivative_evol(const GroupPtr& G, const LpElement& gamma,
                                const PiecewiseCurve& direction, double h,
                                const EvolConfig& cfg);

struct ConsistencyReport {
  double sup_distance = 0.0;
  double residual_low = 0.0;   // residual under the smaller exponent
  double residual_high = 0.0;  // residual under the larger exponent
};

// Evolves a continuous control under two exponent bookkeepings; the
// trajectories must agree (same solver). Throws invalid-input for
// discontinuous controls, invalid-parameter unless q >= p.
ConsistencyReport lp_lq_consistency(const GroupPtr& G,
                                    const PiecewiseCurve& control,
                                    const Exponent& p, const Exponent& q,
                                    const EvolConfig& cfg);

}  // namespace lieac
