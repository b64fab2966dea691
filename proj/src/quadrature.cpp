#include "lieac/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "lieac/parallel.hpp"

namespace lieac {

namespace {

struct Rule {
  std::vector<double> nodes;    // on [-1,1]
  std::vector<double> weights;
};

// Gauss-Legendre nodes by Newton iteration on P_n; standard and fully
// deterministic, accurate to machine precision for small n.
Rule gauss_legendre(int n) {
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.nodes[k] = x;
    r.weights[k] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

const Rule& rule7() {
  static const Rule r = gauss_legendre(7);
  return r;
}
const Rule& rule15() {
  static const Rule r = gauss_legendre(15);
  return r;
}

struct Segment {
  double a, b;
  Eigen::VectorXd val;   // GL15 value
  double err;            // |GL15 - GL7| combined over components
  int depth;
};

struct SegmentWorse {
  bool operator()(const Segment& x, const Segment& y) const {
    return x.err < y.err;
  }
};

Segment eval_segment(const std::function<Eigen::VectorXd(double)>& f, int dim,
                     double a, double b, int depth) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  Eigen::VectorXd i7 = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd i15 = Eigen::VectorXd::Zero(dim);
  const Rule& r7 = rule7();
  const Rule& r15 = rule15();
  for (int k = 0; k < 7; ++k)
    i7 += r7.weights[k] * f(mid + half * r7.nodes[k]);
  for (int k = 0; k < 15; ++k)
    i15 += r15.weights[k] * f(mid + half * r15.nodes[k]);
  i7 *= half;
  i15 *= half;
  Segment s;
  s.a = a;
  s.b = b;
  s.val = i15;
  s.err = (i15 - i7).cwiseAbs().maxCoeff();
  s.depth = depth;
  return s;
}

}  // namespace

QuadratureResult integrate_adaptive(
    const std::function<Eigen::VectorXd(double)>& f, int dim, double a,
    double b, const QuadratureConfig& cfg) {
  QuadratureResult out;
  out.value = Eigen::VectorXd::Zero(dim);
  if (a == b) return out;
  require(a < b, ErrorCode::InvalidParameter, "integrate needs a <= b");

  std::priority_queue<Segment, std::vector<Segment>, SegmentWorse> heap;
  heap.push(eval_segment(f, dim, a, b, 0));
  Eigen::VectorXd total = heap.top().val;
  double total_err = heap.top().err;
  const int max_segments = 4096;
  int n_segments = 1;
  while (true) {
    const double tol =
        std::max(cfg.abs_tol, cfg.rel_tol * total.cwiseAbs().maxCoeff());
    if (total_err <= tol) break;
    const Segment worst = heap.top();
    if (worst.depth >= cfg.max_depth || n_segments >= max_segments) {
      out.converged = false;
      break;
    }
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Segment l = eval_segment(f, dim, worst.a, mid, worst.depth + 1);
    Segment r = eval_segment(f, dim, mid, worst.b, worst.depth + 1);
    total += l.val + r.val - worst.val;
    total_err += l.err + r.err - worst.err;
    heap.push(std::move(l));
    heap.push(std::move(r));
    ++n_segments;
  }
  // Fixed-order final sum for reproducibility independent of heap order.
  std::vector<Segment> segs;
  while (!heap.empty()) {
    segs.push_back(heap.top());
    heap.pop();
  }
  std::sort(segs.begin(), segs.end(),
            [](const Segment& x, const Segment& y) { return x.a < y.a; });
  out.value = Eigen::VectorXd::Zero(dim);
  out.error_estimate = 0.0;
  for (const auto& s : segs) {
    out.value += s.val;
    out.error_estimate += s.err;
  }
  return out;
}

double integrate_adaptive_scalar(const std::function<double(double)>& f,
                                 double a, double b,
                                 const QuadratureConfig& cfg, bool* converged) {
  const double sign = a <= b ? 1.0 : -1.0;
  const double lo = std::min(a, b), hi = std::max(a, b);
  QuadratureResult r = integrate_adaptive(
      [&f](double t) {
        Eigen::VectorXd v(1);
        v[0] = f(t);
        return v;
      },
      1, lo, hi, cfg);
  if (converged) *converged = r.converged;
  return sign * r.value[0];
}

double sup_scan(const std::function<double(double)>& f, double a, double b,
                int init_samples, int refine_rounds) {
  require(init_samples >= 3, ErrorCode::InvalidParameter,
          "sup_scan needs at least 3 samples");
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const int n = init_samples;
  std::vector<double> ts(n), vs(n);
  for (int i = 0; i < n; ++i)
    ts[i] = mid + half * std::cos(M_PI * i / (n - 1));
  par::parallel_for(n, [&](int i) { vs[i] = f(ts[i]); });
  int best = 0;
  for (int i = 1; i < n; ++i)
    if (vs[i] > vs[best]) best = i;
  // Local refinement: shrink a three-point bracket around the best sample.
  // Chebyshev nodes are sorted descending in t; neighbors are best+-1.
  double lo = best + 1 < n ? ts[best + 1] : ts[best];
  double hi = best > 0 ? ts[best - 1] : ts[best];
  double xm = ts[best], fm = vs[best];
  for (int round = 0; round < refine_rounds; ++round) {
    const double x1 = 0.5 * (lo + xm);
    const double x2 = 0.5 * (xm + hi);
    const double f1 = f(x1), f2 = f(x2);
    if (f1 >= fm && f1 >= f2) {
      hi = xm;
      xm = x1;
      fm = f1;
    } else if (f2 >= fm) {
      lo = xm;
      xm = x2;
      fm = f2;
    } else {
      lo = x1;
      hi = x2;
    }
    if (hi - lo < 1e-14 * std::max(1.0, std::abs(xm))) break;
  }
  return fm;
}

double power_abs_integral(double e, double o, double alpha, double beta) {
  require(alpha <= beta, ErrorCode::InvalidParameter, "needs alpha <= beta");
  require(o <= alpha || o >= beta, ErrorCode::InvalidParameter,
          "power integral interval must lie on one side of the origin");
  if (alpha == beta) return 0.0;
  const double ua = std::abs(alpha - o), ub = std::abs(beta - o);
  const double lo = std::min(ua, ub), hi = std::max(ua, ub);
  if (e <= -1.0 && lo == 0.0) return std::numeric_limits<double>::infinity();
  if (e == -1.0) return std::log(hi) - std::log(lo);
  // antiderivative u^{e+1}/(e+1) on u in [lo,hi]
  return (std::pow(hi, e + 1.0) - std::pow(lo, e + 1.0)) / (e + 1.0);
}

double power_signed_integral(double e, double o, double alpha, double beta) {
  require(alpha <= beta, ErrorCode::InvalidParameter, "needs alpha <= beta");
  require(o <= alpha || o >= beta, ErrorCode::InvalidParameter,
          "power integral interval must lie on one side of the origin");
  if (alpha == beta) return 0.0;
  const double ua = std::abs(alpha - o), ub = std::abs(beta - o);
  const double lo = std::min(ua, ub), hi = std::max(ua, ub);
  if (e <= -2.0 && lo == 0.0) return std::numeric_limits<double>::infinity();
  // integral of u^{e+1} du, signed by which side of o the interval sits on
  const double m = (std::pow(hi, e + 2.0) - std::pow(lo, e + 2.0)) / (e + 2.0);
  return (o <= alpha) ? m : -m;
}

}  // namespace lieac
