#include "lieac/ac_curve.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lieac/parallel.hpp"

namespace lieac {

Vec weak_integral(const PiecewiseCurve& gamma, double s, double t,
                  const QuadratureConfig& cfg) {
  const double tol = 1e-12 * std::max(1.0, gamma.domain().length());
  require(gamma.domain().contains(s, tol) && gamma.domain().contains(t, tol),
          ErrorCode::OutOfDomain, "weak integral limits outside the domain");
  Vec acc = Vec::Zero(gamma.dim());
  if (s == t) return acc;
  const double sign = (s < t) ? 1.0 : -1.0;
  const double lo = std::min(s, t), hi = std::max(s, t);
  for (const auto& p : gamma.pieces()) {
    const double a2 = std::max(lo, p.support.a);
    const double b2 = std::min(hi, p.support.b);
    if (b2 <= a2) continue;
    switch (p.kind) {
      case Piece::Kind::Constant:
        acc += (b2 - a2) * p.value;
        break;
      case Piece::Kind::Power: {
        const double m = power_abs_integral(p.expo, p.origin, a2, b2);
        if (std::isinf(m))
          fail(ErrorCode::NotInLp, "power piece not integrable on the range");
        acc += m * p.value;
        break;
      }
      case Piece::Kind::Generic: {
        const QuadratureResult r =
            integrate_adaptive(p.f, gamma.dim(), a2, b2, cfg);
        if (!r.converged)
          fail(ErrorCode::NumericalSingularity,
               "quadrature failed to converge on a generic piece");
        acc += r.value;
        break;
      }
    }
  }
  return sign * acc;
}

ACCurve::ACCurve(Vec start, LpElement deriv)
    : start_(std::move(start)), deriv_(std::move(deriv)) {
  require(start_.size() == deriv_.rep().dim(), ErrorCode::InvalidParameter,
          "start/derivative dimension mismatch");
  std::set<double> grid{domain().a, domain().b};
  for (const auto& p : deriv_.rep().pieces()) {
    grid.insert(p.support.a);
    grid.insert(p.support.b);
  }
  grid_.assign(grid.begin(), grid.end());
  cache_ = std::make_shared<std::vector<std::optional<Vec>>>(grid_.size());
  mu_ = std::make_shared<std::mutex>();
  (*cache_)[0] = Vec::Zero(dim());
}

Vec ACCurve::prefix(size_t idx) const {
  std::lock_guard<std::mutex> lock(*mu_);
  size_t last = idx;
  while (!(*cache_)[last]) --last;
  for (size_t j = last + 1; j <= idx; ++j)
    (*cache_)[j] = *(*cache_)[j - 1] +
                   weak_integral(deriv_.rep(), grid_[j - 1], grid_[j],
                                 deriv_.quad());
  return *(*cache_)[idx];
}

Vec ACCurve::eval(double t) const {
  const double tol = 1e-12 * std::max(1.0, domain().length());
  require(domain().contains(t, tol), ErrorCode::OutOfDomain,
          "evaluation point outside the domain");
  t = domain().clamp(t);
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
  const size_t idx = static_cast<size_t>(it - grid_.begin()) - 1;
  Vec v = start_ + prefix(idx);
  if (t > grid_[idx])
    v += weak_integral(deriv_.rep(), grid_[idx], t, deriv_.quad());
  return v;
}

DerivativeRecovery derivative_recovery(const ACCurve& eta, double t,
                                       double h) {
  require(h > 0.0, ErrorCode::InvalidParameter, "step h must be positive");
  require(t - h >= eta.domain().a && t + h <= eta.domain().b,
          ErrorCode::OutOfDomain, "stencil leaves the domain");
  DerivativeRecovery out;
  out.value = (eta.eval(t + h) - eta.eval(t - h)) / (2.0 * h);
  out.recoverable = false;
  for (const auto& p : eta.deriv().rep().pieces())
    if (p.support.a < t && t < p.support.b) out.recoverable = true;
  return out;
}

C1Map C1Map::square(int d) {
  C1Map m;
  m.name = "square";
  m.in_dim = m.out_dim = d;
  m.f = [](const Vec& x) { return Vec(x.cwiseProduct(x)); };
  m.df = [](const Vec& x, const Vec& v) { return Vec(2.0 * x.cwiseProduct(v)); };
  return m;
}

C1Map C1Map::exp_componentwise(int d) {
  C1Map m;
  m.name = "exp-componentwise";
  m.in_dim = m.out_dim = d;
  m.f = [](const Vec& x) { return Vec(x.array().exp().matrix()); };
  m.df = [](const Vec& x, const Vec& v) {
    return Vec(x.array().exp().matrix().cwiseProduct(v));
  };
  return m;
}

C1Map C1Map::linear(const Mat& A) {
  C1Map m;
  m.name = "linear";
  m.in_dim = static_cast<int>(A.cols());
  m.out_dim = static_cast<int>(A.rows());
  Mat Ac = A;
  m.f = [Ac](const Vec& x) { return Vec(Ac * x); };
  m.df = [Ac](const Vec&, const Vec& v) { return Vec(Ac * v); };
  return m;
}

C1Map C1Map::pairing(const Vec& w) {
  C1Map m;
  m.name = "pairing";
  m.in_dim = static_cast<int>(w.size());
  m.out_dim = 1;
  Vec wc = w;
  m.f = [wc](const Vec& x) {
    Vec out(1);
    out[0] = x.dot(wc);
    return out;
  };
  m.df = [wc](const Vec&, const Vec& v) {
    Vec out(1);
    out[0] = v.dot(wc);
    return out;
  };
  return m;
}

ACCurve pushforward_c1(const C1Map& f, const ACCurve& eta) {
  require(f.in_dim == eta.dim(), ErrorCode::InvalidParameter,
          "map/curve dimension mismatch");
  FiberLinearMap fl;
  fl.name = f.name;
  fl.u_dim = f.in_dim;
  fl.v_dim = f.in_dim;
  fl.out_dim = f.out_dim;
  auto df = f.df;
  fl.f = [df](const Vec& u, const Vec& v) { return df(u, v); };
  fl.in_domain = f.in_domain;
  ContinuousCurve base{eta.domain(), eta.dim(),
                       [eta](double t) { return eta.eval(t); }};
  PiecewiseCurve rep =
      pushforward_fiberlinear(fl, base, eta.deriv().rep());
  return ACCurve(f.f(eta.start()),
                 LpElement(std::move(rep), eta.deriv().p(), eta.deriv().quad()));
}

ACCurve reparam_affine_ac(const ACCurve& eta, Interval sub, Interval target) {
  const double slope = sub.length() / target.length();
  PiecewiseCurve rep =
      reparam_affine(eta.deriv().rep(), sub, target).scaled(slope);
  return ACCurve(eta.eval(sub.a),
                 LpElement(std::move(rep), eta.deriv().p(), eta.deriv().quad()));
}

std::vector<ACCurve> split_ac(const ACCurve& eta,
                              const std::vector<double>& partition) {
  const std::vector<PiecewiseCurve> reps = split(eta.deriv().rep(), partition);
  std::vector<ACCurve> parts;
  parts.reserve(reps.size());
  for (const auto& rep : reps) {
    const Vec s = eta.eval(rep.domain().a);
    parts.emplace_back(s, LpElement(rep, eta.deriv().p(), eta.deriv().quad()));
  }
  return parts;
}

ACCurve glue_ac(const std::vector<ACCurve>& parts) {
  require(!parts.empty(), ErrorCode::InvalidParameter, "nothing to glue");
  std::vector<PiecewiseCurve> reps;
  for (size_t i = 0; i + 1 < parts.size(); ++i) {
    const Vec left = parts[i].eval(parts[i].domain().b);
    const Vec right = parts[i + 1].start();
    const double match_tol = 1e-9 * (1.0 + left.norm());
    require((left - right).norm() <= match_tol,
            ErrorCode::DiscontinuousJunction,
            "glued parts disagree at a junction");
  }
  for (const auto& part : parts) reps.push_back(part.deriv().rep());
  return ACCurve(parts.front().start(),
                 LpElement(glue(reps), parts.front().deriv().p(),
                           parts.front().deriv().quad()));
}

UniformBound uniform_seminorm(const ACCurve& eta, const Seminorm& q) {
  UniformBound out;
  out.sup = sup_scan([&](double t) { return q(eta.eval(t)); },
                     eta.domain().a, eta.domain().b);
  const double len = eta.domain().length();
  out.bound = q(eta.start()) +
              std::pow(len, 1.0 - eta.deriv().p().inv()) *
                  eta.deriv().seminorm(q);
  return out;
}

bool ae_zero_by_integrals(const PiecewiseCurve& gamma, double tol) {
  const int n = 201;
  const double a = gamma.domain().a, len = gamma.domain().length();
  std::vector<char> ok(n, 1);
  par::parallel_for(n, [&](int i) {
    const double t = a + len * i / (n - 1);
    ok[i] = weak_integral(gamma, a, t).norm() <= tol;
  });
  return std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
}

}  // namespace lieac
