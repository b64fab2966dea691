#include "lieac/group_curve.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <set>

namespace lieac {

namespace {


std::vector<double> refinement_points(const PiecewiseCurve& x,
                                      const PiecewiseCurve& y) {
  std::set<double> cuts{x.domain().a, x.domain().b};
  for (const auto& c : {std::cref(x), std::cref(y)})
    for (const auto& p : c.get().pieces()) {
      cuts.insert(p.support.a);
      cuts.insert(p.support.b);
    }
  return {cuts.begin(), cuts.end()};
}

}  // namespace

GroupACCurve::GroupACCurve(GroupPtr group, Interval domain, Exponent p,
                           QuadratureConfig quad,
                           std::function<Mat(double)> value,
                           PiecewiseCurve dot_rep,
                           std::optional<LpElement> stored_delta,
                           std::vector<double> cell_hints)
    : group_(std::move(group)),
      value_(std::move(value)),
      mat_curve_(flatten(value_(domain.a)),
                 LpElement::certified(std::move(dot_rep), p, quad)),
      delta_cache_(std::make_shared<std::optional<LpElement>>(
          std::move(stored_delta))),
      delta_mu_(std::make_shared<std::mutex>()),
      cell_hints_(std::move(cell_hints)) {
  require(group_ != nullptr, ErrorCode::InvalidParameter, "null group");
  require(mat_curve_.dim() == group_->n * group_->n,
          ErrorCode::InvalidParameter, "curve/group dimension mismatch");
  for (int i = 0; i < 5; ++i) {
    const double t = domain.a + domain.length() * i / 4.0;
    require(group_->member(value_(t)), ErrorCode::InvalidInput,
            "curve leaves " + group_->name + " at t=" + std::to_string(t));
  }
}

GroupACCurve GroupACCurve::from_exp(const AlgebraElement& A, Interval domain,
                                    Exponent p, QuadratureConfig quad) {
  const GroupPtr g = A.group;
  const Mat Am = A.mat;
  const double a = domain.a;
  auto value = [g, Am, a](double t) {
    return exp_alg(AlgebraElement{g, (t - a) * Am}).mat;
  };
  const int n = g->n;
  PiecewiseCurve dot_rep(
      domain, n * n,
      {Piece::generic(domain,
                      [value, Am, n](double t) {
                        return flatten(value(t) * Am);
                      })},
      Vec::Zero(n * n));
  PiecewiseCurve delta_rep = PiecewiseCurve::constant(
      domain, flatten(Am));
  return GroupACCurve(g, domain, p, quad, value, std::move(dot_rep),
                      LpElement(std::move(delta_rep), p, quad));
}

GroupACCurve GroupACCurve::constant(const GroupElement& g, Interval domain,
                                    Exponent p, QuadratureConfig quad) {
  const int n = g.group->n;
  Mat m = g.mat;
  PiecewiseCurve dot_rep(
      domain, n * n, {Piece::constant(domain, Vec::Zero(n * n))},
      Vec::Zero(n * n));
  PiecewiseCurve delta_rep(
      domain, n * n, {Piece::constant(domain, Vec::Zero(n * n))},
      Vec::Zero(n * n));
  return GroupACCurve(g.group, domain, p, quad,
                      [m](double) { return m; }, std::move(dot_rep),
                      LpElement(std::move(delta_rep), p, quad));
}

Mat GroupACCurve::value(double t) const { return value_(t); }

PiecewiseCurve dot(const GroupACCurve& eta) {
  return eta.mat_curve().deriv().rep();
}

LpElement delta(const GroupACCurve& eta) {
  {
    std::lock_guard<std::mutex> lock(*eta.delta_mu_);
    if (eta.delta_cache_->has_value()) return **eta.delta_cache_;
  }
  const int n = eta.group()->n;
  const PiecewiseCurve dots = dot(eta);
  auto value = eta.value_;
  std::vector<Piece> ps;
  for (const auto& p : dots.pieces()) {
    auto pe = p;
    ps.push_back(Piece::generic(p.support, [value, pe, n](double t) {
      const Mat d = unflatten(pe.eval(t), n);
      return flatten(value(t).partialPivLu().solve(d));
    }));
  }
  PiecewiseCurve rep(dots.domain(), n * n, std::move(ps), Vec::Zero(n * n));
  for (const auto& p : rep.pieces())
    for (int i = 1; i <= 7; ++i) {
      const double t =
          p.support.a + p.support.length() * i / 8.0;
      require(eta.group()->in_algebra(unflatten(p.eval(t), n)),
              ErrorCode::InconsistentCurve,
              "logarithmic derivative misses the algebra predicate");
    }
  LpElement out = LpElement::certified(std::move(rep), eta.p(), eta.quad());
  std::lock_guard<std::mutex> lock(*eta.delta_mu_);
  if (!eta.delta_cache_->has_value()) *eta.delta_cache_ = out;
  return **eta.delta_cache_;
}

GroupACCurve product(const GroupACCurve& eta, const GroupACCurve& zeta) {
  require(eta.group()->name == zeta.group()->name &&
              eta.group()->n == zeta.group()->n,
          ErrorCode::Incompatible, "product needs matching groups");
  require(eta.domain() == zeta.domain(), ErrorCode::IncompatibleDomains,
          "product needs matching domains");
  const int n = eta.group()->n;
  auto ev = [eta, zeta](double t) { return Mat(eta.value(t) * zeta.value(t)); };
  const auto de = std::make_shared<PiecewiseCurve>(dot(eta));
  const auto dz = std::make_shared<PiecewiseCurve>(dot(zeta));
  const std::vector<double> ts = refinement_points(*de, *dz);
  std::vector<Piece> ps;
  for (size_t i = 0; i + 1 < ts.size(); ++i) {
    const Interval cell(ts[i], ts[i + 1]);
    const double mid = 0.5 * (cell.a + cell.b);
    if (!de->piece_at(mid) && !dz->piece_at(mid)) continue;
    ps.push_back(Piece::generic(cell, [eta, zeta, de, dz, n](double t) {
      const Mat ed = unflatten(de->eval(t), n);
      const Mat zd = unflatten(dz->eval(t), n);
      return flatten(ed * zeta.value(t) + eta.value(t) * zd);
    }));
  }
  PiecewiseCurve dot_rep(eta.domain(), n * n, std::move(ps),
                         Vec::Zero(n * n));
  return GroupACCurve(eta.group(), eta.domain(), eta.p(), eta.quad(), ev,
                      std::move(dot_rep));
}

GroupACCurve inverse(const GroupACCurve& eta) {
  const int n = eta.group()->n;
  auto inv = [eta, n](double t) {
    const Mat m = eta.value(t);
    const Mat r = m.partialPivLu().solve(Mat::Identity(n, n));
    require(r.allFinite(), ErrorCode::NumericalSingularity,
            "curve value is numerically singular");
    return r;
  };
  const auto de = std::make_shared<PiecewiseCurve>(dot(eta));
  std::vector<Piece> ps;
  for (const auto& p : de->pieces()) {
    auto pe = p;
    ps.push_back(Piece::generic(p.support, [inv, pe, n](double t) {
      const Mat b = inv(t);
      const Mat d = unflatten(pe.eval(t), n);
      return flatten(Mat(-b * d * b));
    }));
  }
  PiecewiseCurve dot_rep(eta.domain(), n * n, std::move(ps),
                         Vec::Zero(n * n));
  return GroupACCurve(eta.group(), eta.domain(), eta.p(), eta.quad(), inv,
                      std::move(dot_rep));
}

LpElement delta_homomorphism(const Homomorphism& f, const GroupACCurve& eta) {
  require(f.source->name == eta.group()->name, ErrorCode::Incompatible,
          "homomorphism source does not match the curve's group");
  const int ns = f.source->n, nt = f.target->n;
  const LpElement d = delta(eta);
  auto L = f.algebra_map;
  PiecewiseCurve rep = d.rep().map_linear(
      [L, ns](const Vec& v) {
        return flatten(L(unflatten(v, ns)));
      },
      nt * nt);
  return LpElement::certified(std::move(rep), eta.p(), eta.quad());
}

GroupACCurve reparam_group(const GroupACCurve& eta, Interval sub,
                           Interval target) {
  const double slope = sub.length() / target.length();
  const double alpha = sub.a, c = target.a;
  auto fwd = [alpha, c, slope, sub](double t) {
    return sub.clamp(alpha + (t - c) * slope);
  };
  auto ev = [eta, fwd](double t) { return eta.value(fwd(t)); };
  PiecewiseCurve dot_rep =
      reparam_affine(dot(eta), sub, target).scaled(slope);
  return GroupACCurve(eta.group(), target, eta.p(), eta.quad(), ev,
                      std::move(dot_rep));
}

GroupElement eval_group(const GroupACCurve& eta, double t) {
  const double tol = 1e-12 * std::max(1.0, eta.domain().length());
  require(eta.domain().contains(t, tol), ErrorCode::OutOfDomain,
          "evaluation point outside the domain");
  return make_element(eta.group(), eta.value(eta.domain().clamp(t)));
}

std::vector<GroupACCurve> split_group(const GroupACCurve& eta,
                                      const std::vector<double>& partition) {
  const std::vector<PiecewiseCurve> reps = split(dot(eta), partition);
  std::vector<GroupACCurve> parts;
  parts.reserve(reps.size());
  for (const auto& rep : reps)
    parts.push_back(GroupACCurve(
        eta.group(), rep.domain(), eta.p(), eta.quad(),
        [copy = eta](double t) { return copy.value(t); }, rep));
  return parts;
}

GroupACCurve glue_group(const std::vector<GroupACCurve>& parts) {
  require(!parts.empty(), ErrorCode::InvalidParameter, "nothing to glue");
  for (size_t i = 0; i + 1 < parts.size(); ++i) {
    require(parts[i].group()->name == parts[i + 1].group()->name,
            ErrorCode::Incompatible, "glue needs matching groups");
    const Mat left = parts[i].value(parts[i].domain().b);
    const Mat right = parts[i + 1].value(parts[i + 1].domain().a);
    require((left - right).norm() <= 1e-9 * (1.0 + left.norm()),
            ErrorCode::DiscontinuousJunction,
            "glued curves disagree at a junction");
  }
  std::vector<PiecewiseCurve> reps;
  std::vector<double> ends;
  for (const auto& part : parts) {
    reps.push_back(dot(part));
    ends.push_back(part.domain().b);
  }
  auto list = std::make_shared<std::vector<GroupACCurve>>(parts);
  auto bounds = std::make_shared<std::vector<double>>(ends);
  auto ev = [list, bounds](double t) {
    size_t i = 0;
    while (i + 1 < bounds->size() && t > (*bounds)[i]) ++i;
    return (*list)[i].value(t);
  };
  PiecewiseCurve dot_rep = glue(reps);
  const Interval dom = dot_rep.domain();
  return GroupACCurve(parts.front().group(), dom, parts.front().p(),
                      parts.front().quad(), ev, std::move(dot_rep));
}

}  // namespace lieac
