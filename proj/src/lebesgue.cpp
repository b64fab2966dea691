#include "lieac/lebesgue.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "lieac/parallel.hpp"

namespace lieac {

namespace {

// sup of q(piece values) over the support; +inf when the piece is singular.
double piece_sup(const Piece& piece, const Seminorm& q) {
  switch (piece.kind) {
    case Piece::Kind::Constant:
      return q(piece.value);
    case Piece::Kind::Power: {
      const double qc = q(piece.value);
      if (qc == 0.0) return 0.0;
      const double ua = std::abs(piece.support.a - piece.origin);
      const double ub = std::abs(piece.support.b - piece.origin);
      const double lo = std::min(ua, ub), hi = std::max(ua, ub);
      if (piece.expo < 0.0) {
        if (lo == 0.0) return std::numeric_limits<double>::infinity();
        return qc * std::pow(lo, piece.expo);
      }
      if (piece.expo == 0.0) return qc;
      return qc * std::pow(hi, piece.expo);
    }
    case Piece::Kind::Generic:
      return sup_scan([&](double t) { return q(piece.eval(t)); },
                      piece.support.a, piece.support.b);
  }
  return 0.0;
}

// integral of q(piece values)^p over the support; +inf on divergence.
double piece_mass(const Piece& piece, const Seminorm& q, double p,
                  const QuadratureConfig& cfg) {
  switch (piece.kind) {
    case Piece::Kind::Constant:
      return std::pow(q(piece.value), p) * piece.support.length();
    case Piece::Kind::Power: {
      const double qc = q(piece.value);
      if (qc == 0.0) return 0.0;
      return std::pow(qc, p) *
             power_abs_integral(piece.expo * p, piece.origin, piece.support.a,
                                piece.support.b);
    }
    case Piece::Kind::Generic: {
      bool ok = true;
      const double m = integrate_adaptive_scalar(
          [&](double t) { return std::pow(q(piece.eval(t)), p); },
          piece.support.a, piece.support.b, cfg, &ok);
      if (!ok)
        fail(ErrorCode::NumericalSingularity,
             "quadrature depth exhausted on piece [" +
                 std::to_string(piece.support.a) + "," +
                 std::to_string(piece.support.b) + "]");
      return m;
    }
  }
  return 0.0;
}

std::string seminorm_key(const Seminorm& q, const Exponent& p) {
  std::string key = q.name() + "|p=" + p.str();
  if (q.kind == Seminorm::Kind::Weighted) {
    char buf[32];
    for (Eigen::Index i = 0; i < q.weights.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,", q.weights[i]);
      key += buf;
    }
  }
  return key;
}

}  // namespace

double lp_seminorm(const PiecewiseCurve& gamma, const Seminorm& q,
                   const Exponent& p, const QuadratureConfig& cfg) {
  require(q.dim == gamma.dim(), ErrorCode::InvalidParameter,
          "seminorm dimension mismatch");
  const auto& pieces = gamma.pieces();
  const int n = static_cast<int>(pieces.size());
  if (p.is_inf) {
    std::vector<double> sups(n, 0.0);
    par::parallel_for(n, [&](int i) { sups[i] = piece_sup(pieces[i], q); });
    double m = 0.0;
    for (double s : sups) m = std::max(m, s);
    if (std::isinf(m))
      fail(ErrorCode::NotInLp, "essential supremum is infinite");
    return m;
  }
  std::vector<double> masses(n, 0.0);
  // Generic-piece quadrature may throw; collect exceptions outside the
  // parallel region by running those serially and the closed forms in bulk.
  par::parallel_for(n, [&](int i) {
    if (pieces[i].kind != Piece::Kind::Generic)
      masses[i] = piece_mass(pieces[i], q, p.value, cfg);
  });
  for (int i = 0; i < n; ++i)
    if (pieces[i].kind == Piece::Kind::Generic)
      masses[i] = piece_mass(pieces[i], q, p.value, cfg);
  double mass = 0.0;
  for (double m : masses) mass += m;
  if (std::isinf(mass))
    fail(ErrorCode::NotInLp, "integral of (q o gamma)^p diverges");
  return std::pow(mass, 1.0 / p.value);
}

LpElement::LpElement(PiecewiseCurve rep, Exponent p, QuadratureConfig quad)
    : LpElement(certified_tag{}, std::move(rep), p, quad) {
  // Membership: the canonical (euclidean) seminorm must be finite.
  const double n = lp_seminorm(rep_, Seminorm::euclidean(rep_.dim()), p_, quad_);
  std::lock_guard<std::mutex> lock(*mu_);
  (*cache_)[seminorm_key(Seminorm::euclidean(rep_.dim()), p_)] = n;
}

LpElement::LpElement(certified_tag, PiecewiseCurve rep, Exponent p,
                     QuadratureConfig quad)
    : rep_(std::move(rep)),
      p_(p),
      quad_(quad),
      cache_(std::make_shared<std::map<std::string, double>>()),
      mu_(std::make_shared<std::mutex>()) {}

LpElement LpElement::certified(PiecewiseCurve rep, Exponent p,
                               QuadratureConfig quad) {
  return LpElement(certified_tag{}, std::move(rep), p, quad);
}

double LpElement::seminorm(const Seminorm& q) const {
  const std::string key = seminorm_key(q, p_);
  {
    std::lock_guard<std::mutex> lock(*mu_);
    auto it = cache_->find(key);
    if (it != cache_->end()) return it->second;
  }
  const double v = lp_seminorm(rep_, q, p_, quad_);
  std::lock_guard<std::mutex> lock(*mu_);
  (*cache_)[key] = v;  // idempotent: recomputation yields the same value
  return v;
}

InclusionSides inclusion_check(const LpElement& gamma, const Exponent& r,
                               const Seminorm& q) {
  require(gamma.p() <= r, ErrorCode::InvalidParameter,
          "inclusion needs r >= p");
  const double lhs = gamma.seminorm(q);
  const double rnorm = lp_seminorm(gamma.rep(), q, r, gamma.quad());
  const double len = gamma.domain().length();
  const double factor = std::pow(len, gamma.p().inv() - r.inv());
  return {lhs, factor * rnorm};
}

PiecewiseCurve reparam_affine(const PiecewiseCurve& gamma, Interval sub,
                              Interval target) {
  require(gamma.domain().contains(sub), ErrorCode::InvalidParameter,
          "sub interval outside domain");
  const double alpha = sub.a, beta = sub.b, c = target.a, d = target.b;
  const double slope = (beta - alpha) / (d - c);
  auto fwd = [=](double t) {  // [c,d] -> [alpha,beta]
    if (t <= c) return alpha;
    if (t >= d) return beta;
    return alpha + (t - c) * slope;
  };
  auto inv = [=](double u) {  // [alpha,beta] -> [c,d]
    if (u <= alpha) return c;
    if (u >= beta) return d;
    return c + (u - alpha) / slope;
  };
  const PiecewiseCurve restricted = gamma.restrict_to(sub);
  std::vector<Piece> ps;
  for (const auto& p : restricted.pieces()) {
    const Interval mapped(inv(p.support.a), inv(p.support.b));
    switch (p.kind) {
      case Piece::Kind::Constant:
        ps.push_back(Piece::constant(mapped, p.value));
        break;
      case Piece::Kind::Power: {
        // coeff |f(t)-o|^e = coeff slope^e |t - inv(o)|^e. Snap the mapped
        // origin to the mapped support edge so rounding cannot push it
        // interior.
        double o2 = c + (p.origin - alpha) / slope;
        o2 = (p.origin <= p.support.a) ? std::min(o2, mapped.a)
                                       : std::max(o2, mapped.b);
        ps.push_back(Piece::power(mapped,
                                  Vec(std::pow(slope, p.expo) * p.value),
                                  p.expo, o2));
        break;
      }
      case Piece::Kind::Generic: {
        auto fn = p.f;
        ps.push_back(
            Piece::generic(mapped, [fn, fwd](double t) { return fn(fwd(t)); }));
        break;
      }
    }
  }
  return PiecewiseCurve(target, gamma.dim(), std::move(ps), gamma.off_value());
}

std::vector<PiecewiseCurve> split(const PiecewiseCurve& gamma,
                                  const std::vector<double>& partition) {
  std::vector<double> ts{gamma.domain().a};
  for (double t : partition) {
    require(t > ts.back() && t < gamma.domain().b, ErrorCode::InvalidParameter,
            "partition must be strictly increasing inside the domain");
    ts.push_back(t);
  }
  ts.push_back(gamma.domain().b);
  std::vector<PiecewiseCurve> parts;
  for (size_t i = 0; i + 1 < ts.size(); ++i)
    parts.push_back(gamma.restrict_to(Interval(ts[i], ts[i + 1])));
  return parts;
}

PiecewiseCurve glue(const std::vector<PiecewiseCurve>& parts) {
  require(!parts.empty(), ErrorCode::InvalidParameter, "nothing to glue");
  const int d = parts.front().dim();
  for (size_t i = 0; i + 1 < parts.size(); ++i) {
    require(parts[i].dim() == d, ErrorCode::InvalidParameter,
            "glue dimension mismatch");
    require(parts[i].domain().b == parts[i + 1].domain().a,
            ErrorCode::IncompatibleDomains, "glued domains must abut");
  }
  const Interval dom(parts.front().domain().a, parts.back().domain().b);
  std::vector<Piece> ps;
  for (const auto& part : parts)
    for (const auto& p : part.pieces()) ps.push_back(p);
  return PiecewiseCurve(dom, d, std::move(ps), parts.front().off_value());
}

std::vector<PiecewiseCurve> subdivide(const PiecewiseCurve& gamma, int n) {
  require(n >= 1, ErrorCode::InvalidParameter, "subdivide needs n >= 1");
  const double a = gamma.domain().a, b = gamma.domain().b;
  std::vector<PiecewiseCurve> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) {
    const double lo = (k == 0) ? a : a + k * (b - a) / n;
    const double hi = (k + 1 == n) ? b : a + (k + 1) * (b - a) / n;
    out.push_back(
        reparam_affine(gamma, Interval(lo, hi), gamma.domain()).scaled(1.0 / n));
  }
  return out;
}

FiberLinearMap FiberLinearMap::projection(int v_dim) {
  FiberLinearMap m;
  m.name = "projection";
  m.u_dim = 1;
  m.v_dim = v_dim;
  m.out_dim = v_dim;
  m.f = [](const Vec&, const Vec& v) { return v; };
  m.has_df = true;
  m.df = [](const Vec&, const Vec&, const Vec&, const Vec& vbar) {
    return vbar;
  };
  return m;
}

FiberLinearMap FiberLinearMap::scalar_multiply(int v_dim) {
  FiberLinearMap m;
  m.name = "scalar-multiply";
  m.u_dim = 1;
  m.v_dim = v_dim;
  m.out_dim = v_dim;
  m.f = [](const Vec& u, const Vec& v) { return Vec(u[0] * v); };
  m.has_df = true;
  m.df = [](const Vec& u, const Vec& v, const Vec& ubar, const Vec& vbar) {
    return Vec(ubar[0] * v + u[0] * vbar);
  };
  return m;
}

FiberLinearMap FiberLinearMap::square_scale(int v_dim) {
  FiberLinearMap m;
  m.name = "square-scale";
  m.u_dim = 1;
  m.v_dim = v_dim;
  m.out_dim = v_dim;
  m.f = [](const Vec& u, const Vec& v) { return Vec(u[0] * u[0] * v); };
  m.has_df = true;
  m.df = [](const Vec& u, const Vec& v, const Vec& ubar, const Vec& vbar) {
    return Vec(2.0 * u[0] * ubar[0] * v + u[0] * u[0] * vbar);
  };
  return m;
}

FiberLinearMap FiberLinearMap::linear(const Mat& A) {
  FiberLinearMap m;
  m.name = "linear";
  m.u_dim = 1;
  m.v_dim = static_cast<int>(A.cols());
  m.out_dim = static_cast<int>(A.rows());
  Mat Ac = A;
  m.f = [Ac](const Vec&, const Vec& v) { return Vec(Ac * v); };
  m.has_df = true;
  m.df = [Ac](const Vec&, const Vec&, const Vec&, const Vec& vbar) {
    return Vec(Ac * vbar);
  };
  return m;
}

namespace {

void check_base_in_domain(const FiberLinearMap& f, const ContinuousCurve& eta,
                          const Interval& dom) {
  if (!f.in_domain) return;
  const int n_check = 33;
  for (int i = 0; i < n_check; ++i) {
    const double t = dom.a + dom.length() * i / (n_check - 1);
    require(f.in_domain(eta.f(t)), ErrorCode::DomainViolation,
            "base curve leaves the map's domain at t=" + std::to_string(t));
  }
}

}  // namespace

PiecewiseCurve pushforward_fiberlinear(const FiberLinearMap& f,
                                       const ContinuousCurve& eta,
                                       const PiecewiseCurve& gamma) {
  require(eta.domain == gamma.domain(), ErrorCode::IncompatibleDomains,
          "base and fiber curves need the same domain");
  require(eta.dim == f.u_dim && gamma.dim() == f.v_dim,
          ErrorCode::InvalidParameter, "fiber-linear map dimension mismatch");
  check_base_in_domain(f, eta, gamma.domain());
  auto ff = f.f;
  auto base = eta.f;
  std::vector<Piece> ps;
  for (const auto& p : gamma.pieces()) {
    auto pe = p;
    ps.push_back(Piece::generic(p.support, [ff, base, pe](double t) {
      return ff(base(t), pe.eval(t));
    }));
  }
  Vec off = f.f(eta.f(gamma.domain().a), gamma.off_value());
  return PiecewiseCurve(gamma.domain(), f.out_dim, std::move(ps), off);
}

PiecewiseCurve theta_directional_derivative(const FiberLinearMap& f,
                                            const ContinuousCurve& eta,
                                            const PiecewiseCurve& gamma,
                                            const ContinuousCurve& eta_bar,
                                            const PiecewiseCurve& gamma_bar) {
  require(f.has_df, ErrorCode::Unsupported,
          "map has no registered derivative");
  require(eta.domain == gamma.domain() && gamma_bar.domain() == gamma.domain(),
          ErrorCode::IncompatibleDomains, "domain mismatch");
  check_base_in_domain(f, eta, gamma.domain());
  std::set<double> cuts{gamma.domain().a, gamma.domain().b};
  for (const auto& c : {std::cref(gamma), std::cref(gamma_bar)})
    for (const auto& p : c.get().pieces()) {
      cuts.insert(p.support.a);
      cuts.insert(p.support.b);
    }
  const std::vector<double> ts(cuts.begin(), cuts.end());
  auto g = std::make_shared<PiecewiseCurve>(gamma);
  auto gb = std::make_shared<PiecewiseCurve>(gamma_bar);
  auto df = f.df;
  auto base = eta.f;
  auto base_bar = eta_bar.f;
  std::vector<Piece> ps;
  for (size_t i = 0; i + 1 < ts.size(); ++i) {
    const Interval cell(ts[i], ts[i + 1]);
    const double mid = 0.5 * (cell.a + cell.b);
    if (!g->piece_at(mid) || !gb->piece_at(mid)) continue;
    ps.push_back(Piece::generic(cell, [df, base, base_bar, g, gb](double t) {
      return df(base(t), g->eval(t), base_bar(t), gb->eval(t));
    }));
  }
  Vec off = f.df(eta.f(gamma.domain().a), gamma.off_value(),
                 eta_bar.f(gamma.domain().a), gamma_bar.off_value());
  return PiecewiseCurve(gamma.domain(), f.out_dim, std::move(ps), off);
}

}  // namespace lieac
