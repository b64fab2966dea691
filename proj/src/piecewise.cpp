#include "lieac/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace lieac {

PiecewiseCurve::PiecewiseCurve(Interval domain, int dim,
                               std::vector<Piece> pieces, Vec off)
    : domain_(domain), dim_(dim), pieces_(std::move(pieces)), off_(std::move(off)) {
  require(dim_ > 0, ErrorCode::InvalidParameter, "curve dimension must be positive");
  require(static_cast<int>(off_.size()) == dim_, ErrorCode::InvalidParameter,
          "default value dimension mismatch");
  std::sort(pieces_.begin(), pieces_.end(),
            [](const Piece& x, const Piece& y) { return x.support.a < y.support.a; });
  const double slack = 1e-12 * std::max(1.0, domain_.length());
  double prev_end = domain_.a - slack;
  for (auto& p : pieces_) {
    require(p.support.a >= domain_.a - slack && p.support.b <= domain_.b + slack,
            ErrorCode::InvalidParameter, "piece support outside domain");
    require(p.support.a >= prev_end - slack, ErrorCode::InvalidParameter,
            "piece supports must have disjoint interiors");
    prev_end = p.support.b;
    if (p.kind == Piece::Kind::Constant || p.kind == Piece::Kind::Power)
      require(static_cast<int>(p.value.size()) == dim_,
              ErrorCode::InvalidParameter, "piece value dimension mismatch");
  }
}

PiecewiseCurve PiecewiseCurve::constant(Interval dom, Vec v) {
  const int d = static_cast<int>(v.size());
  std::vector<Piece> ps{Piece::constant(dom, v)};
  return PiecewiseCurve(dom, d, std::move(ps), Vec::Zero(d));
}

PiecewiseCurve PiecewiseCurve::generic(Interval dom, int dim,
                                       std::function<Vec(double)> fn) {
  std::vector<Piece> ps{Piece::generic(dom, std::move(fn))};
  return PiecewiseCurve(dom, dim, std::move(ps), Vec::Zero(dim));
}

PiecewiseCurve PiecewiseCurve::step(Interval dom,
                                    const std::vector<double>& breaks,
                                    const std::vector<Vec>& values) {
  require(values.size() == breaks.size() + 1, ErrorCode::InvalidParameter,
          "step curve needs one more value than breakpoints");
  std::vector<double> ts{dom.a};
  for (double t : breaks) {
    require(t > ts.back() && t < dom.b, ErrorCode::InvalidParameter,
            "breakpoints must be strictly increasing inside the domain");
    ts.push_back(t);
  }
  ts.push_back(dom.b);
  std::vector<Piece> ps;
  for (size_t k = 0; k + 1 < ts.size(); ++k)
    ps.push_back(Piece::constant(Interval(ts[k], ts[k + 1]), values[k]));
  const int d = static_cast<int>(values.front().size());
  return PiecewiseCurve(dom, d, std::move(ps), Vec::Zero(d));
}

PiecewiseCurve PiecewiseCurve::power(Interval dom, Vec coeff, double e,
                                     double origin) {
  const int d = static_cast<int>(coeff.size());
  std::vector<Piece> ps{Piece::power(dom, std::move(coeff), e, origin)};
  return PiecewiseCurve(dom, d, std::move(ps), Vec::Zero(d));
}

double PiecewiseCurve::covered_measure() const {
  double m = 0.0;
  for (const auto& p : pieces_) m += p.support.length();
  return m;
}

const Piece* PiecewiseCurve::piece_at(double t) const {
  const Piece* found = nullptr;
  for (const auto& p : pieces_) {
    if (p.support.a > t) break;
    if (p.support.contains(t)) found = &p;  // rightmost wins at junctions
  }
  return found;
}

Vec PiecewiseCurve::eval(double t) const {
  const Piece* p = piece_at(t);
  return p ? p->eval(t) : off_;
}

std::vector<double> PiecewiseCurve::junctions() const {
  std::vector<double> out;
  for (size_t i = 0; i + 1 < pieces_.size(); ++i)
    if (pieces_[i].support.b == pieces_[i + 1].support.a)
      out.push_back(pieces_[i].support.b);
  return out;
}

std::vector<double> PiecewiseCurve::breakpoints() const {
  std::set<double> pts;
  for (const auto& p : pieces_) {
    if (p.support.a > domain_.a) pts.insert(p.support.a);
    if (p.support.b < domain_.b) pts.insert(p.support.b);
  }
  return {pts.begin(), pts.end()};
}

bool PiecewiseCurve::is_continuous(double jump_tol) const {
  if (deficit() > 1e-12 * std::max(1.0, domain_.length())) return false;
  for (size_t i = 0; i + 1 < pieces_.size(); ++i) {
    const double t = pieces_[i].support.b;
    if (t != pieces_[i + 1].support.a) return false;
    const Vec left = pieces_[i].eval(t);
    const Vec right = pieces_[i + 1].eval(t);
    if ((left - right).norm() > jump_tol * (1.0 + left.norm())) return false;
  }
  return true;
}

bool PiecewiseCurve::has_singular_piece() const {
  for (const auto& p : pieces_)
    if (p.singular()) return true;
  return false;
}

PiecewiseCurve PiecewiseCurve::restrict_to(Interval sub) const {
  require(domain_.contains(sub), ErrorCode::OutOfDomain,
          "restriction interval outside domain");
  std::vector<Piece> ps;
  for (const auto& p : pieces_) {
    const double lo = std::max(p.support.a, sub.a);
    const double hi = std::min(p.support.b, sub.b);
    if (lo >= hi) continue;
    Piece q = p;
    q.support = Interval(lo, hi);
    if (q.kind == Piece::Kind::Power)
      require(q.origin <= q.support.a || q.origin >= q.support.b,
              ErrorCode::InvalidParameter, "power piece clipped across origin");
    ps.push_back(std::move(q));
  }
  return PiecewiseCurve(sub, dim_, std::move(ps), off_);
}

PiecewiseCurve PiecewiseCurve::map_linear(
    const std::function<Vec(const Vec&)>& L, int out_dim) const {
  std::vector<Piece> ps;
  for (const auto& p : pieces_) {
    switch (p.kind) {
      case Piece::Kind::Constant:
        ps.push_back(Piece::constant(p.support, L(p.value)));
        break;
      case Piece::Kind::Power:
        ps.push_back(Piece::power(p.support, L(p.value), p.expo, p.origin));
        break;
      case Piece::Kind::Generic: {
        auto fn = p.f;
        ps.push_back(Piece::generic(
            p.support, [L, fn](double t) { return L(fn(t)); }));
        break;
      }
    }
  }
  return PiecewiseCurve(domain_, out_dim, std::move(ps), L(off_));
}

PiecewiseCurve PiecewiseCurve::scaled(double c) const {
  return map_linear([c](const Vec& v) { return Vec(c * v); }, dim_);
}

PiecewiseCurve linear_combination(double a, const PiecewiseCurve& x, double b,
                                  const PiecewiseCurve& y) {
  require(x.domain() == y.domain() && x.dim() == y.dim(),
          ErrorCode::IncompatibleDomains,
          "linear combination needs matching domains and dimensions");
  // Fast path: identical piece layout with combinable kinds.
  bool aligned = x.pieces().size() == y.pieces().size();
  if (aligned) {
    for (size_t i = 0; i < x.pieces().size(); ++i) {
      const Piece& px = x.pieces()[i];
      const Piece& py = y.pieces()[i];
      if (!(px.support == py.support)) { aligned = false; break; }
      const bool both_const = px.kind == Piece::Kind::Constant &&
                              py.kind == Piece::Kind::Constant;
      const bool both_power = px.kind == Piece::Kind::Power &&
                              py.kind == Piece::Kind::Power &&
                              px.expo == py.expo && px.origin == py.origin;
      if (!both_const && !both_power) { aligned = false; break; }
    }
  }
  if (aligned) {
    std::vector<Piece> ps;
    for (size_t i = 0; i < x.pieces().size(); ++i) {
      const Piece& px = x.pieces()[i];
      const Piece& py = y.pieces()[i];
      Vec v = a * px.value + b * py.value;
      if (px.kind == Piece::Kind::Constant)
        ps.push_back(Piece::constant(px.support, std::move(v)));
      else
        ps.push_back(Piece::power(px.support, std::move(v), px.expo, px.origin));
    }
    return PiecewiseCurve(x.domain(), x.dim(), std::move(ps),
                          a * x.off_value() + b * y.off_value());
  }
  return lift_continuous(
      [a, b](const std::vector<Vec>& vals) { return Vec(a * vals[0] + b * vals[1]); },
      x.dim(), {x, y});
}

CompactSet lusin_compact_approx(const PiecewiseCurve& curve, double eps) {
  require(eps > 0.0, ErrorCode::InvalidParameter, "eps must be positive");
  require(eps < curve.domain().length(), ErrorCode::InvalidParameter,
          "eps must be below the domain length");
  std::vector<CompactSet::Component> base;
  for (const auto& p : curve.pieces())
    base.push_back({p.support.a, p.support.b});
  const auto js = curve.junctions();
  if (js.empty()) return CompactSet::from_components(base);
  const double r = eps / (2.0 * static_cast<double>(js.size()));
  std::vector<std::pair<double, double>> cuts;
  for (double j : js) {
    if (!cuts.empty() && j - r <= cuts.back().second)
      cuts.back().second = j + r;  // merge overlapping excisions
    else
      cuts.emplace_back(j - r, j + r);
  }
  return interval_difference(base, cuts);
}

std::vector<CompactSet> lusin_exhaustion(const PiecewiseCurve& curve, int N) {
  require(N >= 1, ErrorCode::InvalidParameter, "N must be >= 1");
  std::vector<CompactSet::Component> base;
  for (const auto& p : curve.pieces())
    base.push_back({p.support.a, p.support.b});
  const auto js = curve.junctions();
  std::vector<CompactSet> out;
  if (js.empty()) {
    out.push_back(CompactSet::from_components(base));
    for (int n = 1; n < N; ++n) out.emplace_back();
    return out;
  }
  // Radii shrink as 1/n split across junctions; the tiny safety factor keeps
  // the cumulative deficit bound exact on doubles after endpoint nudging.
  const double J = static_cast<double>(js.size());
  auto radius = [&](int n) { return (1.0 - 1e-9) / (2.0 * J * n); };
  auto cumulative = [&](int n) {
    const double r = radius(n);
    std::vector<std::pair<double, double>> cuts;
    for (double j : js) {
      if (!cuts.empty() && j - r <= cuts.back().second)
        cuts.back().second = j + r;
      else
        cuts.emplace_back(j - r, j + r);
    }
    return interval_difference(base, cuts);
  };
  CompactSet prev = cumulative(1);
  out.push_back(prev);
  for (int n = 2; n <= N; ++n) {
    CompactSet cur = cumulative(n);
    // K_n = closure(cur \ prev), nudged off shared endpoints so the returned
    // sets are strictly disjoint.
    std::vector<std::pair<double, double>> prev_cuts;
    for (const auto& c : prev.comps) prev_cuts.emplace_back(c.a, c.b);
    std::vector<CompactSet::Component> cur_base(cur.comps.begin(), cur.comps.end());
    CompactSet diff = interval_difference(cur_base, prev_cuts);
    std::vector<CompactSet::Component> nudged;
    for (auto c : diff.comps) {
      if (prev.contains(c.a)) c.a = std::nextafter(c.a, c.b);
      if (prev.contains(c.b)) c.b = std::nextafter(c.b, c.a);
      if (c.b > c.a) nudged.push_back(c);
    }
    CompactSet kn = CompactSet::from_components(nudged);
    // prev accumulates the union so later differences stay disjoint
    std::vector<CompactSet::Component> merged(prev.comps.begin(), prev.comps.end());
    for (const auto& c : kn.comps) merged.push_back(c);
    std::sort(merged.begin(), merged.end(),
              [](const auto& x, const auto& y) { return x.a < y.a; });
    prev.comps = merged;
    out.push_back(std::move(kn));
  }
  return out;
}

PiecewiseCurve lift_continuous(
    const std::function<Vec(const std::vector<Vec>&)>& F, int out_dim,
    const std::vector<PiecewiseCurve>& curves) {
  require(!curves.empty(), ErrorCode::InvalidParameter, "no curves to lift");
  const Interval dom = curves.front().domain();
  for (const auto& c : curves)
    require(c.domain() == dom, ErrorCode::IncompatibleDomains,
            "lift requires a common domain");
  std::set<double> cuts{dom.a, dom.b};
  for (const auto& c : curves)
    for (const auto& p : c.pieces()) {
      cuts.insert(p.support.a);
      cuts.insert(p.support.b);
    }
  const std::vector<double> ts(cuts.begin(), cuts.end());
  auto shared = std::make_shared<std::vector<PiecewiseCurve>>(curves);
  std::vector<Piece> ps;
  for (size_t i = 0; i + 1 < ts.size(); ++i) {
    const Interval cell(ts[i], ts[i + 1]);
    const double mid = 0.5 * (cell.a + cell.b);
    bool covered = true;
    bool all_const = true;
    std::vector<Vec> const_vals;
    for (const auto& c : *shared) {
      const Piece* p = c.piece_at(mid);
      if (!p) { covered = false; break; }
      if (p->kind == Piece::Kind::Constant)
        const_vals.push_back(p->value);
      else
        all_const = false;
    }
    if (!covered) continue;
    if (all_const) {
      ps.push_back(Piece::constant(cell, F(const_vals)));
    } else {
      ps.push_back(Piece::generic(cell, [F, shared](double t) {
        std::vector<Vec> vals;
        vals.reserve(shared->size());
        for (const auto& c : *shared) vals.push_back(c.eval(t));
        return F(vals);
      }));
    }
  }
  std::vector<Vec> offs;
  for (const auto& c : curves) offs.push_back(c.off_value());
  return PiecewiseCurve(dom, out_dim, std::move(ps), F(offs));
}

bool ae_equal(const PiecewiseCurve& x, const PiecewiseCurve& y, double tol,
              int samples_per_interval) {
  require(x.domain() == y.domain() && x.dim() == y.dim(),
          ErrorCode::IncompatibleDomains, "ae_equal requires matching domains");
  std::set<double> cuts{x.domain().a, x.domain().b};
  for (const auto& c : {std::cref(x), std::cref(y)})
    for (const auto& p : c.get().pieces()) {
      cuts.insert(p.support.a);
      cuts.insert(p.support.b);
    }
  const std::vector<double> ts(cuts.begin(), cuts.end());
  for (size_t i = 0; i + 1 < ts.size(); ++i) {
    const double lo = ts[i], hi = ts[i + 1];
    const double mid = 0.5 * (lo + hi);
    if (!x.piece_at(mid) || !y.piece_at(mid)) continue;  // defaults ignored
    for (int k = 0; k < samples_per_interval; ++k) {
      const double t = lo + (hi - lo) * (k + 0.5) / samples_per_interval;
      if ((x.eval(t) - y.eval(t)).norm() > tol) return false;
    }
  }
  return true;
}

PiecewiseCurve from_borel_samples(const std::vector<double>& grid,
                                  const std::vector<Vec>& values,
                                  double jump_tol) {
  require(grid.size() >= 2 && grid.size() == values.size(),
          ErrorCode::InvalidInput, "need matching grid/value arrays, length >= 2");
  for (size_t i = 0; i + 1 < grid.size(); ++i)
    require(grid[i] < grid[i + 1], ErrorCode::InvalidInput,
            "sample grid must be strictly increasing");
  const int d = static_cast<int>(values.front().size());
  for (const auto& v : values) {
    require(static_cast<int>(v.size()) == d, ErrorCode::InvalidInput,
            "sample dimension mismatch");
    require(v.allFinite(), ErrorCode::InvalidInput, "NaN or Inf in samples");
  }
  const Interval dom(grid.front(), grid.back());
  auto gs = std::make_shared<std::vector<double>>(grid);
  auto vs = std::make_shared<std::vector<Vec>>(values);

  std::vector<Piece> ps;
  size_t seg_start = 0;
  auto flush = [&](size_t seg_end_sample, double sup_end) {
    // segment samples [seg_start, seg_end_sample], support up to sup_end
    const Interval sup((*gs)[seg_start], sup_end);
    bool all_same = true;
    for (size_t i = seg_start; i < seg_end_sample; ++i)
      if (((*vs)[i + 1] - (*vs)[i]).norm() != 0.0) { all_same = false; break; }
    if (all_same) {
      ps.push_back(Piece::constant(sup, (*vs)[seg_start]));
      return;
    }
    const size_t s0 = seg_start, s1 = seg_end_sample;
    ps.push_back(Piece::generic(sup, [gs, vs, s0, s1](double t) {
      if (t <= (*gs)[s0]) return (*vs)[s0];
      if (t >= (*gs)[s1]) return (*vs)[s1];  // constant past the last sample
      auto it = std::upper_bound(gs->begin() + s0, gs->begin() + s1 + 1, t);
      const size_t j = static_cast<size_t>(it - gs->begin()) - 1;
      const double w = (t - (*gs)[j]) / ((*gs)[j + 1] - (*gs)[j]);
      return Vec((1.0 - w) * (*vs)[j] + w * (*vs)[j + 1]);
    }));
  };
  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    if ((values[i + 1] - values[i]).norm() > jump_tol) {
      flush(i, grid[i + 1]);
      seg_start = i + 1;
    }
  }
  flush(grid.size() - 1, grid.back());
  return PiecewiseCurve(dom, d, std::move(ps), Vec::Zero(d));
}

PiecewiseCurve restrict_to_compact(const PiecewiseCurve& curve,
                                   const CompactSet& K) {
  std::vector<Piece> ps;
  for (const auto& comp : K.comps) {
    if (comp.b <= comp.a) continue;
    for (const auto& p : curve.pieces()) {
      const double lo = std::max(p.support.a, comp.a);
      const double hi = std::min(p.support.b, comp.b);
      if (lo >= hi) continue;
      Piece q = p;
      q.support = Interval(lo, hi);
      ps.push_back(std::move(q));
    }
  }
  return PiecewiseCurve(curve.domain(), curve.dim(), std::move(ps),
                        curve.off_value());
}

}  // namespace lieac
