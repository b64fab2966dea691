#include "lieac/lie_core.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <mutex>
#include <unsupported/Eigen/MatrixFunctions>

namespace lieac {

namespace {

double scale_tol(const Mat& m) { return 1e-9 * std::max(1.0, m.norm()); }

Mat basis_mat(int n, int i, int j) {
  Mat e = Mat::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

}  // namespace

Mat MatrixGroup::algebra_from_coords(const Vec& c) const {
  require(c.size() == algebra_dim(), ErrorCode::InvalidParameter,
          "coordinate/basis size mismatch");
  Mat a = Mat::Zero(n, n);
  for (int i = 0; i < algebra_dim(); ++i) a += c[i] * algebra_basis[i];
  return a;
}

GroupPtr translation_group(int d) {
  require(d >= 1, ErrorCode::InvalidParameter, "dimension must be positive");
  auto g = std::make_shared<MatrixGroup>();
  const int n = d + 1;
  g->name = "Translation(" + std::to_string(d) + ")";
  g->n = n;
  g->abelian = true;
  g->closed_form_exp = true;
  g->member = [n, d](const Mat& m) {
    if (m.rows() != n || m.cols() != n) return false;
    const double tol = scale_tol(m);
    Mat ref = Mat::Identity(n, n);
    ref.block(0, d, d, 1) = m.block(0, d, d, 1);
    return (m - ref).norm() <= tol;
  };
  g->in_algebra = [n, d](const Mat& a) {
    if (a.rows() != n || a.cols() != n) return false;
    const double tol = scale_tol(a);
    Mat ref = Mat::Zero(n, n);
    ref.block(0, d, d, 1) = a.block(0, d, d, 1);
    return (a - ref).norm() <= tol;
  };
  for (int i = 0; i < d; ++i) g->algebra_basis.push_back(basis_mat(n, i, d));
  // the algebra is 2-step nilpotent: exp(A) = I + A
  g->closed_exp = [n](const Mat& a) { return Mat(Mat::Identity(n, n) + a); };
  return g;
}

GroupPtr positive_scalars() {
  auto g = std::make_shared<MatrixGroup>();
  g->name = "PositiveScalars";
  g->n = 1;
  g->abelian = true;
  g->closed_form_exp = true;
  g->member = [](const Mat& m) {
    return m.rows() == 1 && m.cols() == 1 && m(0, 0) > 0.0;
  };
  g->in_algebra = [](const Mat& a) { return a.rows() == 1 && a.cols() == 1; };
  g->algebra_basis.push_back(Mat::Identity(1, 1));
  g->closed_exp = [](const Mat& a) {
    Mat m(1, 1);
    m(0, 0) = std::exp(a(0, 0));
    return m;
  };
  return g;
}

GroupPtr gl(int n) {
  require(n >= 1, ErrorCode::InvalidParameter, "dimension must be positive");
  auto g = std::make_shared<MatrixGroup>();
  g->name = "GL(" + std::to_string(n) + ")";
  g->n = n;
  g->member = [n](const Mat& m) {
    if (m.rows() != n || m.cols() != n || !m.allFinite()) return false;
    return std::abs(m.determinant()) >
           1e-12 * std::max(1.0, std::pow(m.norm(), n));
  };
  g->in_algebra = [n](const Mat& a) {
    return a.rows() == n && a.cols() == n && a.allFinite();
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g->algebra_basis.push_back(basis_mat(n, i, j));
  return g;
}

namespace {

// Rodrigues formula with series fallback near theta = 0.
Mat so3_exp(const Mat& a) {
  const double theta = std::sqrt(a(2, 1) * a(2, 1) + a(0, 2) * a(0, 2) +
                                 a(1, 0) * a(1, 0));
  double c1, c2;  // sin(t)/t, (1-cos(t))/t^2
  if (theta < 1e-4) {
    const double t2 = theta * theta;
    c1 = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    c2 = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
  } else {
    c1 = std::sin(theta) / theta;
    c2 = (1.0 - std::cos(theta)) / (theta * theta);
  }
  return Mat(Mat::Identity(3, 3) + c1 * a + c2 * (a * a));
}

Mat polar_rotation(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    Mat u = svd.matrixU();
    u.col(m.cols() - 1) *= -1.0;
    r = u * svd.matrixV().transpose();
  }
  return r;
}

}  // namespace

GroupPtr so3() {
  auto g = std::make_shared<MatrixGroup>();
  g->name = "SO(3)";
  g->n = 3;
  g->closed_form_exp = true;
  g->member = [](const Mat& m) {
    if (m.rows() != 3 || m.cols() != 3) return false;
    const double tol = scale_tol(m);
    return (m.transpose() * m - Mat::Identity(3, 3)).norm() <= tol &&
           m.determinant() > 0.0;
  };
  g->in_algebra = [](const Mat& a) {
    if (a.rows() != 3 || a.cols() != 3) return false;
    return (a + a.transpose()).norm() <= scale_tol(a);
  };
  auto gen = [](int i, int j) {
    Mat e = Mat::Zero(3, 3);
    e(i, j) = -1.0;
    e(j, i) = 1.0;
    return e;
  };
  g->algebra_basis = {gen(1, 2), gen(2, 0), gen(0, 1)};  // L_x, L_y, L_z
  g->closed_exp = so3_exp;
  g->reproject = polar_rotation;
  return g;
}

GroupPtr se2() {
  auto g = std::make_shared<MatrixGroup>();
  g->name = "SE(2)";
  g->n = 3;
  g->closed_form_exp = true;
  g->member = [](const Mat& m) {
    if (m.rows() != 3 || m.cols() != 3) return false;
    const double tol = scale_tol(m);
    const Mat r = m.block(0, 0, 2, 2);
    return (r.transpose() * r - Mat::Identity(2, 2)).norm() <= tol &&
           r.determinant() > 0.0 && std::abs(m(2, 0)) <= tol &&
           std::abs(m(2, 1)) <= tol && std::abs(m(2, 2) - 1.0) <= tol;
  };
  g->in_algebra = [](const Mat& a) {
    if (a.rows() != 3 || a.cols() != 3) return false;
    const double tol = scale_tol(a);
    return std::abs(a(0, 0)) <= tol && std::abs(a(1, 1)) <= tol &&
           std::abs(a(0, 1) + a(1, 0)) <= tol && std::abs(a(2, 0)) <= tol &&
           std::abs(a(2, 1)) <= tol && std::abs(a(2, 2)) <= tol;
  };
  Mat rot = Mat::Zero(3, 3);
  rot(0, 1) = -1.0;
  rot(1, 0) = 1.0;
  g->algebra_basis = {basis_mat(3, 0, 2), basis_mat(3, 1, 2), rot};
  g->closed_exp = [](const Mat& a) {
    const double w = a(1, 0);
    double c1, c2;  // sin(w)/w, (1-cos(w))/w
    if (std::abs(w) < 1e-4) {
      const double w2 = w * w;
      c1 = 1.0 - w2 / 6.0;
      c2 = w / 2.0 - w2 * w / 24.0;
    } else {
      c1 = std::sin(w) / w;
      c2 = (1.0 - std::cos(w)) / w;
    }
    Mat m = Mat::Identity(3, 3);
    const double cw = std::cos(w), sw = std::sin(w);
    m(0, 0) = cw;
    m(0, 1) = -sw;
    m(1, 0) = sw;
    m(1, 1) = cw;
    m(0, 2) = c1 * a(0, 2) - c2 * a(1, 2);
    m(1, 2) = c2 * a(0, 2) + c1 * a(1, 2);
    return m;
  };
  return g;
}

GroupPtr heisenberg3() {
  auto g = std::make_shared<MatrixGroup>();
  g->name = "Heisenberg(3)";
  g->n = 3;
  g->closed_form_exp = true;
  g->member = [](const Mat& m) {
    if (m.rows() != 3 || m.cols() != 3) return false;
    const double tol = scale_tol(m);
    return std::abs(m(0, 0) - 1.0) <= tol && std::abs(m(1, 1) - 1.0) <= tol &&
           std::abs(m(2, 2) - 1.0) <= tol && std::abs(m(1, 0)) <= tol &&
           std::abs(m(2, 0)) <= tol && std::abs(m(2, 1)) <= tol;
  };
  g->in_algebra = [](const Mat& a) {
    if (a.rows() != 3 || a.cols() != 3) return false;
    const double tol = scale_tol(a);
    return std::abs(a(0, 0)) <= tol && std::abs(a(1, 1)) <= tol &&
           std::abs(a(2, 2)) <= tol && std::abs(a(1, 0)) <= tol &&
           std::abs(a(2, 0)) <= tol && std::abs(a(2, 1)) <= tol;
  };
  g->algebra_basis = {basis_mat(3, 0, 1), basis_mat(3, 1, 2),
                      basis_mat(3, 0, 2)};
  // strictly upper triangular: nilpotent of degree 3
  g->closed_exp = [](const Mat& a) {
    return Mat(Mat::Identity(3, 3) + a + 0.5 * (a * a));
  };
  return g;
}

namespace {
std::mutex audit_mu;
std::vector<std::string> audit_entries;
}  // namespace

namespace audit {
void note(const std::string& entry) {
  std::lock_guard<std::mutex> lock(audit_mu);
  audit_entries.push_back(entry);
}
std::vector<std::string> entries() {
  std::lock_guard<std::mutex> lock(audit_mu);
  return audit_entries;
}
void clear() {
  std::lock_guard<std::mutex> lock(audit_mu);
  audit_entries.clear();
}
}  // namespace audit

GroupElement make_element(const GroupPtr& g, Mat m) {
  require(g != nullptr, ErrorCode::InvalidParameter, "null group");
  if (!g->member(m)) {
    if (g->reproject) {
      Mat fixed = g->reproject(m);
      audit::note(g->name + ": reprojected element with drift " +
                  std::to_string((fixed - m).norm()));
      m = std::move(fixed);
    }
    require(g->member(m), ErrorCode::InvalidInput,
            "matrix fails " + g->name + " membership");
  }
  return {g, std::move(m)};
}

AlgebraElement make_algebra(const GroupPtr& g, Mat m) {
  require(g != nullptr, ErrorCode::InvalidParameter, "null group");
  require(g->in_algebra(m), ErrorCode::InvalidControl,
          "matrix fails the " + g->name + " algebra predicate");
  return {g, std::move(m)};
}

Mat exp_mat(const Mat& A) { return A.exp(); }

Mat log_mat(const Mat& M) { return M.log(); }

GroupElement exp_alg(const AlgebraElement& A, double tol) {
  require(tol > 0.0, ErrorCode::InvalidParameter, "tolerance must be positive");
  Mat m = A.group->closed_exp ? A.group->closed_exp(A.mat) : exp_mat(A.mat);
  return make_element(A.group, std::move(m));
}

AlgebraElement log_grp(const GroupElement& g) {
  const Mat d = g.mat - Mat::Identity(g.mat.rows(), g.mat.cols());
  Eigen::JacobiSVD<Mat> svd(d);
  require(svd.singularValues()[0] < 0.5, ErrorCode::OutOfChart,
          "element outside the logarithm chart (||g - I|| >= 0.5)");
  return make_algebra(g.group, log_mat(g.mat));
}

namespace {
void require_same_group(const GroupPtr& a, const GroupPtr& b) {
  require(a && b && a->name == b->name && a->n == b->n,
          ErrorCode::Incompatible, "elements belong to different groups");
}
}  // namespace

TangentVector left_act(const GroupElement& g, const TangentVector& w) {
  require_same_group(g.group, w.base.group);
  return {GroupElement{g.group, g.mat * w.base.mat}, g.mat * w.mat};
}

TangentVector right_act(const TangentVector& v, const GroupElement& h) {
  require_same_group(v.base.group, h.group);
  return {GroupElement{h.group, v.base.mat * h.mat}, v.mat * h.mat};
}

AlgebraElement maurer_cartan(const TangentVector& v) {
  const Mat a = v.base.mat.partialPivLu().solve(v.mat);
  require(v.base.group->in_algebra(a), ErrorCode::InvalidTangent,
          "translated vector misses the " + v.base.group->name + " algebra");
  return {v.base.group, a};
}

Homomorphism hom_det(int n) {
  Homomorphism f;
  f.name = "det";
  f.source = gl(n);
  f.target = positive_scalars();
  f.map = [](const Mat& m) {
    Mat out(1, 1);
    out(0, 0) = m.determinant();
    return out;
  };
  f.algebra_map = [](const Mat& a) {
    Mat out(1, 1);
    out(0, 0) = a.trace();
    return out;
  };
  return f;
}

Homomorphism hom_identity(const GroupPtr& g) {
  Homomorphism f;
  f.name = "identity";
  f.source = g;
  f.target = g;
  f.map = [](const Mat& m) { return m; };
  f.algebra_map = [](const Mat& a) { return a; };
  return f;
}

}  // namespace lieac
