#pragma once

#include <Eigen/Core>
#include <Eigen/SVD>
#include <string>
#include <utility>

#include "lieac/errors.hpp"

namespace lieac {

// Continuous seminorm on R^d. Matrix kinds interpret the vector as a
// row-major flattened n x n matrix (d = n^2).
struct Seminorm {
  enum class Kind {
    AbsCoordinate,       // |x_i|
    Euclidean,           // |x|_2
    Max,                 // max_i |x_i|
    Weighted,            // sqrt(sum w_i x_i^2), w_i >= 0
    MatrixFrobenius,     // Frobenius norm of the reshaped matrix
    MatrixOperatorEst,   // largest singular value of the reshaped matrix
  };

  Kind kind = Kind::Euclidean;
  int dim = 1;
  int coordinate = 0;        // AbsCoordinate
  Eigen::VectorXd weights;   // Weighted

  static Seminorm abs_coordinate(int dim, int i) {
    require(i >= 0 && i < dim, ErrorCode::InvalidParameter,
            "coordinate index out of range");
    Seminorm q;
    q.kind = Kind::AbsCoordinate;
    q.dim = dim;
    q.coordinate = i;
    return q;
  }
  static Seminorm euclidean(int dim) {
    Seminorm q;
    q.kind = Kind::Euclidean;
    q.dim = dim;
    return q;
  }
  static Seminorm max(int dim) {
    Seminorm q;
    q.kind = Kind::Max;
    q.dim = dim;
    return q;
  }
  static Seminorm weighted(Eigen::VectorXd w) {
    require((w.array() >= 0.0).all(), ErrorCode::InvalidParameter,
            "weights must be nonnegative");
    Seminorm q;
    q.kind = Kind::Weighted;
    q.dim = static_cast<int>(w.size());
    q.weights = std::move(w);
    return q;
  }
  static Seminorm matrix_frobenius(int n) {
    Seminorm q;
    q.kind = Kind::MatrixFrobenius;
    q.dim = n * n;
    return q;
  }
  static Seminorm matrix_operator_estimate(int n) {
    Seminorm q;
    q.kind = Kind::MatrixOperatorEst;
    q.dim = n * n;
    return q;
  }

  double operator()(const Eigen::VectorXd& x) const {
    require(static_cast<int>(x.size()) == dim, ErrorCode::InvalidParameter,
            "seminorm applied to wrong dimension");
    switch (kind) {
      case Kind::AbsCoordinate:
        return std::abs(x[coordinate]);
      case Kind::Euclidean:
        return x.norm();
      case Kind::Max:
        return x.size() ? x.cwiseAbs().maxCoeff() : 0.0;
      case Kind::Weighted:
        return std::sqrt((weights.array() * x.array().square()).sum());
      case Kind::MatrixFrobenius:
        return x.norm();
      case Kind::MatrixOperatorEst: {
        const int n = static_cast<int>(std::lround(std::sqrt(double(dim))));
        Eigen::MatrixXd m(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) m(i, j) = x[i * n + j];
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
        return svd.singularValues()(0);
      }
    }
    return 0.0;
  }

  std::string name() const {
    switch (kind) {
      case Kind::AbsCoordinate:
        return "abs-coordinate(" + std::to_string(coordinate) + ")";
      case Kind::Euclidean:
        return "euclidean";
      case Kind::Max:
        return "max";
      case Kind::Weighted:
        return "weighted";
      case Kind::MatrixFrobenius:
        return "matrix-frobenius";
      case Kind::MatrixOperatorEst:
        return "matrix-operator-estimate";
    }
    return "?";
  }

  // All kinds are absolutely homogeneous: q(c*x) = |c|*q(x). Closed-form
  // paths for symbolic power pieces rely on this.
  bool homogeneous() const { return true; }
};

// Row-major flatten/unflatten helpers shared by matrix-valued curves.
inline Eigen::VectorXd flatten(const Eigen::MatrixXd& m) {
  Eigen::VectorXd v(m.rows() * m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) v[i * m.cols() + j] = m(i, j);
  return v;
}

inline Eigen::MatrixXd unflatten(const Eigen::VectorXd& v, int n) {
  require(static_cast<int>(v.size()) == n * n, ErrorCode::InvalidParameter,
          "unflatten size mismatch");
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = v[i * n + j];
  return m;
}

}  // namespace lieac
