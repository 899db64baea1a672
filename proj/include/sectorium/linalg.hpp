#pragma once

// Dense complex linear algebra helpers shared by every module: nullspaces,
// numerical rank, commutants and subspace comparison.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

namespace sectorium {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kDefaultTol = 1e-10;
// Singular-value cutoff for nullspace and commutant dimension counting.
inline constexpr double kNullspaceCutoff = 1e-9;
// sigma_2 / sigma_1 below this declares a block rank one.
inline constexpr double kRankOneRatio = 1e-8;

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Orthonormal basis (columns) of the nullspace of `m`. A singular value
/// counts as zero when it is below cutoff * max(1, sigma_max).
inline Matrix nullspace(const Matrix& m, double cutoff = kNullspaceCutoff) {
  const Eigen::Index cols = m.cols();
  if (cols == 0) return Matrix(0, 0);
  if (m.rows() == 0) return Matrix::Identity(cols, cols);
  // Pad to at least square so the full right-singular basis is available.
  Matrix padded = m;
  if (m.rows() < cols) {
    padded = Matrix::Zero(cols, cols);
    padded.topRows(m.rows()) = m;
  }
  Eigen::JacobiSVD<Matrix> svd(padded, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double scale = std::max(1.0, sv.size() ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff * scale) ++rank;
  return svd.matrixV().rightCols(cols - rank);
}

inline Eigen::Index numerical_rank(const Matrix& m, double cutoff = kNullspaceCutoff) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  const double scale = std::max(1.0, sv(0));
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff * scale) ++rank;
  return rank;
}

/// Orthonormal basis for the column span of `m`.
inline Matrix column_span(const Matrix& m, double cutoff = kNullspaceCutoff) {
  if (m.cols() == 0) return Matrix(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double scale = std::max(1.0, sv.size() ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff * scale) ++rank;
  return svd.matrixU().leftCols(rank);
}

// Column-major vec: vec(X) stacks columns, so vec(A X B) = (B^T kron A) vec(X).
inline Vector vec(const Matrix& x) {
  return Eigen::Map<const Vector>(x.data(), x.size());
}

inline Matrix unvec(const Vector& v, Eigen::Index rows) {
  return Eigen::Map<const Matrix>(v.data(), rows, v.size() / rows);
}

/// Orthonormal basis (trace inner product) of {X : X A = A X for all A}.
/// Each returned matrix is dim x dim.
inline std::vector<Matrix> commutant(std::span<const Matrix> action, Eigen::Index dim,
                                     double cutoff = kNullspaceCutoff) {
  const Eigen::Index d2 = dim * dim;
  Matrix stacked(static_cast<Eigen::Index>(action.size()) * d2, d2);
  const Matrix id = Matrix::Identity(dim, dim);
  for (std::size_t k = 0; k < action.size(); ++k) {
    const Matrix& a = action[k];
    stacked.middleRows(static_cast<Eigen::Index>(k) * d2, d2) =
        kron(a.transpose(), id) - kron(id, a);
  }
  const Matrix ns = action.empty() ? Matrix(Matrix::Identity(d2, d2)) : nullspace(stacked, cutoff);
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(ns.cols()));
  for (Eigen::Index c = 0; c < ns.cols(); ++c) out.push_back(unvec(ns.col(c), dim));
  return out;
}

/// Dimension of the span of a family of matrices (flattened).
inline Eigen::Index span_dimension(std::span<const Matrix> family,
                                   double cutoff = kNullspaceCutoff) {
  if (family.empty()) return 0;
  const Eigen::Index sz = family.front().size();
  Matrix cols(sz, static_cast<Eigen::Index>(family.size()));
  for (std::size_t k = 0; k < family.size(); ++k) cols.col(static_cast<Eigen::Index>(k)) = vec(family[k]);
  return numerical_rank(cols, cutoff);
}

/// Largest Frobenius norm of a pairwise commutator, relative to the product
/// of the generator norms.
inline double max_relative_commutator(std::span<const Matrix> family) {
  double worst = 0.0;
  for (std::size_t a = 0; a < family.size(); ++a) {
    for (std::size_t b = a + 1; b < family.size(); ++b) {
      const double denom = std::max(1e-300, family[a].norm() * family[b].norm());
      const Matrix c = family[a] * family[b] - family[b] * family[a];
      worst = std::max(worst, c.norm() / denom);
    }
  }
  return worst;
}

/// Largest principal-angle sine between two subspaces given by orthonormal
/// columns (1 if dimensions differ), computed as ||(1 - B B^dagger) A||_2 to
/// avoid the cancellation in sqrt(1 - cos^2).
inline double max_principal_angle_sine(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) return 1.0;
  if (a.cols() == 0) return 0.0;
  const Matrix residual = a - b * (b.adjoint() * a);
  Eigen::JacobiSVD<Matrix> svd(residual);
  return std::min(1.0, svd.singularValues()(0));
}

/// Residuals of P^2 = P and P^dagger = P.
struct ProjectorResidual {
  double idempotency = 0.0;
  double hermiticity = 0.0;
};

inline ProjectorResidual projector_residual(const Matrix& p) {
  return {max_abs(p * p - p), max_abs(p - p.adjoint())};
}

/// Rank of an (already verified) orthogonal projector: its trace, rounded.
inline Eigen::Index projector_rank(const Matrix& p) {
  return static_cast<Eigen::Index>(std::llround(p.trace().real()));
}

}  // namespace sectorium
