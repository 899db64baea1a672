#pragma once

// Finite toy model: H = (+)_mu C^{n_mu} (x) C^{n_mu} carrying the left and
// right regular actions, observables as the commutant of the right action,
// purity by the rank-one criterion, truncation to one multiplicity copy and
// the Wightman / Jauch checks.
//
// Coordinates: x(mu,i,j) = sqrt(lambda^mu) v^mu_ij, flattened with mu in
// irrep-set order, then i (left, observable index), then j (right, gauge
// index). This makes the map from V_G (with its invariant inner product)
// unitary onto C^n with the standard inner product.

#include "sectorium/algebra.hpp"
#include "sectorium/error.hpp"
#include "sectorium/linalg.hpp"
#include "sectorium/rep.hpp"

#include <cmath>
#include <optional>
#include <variant>
#include <vector>

namespace sectorium {

class ToyHilbert {
 public:
  explicit ToyHilbert(const IrrepSet& set) : set_(set), lambda_(InnerProductConfig::for_set(set).lambda) {
    std::size_t off = 0;
    for (const auto& r : set.irreps()) {
      offsets_.push_back(off);
      off += r.dim() * r.dim();
    }
    dim_ = off;
  }

  const IrrepSet& irreps() const noexcept { return set_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t block_dim(std::size_t mu) const { return set_[mu].dim(); }
  std::size_t offset(std::size_t mu) const { return offsets_.at(mu); }
  std::size_t sectors() const noexcept { return set_.count(); }

  Eigen::Index index(std::size_t mu, std::size_t i, std::size_t j) const {
    return static_cast<Eigen::Index>(offsets_[mu] + i * set_[mu].dim() + j);
  }

  /// The n_mu x n_mu block of a state vector (rows: left index).
  Matrix block(const Vector& psi, std::size_t mu) const {
    const auto d = static_cast<Eigen::Index>(set_[mu].dim());
    Matrix b(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j)
        b(i, j) = psi(index(mu, static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
    return b;
  }

  Vector from_blocks(const std::vector<Matrix>& blocks) const {
    Vector psi = Vector::Zero(static_cast<Eigen::Index>(dim_));
    for (std::size_t mu = 0; mu < blocks.size(); ++mu)
      for (std::size_t i = 0; i < set_[mu].dim(); ++i)
        for (std::size_t j = 0; j < set_[mu].dim(); ++j)
          psi(index(mu, i, j)) = blocks[mu](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return psi;
  }

  Vector to_coordinates(const AlgebraElement& v) const {
    auto sc = to_sectors(v, set_);
    for (std::size_t mu = 0; mu < sc.blocks.size(); ++mu) sc.blocks[mu] *= std::sqrt(lambda_[mu]);
    return from_blocks(sc.blocks);
  }

  AlgebraElement from_coordinates(const Vector& psi) const {
    SectorComponents sc;
    for (std::size_t mu = 0; mu < set_.count(); ++mu) sc.blocks.push_back(block(psi, mu) / std::sqrt(lambda_[mu]));
    return from_sectors(sc, set_);
  }

  /// Matrix of the coordinate map from group-element coefficients.
  Matrix coordinate_map() const {
    const auto n = static_cast<Eigen::Index>(set_.order());
    Matrix w(static_cast<Eigen::Index>(dim_), n);
    for (Element g = 0; g < set_.order(); ++g)
      w.col(static_cast<Eigen::Index>(g)) = to_coordinates(AlgebraElement::basis(set_.order(), g));
    return w;
  }

  /// Right multiplication by g-hat: v^mu -> v^mu D^mu(g), acting on the right index.
  Matrix right_action(Element g) const {
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
    for (std::size_t mu = 0; mu < set_.count(); ++mu) {
      const auto d = static_cast<Eigen::Index>(set_[mu].dim());
      out.block(static_cast<Eigen::Index>(offsets_[mu]), static_cast<Eigen::Index>(offsets_[mu]), d * d, d * d) =
          kron(Matrix::Identity(d, d), set_[mu](g).transpose());
    }
    return out;
  }

  /// Left multiplication by g-hat: v^mu -> D^mu(g) v^mu, acting on the left index.
  Matrix left_action(Element g) const {
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
    for (std::size_t mu = 0; mu < set_.count(); ++mu) {
      const auto d = static_cast<Eigen::Index>(set_[mu].dim());
      out.block(static_cast<Eigen::Index>(offsets_[mu]), static_cast<Eigen::Index>(offsets_[mu]), d * d, d * d) =
          kron(set_[mu](g), Matrix::Identity(d, d));
    }
    return out;
  }

  std::vector<Matrix> right_regular_action() const {
    std::vector<Matrix> out;
    for (Element g = 0; g < set_.order(); ++g) out.push_back(right_action(g));
    return out;
  }

  std::vector<Matrix> left_regular_action() const {
    std::vector<Matrix> out;
    for (Element g = 0; g < set_.order(); ++g) out.push_back(left_action(g));
    return out;
  }

 private:
  IrrepSet set_;
  std::vector<double> lambda_;
  std::vector<std::size_t> offsets_;
  std::size_t dim_ = 0;
};

/// Observables: the commutant of the right V_G action.
struct ObservableAlgebra {
  std::vector<Matrix> generators;  // trace-orthonormal basis
  std::size_t dim = 0;
  double right_commutator = 0.0;  // max ||[X, R_g]|| over generators and g
};

inline double max_commutator(const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
  double worst = 0.0;
  for (const auto& x : a)
    for (const auto& y : b) worst = std::max(worst, max_abs(x * y - y * x));
  return worst;
}

inline ObservableAlgebra observable_algebra(const ToyHilbert& h) {
  const auto right = h.right_regular_action();
  ObservableAlgebra out;
  out.generators = commutant(std::span<const Matrix>(right), static_cast<Eigen::Index>(h.dim()));
  out.dim = out.generators.size();
  out.right_commutator = max_commutator(out.generators, right);
  return out;
}

struct CrossSector {
  std::vector<std::size_t> sectors;  // indices of the nonzero blocks
};

struct PureState {
  std::size_t mu = 0;
  Vector left;   // ray seen by the observables
  Vector right;  // label of the generalized ray; block == left * right^T
};

struct MixedState {
  std::size_t mu = 0;
  Eigen::Index block_rank = 0;
};

using StateClass = std::variant<CrossSector, PureState, MixedState>;

/// A vector is a pure state of the observable algebra iff it lies in one
/// sector and its block there has rank one.
inline StateClass classify_state(const ToyHilbert& h, const Vector& psi, double ratio = kRankOneRatio) {
  if (psi.size() != static_cast<Eigen::Index>(h.dim()))
    throw Error(ErrorKind::MalformedInput, "state of length " + std::to_string(psi.size()) + " for dimension " +
                                               std::to_string(h.dim()));
  const double norm = psi.norm();
  if (norm == 0.0) throw Error(ErrorKind::ZeroVector, "cannot classify the zero vector");
  std::vector<std::size_t> nonzero;
  for (std::size_t mu = 0; mu < h.sectors(); ++mu)
    if (h.block(psi, mu).norm() > ratio * norm) nonzero.push_back(mu);
  if (nonzero.size() != 1) return CrossSector{nonzero};
  const std::size_t mu = nonzero.front();
  const Matrix b = h.block(psi, mu);
  Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 1;
  while (rank < sv.size() && sv(rank) >= ratio * sv(0)) ++rank;
  if (rank == 1) return PureState{mu, svd.matrixU().col(0) * sv(0), svd.matrixV().col(0).conjugate()};
  return MixedState{mu, rank};
}

/// Copy of sector mu selected by the unit vector a: span{e_i (x) a}, the
/// image of right multiplication by the primitive idempotent for a.
inline Matrix sector_copy(const ToyHilbert& h, std::size_t mu, const Vector& a) {
  const auto d = static_cast<Eigen::Index>(h.block_dim(mu));
  if (a.size() != d) throw Error(ErrorKind::MalformedInput, "amplitude vector has wrong length");
  if (std::abs(a.norm() - 1.0) > 1e-10) throw Error(ErrorKind::NonUnitVector, "amplitude vector is not normalized");
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(h.dim()), d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      out(h.index(mu, static_cast<std::size_t>(i), static_cast<std::size_t>(j)), i) = a(j);
  return out;
}

/// H_tr = (+)_mu H^mu_tr with H^mu_tr the copy selected by a = e_1.
struct TruncatedSpace {
  Matrix embedding;  // dim(H) x sum n_mu, orthonormal columns
  Matrix projector;
  std::vector<std::size_t> offsets;  // start column of each sector
  std::vector<std::size_t> dims;
  std::size_t dim = 0;
};

inline TruncatedSpace truncate(const ToyHilbert& h) {
  TruncatedSpace out;
  const std::size_t total = h.irreps().sum_dims();
  out.embedding = Matrix::Zero(static_cast<Eigen::Index>(h.dim()), static_cast<Eigen::Index>(total));
  std::size_t col = 0;
  for (std::size_t mu = 0; mu < h.sectors(); ++mu) {
    const auto d = static_cast<Eigen::Index>(h.block_dim(mu));
    Vector e1 = Vector::Zero(d);
    e1(0) = 1.0;
    out.offsets.push_back(col);
    out.dims.push_back(h.block_dim(mu));
    out.embedding.middleCols(static_cast<Eigen::Index>(col), d) = sector_copy(h, mu, e1);
    col += h.block_dim(mu);
  }
  out.dim = total;
  out.projector = out.embedding * out.embedding.adjoint();
  return out;
}

/// Observables compressed to the truncated space, plus how well they fill
/// (+)_mu B(H^mu_tr).
struct TruncatedObservables {
  std::vector<Matrix> generators;
  std::size_t span_dim = 0;      // should equal sum n_mu^2
  double leakage = 0.0;          // max ||(1-P) X P||, truncation is O-invariant
};

inline TruncatedObservables restrict_observables(const TruncatedSpace& t, const ObservableAlgebra& o) {
  TruncatedObservables out;
  const Matrix q = Matrix::Identity(t.projector.rows(), t.projector.cols()) - t.projector;
  for (const auto& x : o.generators) {
    out.generators.push_back(t.embedding.adjoint() * x * t.embedding);
    out.leakage = std::max(out.leakage, max_abs(q * x * t.projector));
  }
  out.span_dim = static_cast<std::size_t>(span_dimension(std::span<const Matrix>(out.generators)));
  return out;
}

struct WightmanResult {
  std::size_t commutant_dim = 0;
  double max_commutator = 0.0;  // relative, over pairs of commutant basis elements
  bool abelian = false;
};

inline constexpr double kAbelianThreshold = 1e-9;

/// Commutant of the given observable generators on a space of dimension
/// `dim`, and whether it is abelian.
inline WightmanResult wightman_check(const std::vector<Matrix>& observables, Eigen::Index dim) {
  WightmanResult out;
  const auto c = commutant(std::span<const Matrix>(observables), dim);
  out.commutant_dim = c.size();
  out.max_commutator = max_relative_commutator(std::span<const Matrix>(c));
  out.abelian = out.max_commutator < kAbelianThreshold;
  return out;
}

inline WightmanResult wightman_check(const ToyHilbert& h, const ObservableAlgebra& o) {
  return wightman_check(o.generators, static_cast<Eigen::Index>(h.dim()));
}

inline WightmanResult wightman_check(const TruncatedSpace& t, const TruncatedObservables& o) {
  return wightman_check(o.generators, static_cast<Eigen::Index>(t.dim));
}

struct JauchResult {
  std::size_t algebra_dim = 0;
  std::size_t commutant_dim = 0;
  bool contained_in_observables = false;
  bool maximal_abelian = false;  // A' == A
};

/// A = span of the rank-one projectors onto the left basis vectors of each
/// sector (tensored with the identity on the gauge index). It is maximal
/// abelian exactly when every sector carries a single copy.
inline JauchResult jauch_check(const ToyHilbert& h, const ObservableAlgebra& o) {
  std::vector<Matrix> a;
  for (std::size_t mu = 0; mu < h.sectors(); ++mu) {
    const std::size_t d = h.block_dim(mu);
    for (std::size_t i = 0; i < d; ++i) {
      Matrix p = Matrix::Zero(static_cast<Eigen::Index>(h.dim()), static_cast<Eigen::Index>(h.dim()));
      for (std::size_t j = 0; j < d; ++j) p(h.index(mu, i, j), h.index(mu, i, j)) = 1.0;
      a.push_back(std::move(p));
    }
  }
  JauchResult out;
  out.algebra_dim = static_cast<std::size_t>(span_dimension(std::span<const Matrix>(a)));
  const auto c = commutant(std::span<const Matrix>(a), static_cast<Eigen::Index>(h.dim()));
  out.commutant_dim = c.size();
  std::vector<Matrix> joint = o.generators;
  joint.insert(joint.end(), a.begin(), a.end());
  out.contained_in_observables =
      span_dimension(std::span<const Matrix>(joint)) == static_cast<Eigen::Index>(o.generators.size());
  std::vector<Matrix> both = a;
  both.insert(both.end(), c.begin(), c.end());
  out.maximal_abelian = out.commutant_dim == out.algebra_dim &&
                        span_dimension(std::span<const Matrix>(both)) == static_cast<Eigen::Index>(out.algebra_dim);
  return out;
}

inline JauchResult jauch_check(const TruncatedSpace& t, const TruncatedObservables& o) {
  std::vector<Matrix> a;
  for (std::size_t k = 0; k < t.dim; ++k) {
    Matrix p = Matrix::Zero(static_cast<Eigen::Index>(t.dim), static_cast<Eigen::Index>(t.dim));
    p(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
    a.push_back(std::move(p));
  }
  JauchResult out;
  out.algebra_dim = t.dim;
  const auto c = commutant(std::span<const Matrix>(a), static_cast<Eigen::Index>(t.dim));
  out.commutant_dim = c.size();
  std::vector<Matrix> joint = o.generators;
  joint.insert(joint.end(), a.begin(), a.end());
  out.contained_in_observables = span_dimension(std::span<const Matrix>(joint)) ==
                                 span_dimension(std::span<const Matrix>(o.generators));
  std::vector<Matrix> both = a;
  both.insert(both.end(), c.begin(), c.end());
  out.maximal_abelian = out.commutant_dim == out.algebra_dim &&
                        span_dimension(std::span<const Matrix>(both)) == static_cast<Eigen::Index>(out.algebra_dim);
  return out;
}

struct GaugeUnitary {
  Element element = 0;
  Matrix action;      // n_mu x n_mu, on H^mu_tr
  cplx phase = 1.0;   // action == phase * identity
  double scalar_residual = 0.0;
  double leakage = 0.0;     // right action leaving H^mu_tr
  double commutator = 0.0;  // with the compressed observables of the sector
};

/// Right action of C^mu on the truncated sector mu. Elements outside C^mu
/// do not preserve H^mu_tr and are not returned.
inline std::vector<GaugeUnitary> residual_gauge_action(const ToyHilbert& h, const TruncatedSpace& t, std::size_t mu,
                                                       const TruncatedObservables& obs, double tol = kDefaultTol) {
  const auto& set = h.irreps();
  const auto cmu = centralizing_subgroup(set.group(), set[mu], tol);
  const auto d = static_cast<Eigen::Index>(t.dims[mu]);
  const Matrix e = t.embedding.middleCols(static_cast<Eigen::Index>(t.offsets[mu]), d);
  const Matrix pe = e * e.adjoint();
  std::vector<GaugeUnitary> out;
  for (Element g : cmu) {
    const Matrix r = h.right_action(g);
    GaugeUnitary u;
    u.element = g;
    u.action = e.adjoint() * r * e;
    u.phase = u.action(0, 0);
    u.scalar_residual = max_abs(u.action - u.phase * Matrix::Identity(d, d));
    u.leakage = max_abs(r * e - pe * r * e);
    for (const auto& x : obs.generators) {
      const Matrix xb = x.block(static_cast<Eigen::Index>(t.offsets[mu]), static_cast<Eigen::Index>(t.offsets[mu]), d, d);
      u.commutator = std::max(u.commutator, max_abs(xb * u.action - u.action * xb));
    }
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace sectorium
