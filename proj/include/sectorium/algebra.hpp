#pragma once

// The group algebra V_G: convolution, sector components, the adapted
// matrix-unit basis, center / maximal abelian / centralizer subalgebras,
// the bi-invariant inner product and the *-involution.

#include "sectorium/error.hpp"
#include "sectorium/linalg.hpp"
#include "sectorium/rep.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace sectorium {

/// v = sum_g v(g) g-hat, stored as the coefficient vector indexed by element.
struct AlgebraElement {
  Vector coeffs;

  AlgebraElement() = default;
  explicit AlgebraElement(Vector c) : coeffs(std::move(c)) {}

  static AlgebraElement zero(std::size_t n) { return AlgebraElement(Vector::Zero(static_cast<Eigen::Index>(n))); }
  static AlgebraElement basis(std::size_t n, Element g) {
    auto v = zero(n);
    v.coeffs(static_cast<Eigen::Index>(g)) = 1.0;
    return v;
  }

  std::size_t size() const noexcept { return static_cast<std::size_t>(coeffs.size()); }
  cplx operator()(Element g) const { return coeffs(static_cast<Eigen::Index>(g)); }

  AlgebraElement operator+(const AlgebraElement& o) const { return AlgebraElement(coeffs + o.coeffs); }
  AlgebraElement operator-(const AlgebraElement& o) const { return AlgebraElement(coeffs - o.coeffs); }
  AlgebraElement operator*(cplx s) const { return AlgebraElement(coeffs * s); }
};

inline void require_same_group(const FiniteGroup& group, const AlgebraElement& v) {
  if (v.size() != group.order()) {
    throw Error(ErrorKind::GroupMismatch, "element of length " + std::to_string(v.size()) + " for group " +
                                              group.name() + " of order " + std::to_string(group.order()));
  }
  if (!v.coeffs.allFinite()) throw Error(ErrorKind::MalformedInput, "algebra element has non-finite coefficients");
}

/// (v.w)(g) = sum_h v(g h^-1) w(h).
inline AlgebraElement multiply(const FiniteGroup& group, const AlgebraElement& v, const AlgebraElement& w) {
  require_same_group(group, v);
  require_same_group(group, w);
  auto out = AlgebraElement::zero(group.order());
  for (Element g = 0; g < group.order(); ++g) {
    cplx s = 0.0;
    for (Element h = 0; h < group.order(); ++h) s += v(group.mul(g, group.inverse(h))) * w(h);
    out.coeffs(static_cast<Eigen::Index>(g)) = s;
  }
  return out;
}

/// Matrix of w -> v.w in the group-element basis.
inline Matrix left_multiplication(const FiniteGroup& group, const AlgebraElement& v) {
  const auto n = static_cast<Eigen::Index>(group.order());
  Matrix m = Matrix::Zero(n, n);
  for (Element a = 0; a < group.order(); ++a)
    for (Element h = 0; h < group.order(); ++h)
      m(static_cast<Eigen::Index>(group.mul(a, h)), static_cast<Eigen::Index>(h)) += v(a);
  return m;
}

/// Matrix of w -> w.v in the group-element basis.
inline Matrix right_multiplication(const FiniteGroup& group, const AlgebraElement& v) {
  const auto n = static_cast<Eigen::Index>(group.order());
  Matrix m = Matrix::Zero(n, n);
  for (Element a = 0; a < group.order(); ++a)
    for (Element h = 0; h < group.order(); ++h)
      m(static_cast<Eigen::Index>(group.mul(h, a)), static_cast<Eigen::Index>(h)) += v(a);
  return m;
}

/// v^mu_ij for every mu.
struct SectorComponents {
  std::vector<Matrix> blocks;
};

/// v^mu_ij = sum_g v(g) D^mu_ij(g).
inline SectorComponents to_sectors(const AlgebraElement& v, const IrrepSet& set) {
  require_same_group(set.group(), v);
  SectorComponents out;
  for (const auto& r : set.irreps()) {
    const auto d = static_cast<Eigen::Index>(r.dim());
    Matrix block = Matrix::Zero(d, d);
    for (Element g = 0; g < set.order(); ++g) block += v(g) * r(g);
    out.blocks.push_back(std::move(block));
  }
  return out;
}

/// v(g) = sum_{mu,i,j} (n_mu/n) v^mu_ij D^mu_ji(g^-1).
inline AlgebraElement from_sectors(const SectorComponents& c, const IrrepSet& set) {
  const auto& group = set.group();
  auto out = AlgebraElement::zero(group.order());
  const double n = static_cast<double>(group.order());
  for (Element g = 0; g < group.order(); ++g) {
    cplx s = 0.0;
    for (std::size_t mu = 0; mu < set.count(); ++mu)
      s += static_cast<double>(set[mu].dim()) / n * (c.blocks[mu] * set[mu](group.inverse(g))).trace();
    out.coeffs(static_cast<Eigen::Index>(g)) = s;
  }
  return out;
}

/// Matrix units e^mu_ij = (n_mu/n) sum_g D^mu_ij(g^-1) g-hat.
class AdaptedBasis {
 public:
  explicit AdaptedBasis(const IrrepSet& set) : set_(set) {
    const auto& group = set.group();
    const double n = static_cast<double>(group.order());
    for (const auto& r : set.irreps()) {
      std::vector<std::vector<AlgebraElement>> block(r.dim(), std::vector<AlgebraElement>(r.dim()));
      for (std::size_t i = 0; i < r.dim(); ++i)
        for (std::size_t j = 0; j < r.dim(); ++j) {
          auto e = AlgebraElement::zero(group.order());
          for (Element g = 0; g < group.order(); ++g)
            e.coeffs(static_cast<Eigen::Index>(g)) =
                static_cast<double>(r.dim()) / n * r(group.inverse(g))(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
          block[i][j] = std::move(e);
        }
      units_.push_back(std::move(block));
    }
  }

  const IrrepSet& irreps() const noexcept { return set_; }
  const FiniteGroup& group() const noexcept { return set_.group(); }

  const AlgebraElement& unit(std::size_t mu, std::size_t i, std::size_t j) const { return units_.at(mu).at(i).at(j); }

  /// e^mu_i = e^mu_ii.
  const AlgebraElement& idempotent(std::size_t mu, std::size_t i) const { return unit(mu, i, i); }

  /// e^mu = sum_i e^mu_ii, the central idempotent of sector mu.
  AlgebraElement central_idempotent(std::size_t mu) const {
    auto out = AlgebraElement::zero(group().order());
    for (std::size_t i = 0; i < set_[mu].dim(); ++i) out = out + idempotent(mu, i);
    return out;
  }

  /// sum_{i,j} a_i conj(a_j) e^mu_ij, the primitive idempotent selecting
  /// the copy labelled by the unit vector a.
  AlgebraElement idempotent(std::size_t mu, const Vector& a) const {
    auto out = AlgebraElement::zero(group().order());
    for (std::size_t i = 0; i < set_[mu].dim(); ++i)
      for (std::size_t j = 0; j < set_[mu].dim(); ++j)
        out = out + unit(mu, i, j) * (a(static_cast<Eigen::Index>(i)) * std::conj(a(static_cast<Eigen::Index>(j))));
    return out;
  }

  /// Flat list of all n basis vectors in (mu, i, j) order.
  std::vector<AlgebraElement> all() const {
    std::vector<AlgebraElement> out;
    for (const auto& block : units_)
      for (const auto& row : block)
        for (const auto& e : row) out.push_back(e);
    return out;
  }

  /// Columns are the coefficient vectors of the given elements.
  static Matrix as_columns(const std::vector<AlgebraElement>& elems, std::size_t n) {
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(elems.size()));
    for (std::size_t k = 0; k < elems.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = elems[k].coeffs;
    return m;
  }

 private:
  IrrepSet set_;
  std::vector<std::vector<std::vector<AlgebraElement>>> units_;
};

inline AdaptedBasis adapted_basis(const IrrepSet& set) { return AdaptedBasis(set); }

struct BasisResiduals {
  double multiplication_law = 0.0;      // e^mu_ij e^nu_kl - delta_mu_nu delta_il e^mu_kj
  double resolution_of_identity = 0.0;  // sum_{mu,i} e^mu_i - e
  double orthogonal_idempotents = 0.0;  // e^mu_i e^nu_j - delta delta e^mu_i
  double left_action = 0.0;             // h.e^mu_ij - sum_k e^mu_ik D^mu_kj(h)
  double right_action = 0.0;            // e^mu_ij.h - sum_k D^mu_ik(h) e^mu_kj
};

/// Checks every pair of basis vectors against the matrix-unit law; this is
/// the expensive path (n^2 convolutions).
inline BasisResiduals basis_residuals(const AdaptedBasis& basis) {
  const auto& group = basis.group();
  const auto& set = basis.irreps();
  const std::size_t n = group.order();
  BasisResiduals out;
  for (std::size_t mu = 0; mu < set.count(); ++mu)
    for (std::size_t nu = 0; nu < set.count(); ++nu)
      for (std::size_t i = 0; i < set[mu].dim(); ++i)
        for (std::size_t j = 0; j < set[mu].dim(); ++j)
          for (std::size_t k = 0; k < set[nu].dim(); ++k)
            for (std::size_t l = 0; l < set[nu].dim(); ++l) {
              const auto prod = multiply(group, basis.unit(mu, i, j), basis.unit(nu, k, l));
              auto expected = AlgebraElement::zero(n);
              if (mu == nu && i == l) expected = basis.unit(mu, k, j);
              out.multiplication_law = std::max(out.multiplication_law, max_abs(prod.coeffs - expected.coeffs));
              if (i == j && k == l) {
                auto e2 = AlgebraElement::zero(n);
                if (mu == nu && i == k) e2 = basis.idempotent(mu, i);
                out.orthogonal_idempotents = std::max(out.orthogonal_idempotents, max_abs(prod.coeffs - e2.coeffs));
              }
            }
  auto sum = AlgebraElement::zero(n);
  for (std::size_t mu = 0; mu < set.count(); ++mu)
    for (std::size_t i = 0; i < set[mu].dim(); ++i) sum = sum + basis.idempotent(mu, i);
  out.resolution_of_identity = max_abs(sum.coeffs - AlgebraElement::basis(n, group.identity()).coeffs);

  for (Element h = 0; h < n; ++h) {
    const auto hh = AlgebraElement::basis(n, h);
    for (std::size_t mu = 0; mu < set.count(); ++mu) {
      const auto& d = set[mu](h);
      const std::size_t dim = set[mu].dim();
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
          auto left = AlgebraElement::zero(n), right = AlgebraElement::zero(n);
          for (std::size_t k = 0; k < dim; ++k) {
            left = left + basis.unit(mu, i, k) * d(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
            right = right + basis.unit(mu, k, j) * d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
          }
          out.left_action = std::max(out.left_action, max_abs(multiply(group, hh, basis.unit(mu, i, j)).coeffs - left.coeffs));
          out.right_action = std::max(out.right_action, max_abs(multiply(group, basis.unit(mu, i, j), hh).coeffs - right.coeffs));
        }
    }
  }
  return out;
}

/// Dimensions of the distinguished subalgebras, each obtained as the
/// nullspace of a stacked commutator map and compared against the explicit
/// span predicted by the matrix-unit structure.
struct SubalgebraReport {
  Matrix center;          // columns: basis of {v : v g = g v for all g}
  Matrix maximal_abelian; // columns: basis of the commutant of A inside V_G
  std::vector<Matrix> centralizers;  // Z^mu: commutant of V^mu inside V_G
  std::size_t center_dim = 0;
  std::size_t abelian_dim = 0;
  std::vector<std::size_t> centralizer_dims;
  // Largest principal-angle sine between the computed nullspace and the
  // predicted span: span{e^mu}, span{e^mu_i}, V^nu (nu != mu) + span{e^mu}.
  double center_span_mismatch = 0.0;
  double abelian_span_mismatch = 0.0;
  double centralizer_span_mismatch = 0.0;
  // Pairwise commutator norm inside the computed A (should vanish).
  double abelian_commutator = 0.0;
};

inline SubalgebraReport center_and_subalgebras(const AdaptedBasis& basis) {
  const auto& group = basis.group();
  const auto& set = basis.irreps();
  const std::size_t n = group.order();
  const auto ni = static_cast<Eigen::Index>(n);

  auto commutant_in_algebra = [&](const std::vector<AlgebraElement>& elems) {
    Matrix stacked(static_cast<Eigen::Index>(elems.size()) * ni, ni);
    for (std::size_t k = 0; k < elems.size(); ++k)
      stacked.middleRows(static_cast<Eigen::Index>(k) * ni, ni) =
          left_multiplication(group, elems[k]) - right_multiplication(group, elems[k]);
    return nullspace(stacked);
  };

  SubalgebraReport out;
  std::vector<AlgebraElement> group_elems;
  for (Element g = 0; g < n; ++g) group_elems.push_back(AlgebraElement::basis(n, g));
  out.center = commutant_in_algebra(group_elems);
  out.center_dim = static_cast<std::size_t>(out.center.cols());

  std::vector<AlgebraElement> central, abelian;
  for (std::size_t mu = 0; mu < set.count(); ++mu) {
    central.push_back(basis.central_idempotent(mu));
    for (std::size_t i = 0; i < set[mu].dim(); ++i) abelian.push_back(basis.idempotent(mu, i));
  }
  out.center_span_mismatch =
      max_principal_angle_sine(out.center, column_span(AdaptedBasis::as_columns(central, n)));

  out.maximal_abelian = commutant_in_algebra(abelian);
  out.abelian_dim = static_cast<std::size_t>(out.maximal_abelian.cols());
  out.abelian_span_mismatch =
      max_principal_angle_sine(out.maximal_abelian, column_span(AdaptedBasis::as_columns(abelian, n)));
  {
    std::vector<Matrix> mats;
    for (Eigen::Index c = 0; c < out.maximal_abelian.cols(); ++c)
      mats.push_back(left_multiplication(group, AlgebraElement(out.maximal_abelian.col(c))));
    out.abelian_commutator = max_relative_commutator(mats);
  }

  for (std::size_t mu = 0; mu < set.count(); ++mu) {
    std::vector<AlgebraElement> sector;
    for (std::size_t i = 0; i < set[mu].dim(); ++i)
      for (std::size_t j = 0; j < set[mu].dim(); ++j) sector.push_back(basis.unit(mu, i, j));
    Matrix z = commutant_in_algebra(sector);
    std::vector<AlgebraElement> predicted{basis.central_idempotent(mu)};
    for (std::size_t nu = 0; nu < set.count(); ++nu) {
      if (nu == mu) continue;
      for (std::size_t i = 0; i < set[nu].dim(); ++i)
        for (std::size_t j = 0; j < set[nu].dim(); ++j) predicted.push_back(basis.unit(nu, i, j));
    }
    out.centralizer_span_mismatch = std::max(
        out.centralizer_span_mismatch, max_principal_angle_sine(z, column_span(AdaptedBasis::as_columns(predicted, n))));
    out.centralizer_dims.push_back(static_cast<std::size_t>(z.cols()));
    out.centralizers.push_back(std::move(z));
  }
  return out;
}

/// lambda^mu = n_mu / n^2, the unique weights making the inner product both
/// left- and right-invariant with <g|h> = delta_gh / n.
struct InnerProductConfig {
  std::vector<double> lambda;

  static InnerProductConfig for_set(const IrrepSet& set) {
    InnerProductConfig cfg;
    const double n = static_cast<double>(set.order());
    for (const auto& r : set.irreps()) cfg.lambda.push_back(static_cast<double>(r.dim()) / (n * n));
    return cfg;
  }
};

/// <v|w> = sum_g conj(v(g)) w(g) / n, antilinear in v.
inline cplx inner_product(const AlgebraElement& v, const AlgebraElement& w) {
  return v.coeffs.dot(w.coeffs) / static_cast<double>(v.size());
}

/// The same inner product evaluated on sector components:
/// sum_{mu,i,k} lambda^mu conj(v^mu_ik) w^mu_ik.
inline cplx inner_product(const AlgebraElement& v, const AlgebraElement& w, const IrrepSet& set,
                          const InnerProductConfig& cfg) {
  const auto sv = to_sectors(v, set);
  const auto sw = to_sectors(w, set);
  cplx s = 0.0;
  for (std::size_t mu = 0; mu < set.count(); ++mu)
    s += cfg.lambda[mu] * (sv.blocks[mu].conjugate().cwiseProduct(sw.blocks[mu])).sum();
  return s;
}

/// (v*)(g) = conj(v(g^-1)).
inline AlgebraElement star(const FiniteGroup& group, const AlgebraElement& v) {
  require_same_group(group, v);
  auto out = AlgebraElement::zero(group.order());
  for (Element g = 0; g < group.order(); ++g)
    out.coeffs(static_cast<Eigen::Index>(g)) = std::conj(v(group.inverse(g)));
  return out;
}

struct RankOneResult {
  bool is_irreducible_member = false;
  std::optional<std::size_t> mu;
  Vector a;  // left factor
  Vector b;  // right factor; block == a b^T
  std::size_t nonzero_blocks = 0;
};

/// Rank-one test on a single block: sigma_2 < ratio * sigma_1.
inline RankOneResult rank_one_block(const Matrix& block, double ratio = kRankOneRatio) {
  RankOneResult out;
  Eigen::JacobiSVD<Matrix> svd(block, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return out;
  const double second = sv.size() > 1 ? sv(1) : 0.0;
  if (second < ratio * sv(0)) {
    out.is_irreducible_member = true;
    out.a = svd.matrixU().col(0) * sv(0);
    out.b = svd.matrixV().col(0).conjugate();
  }
  return out;
}

/// Whether v lies in a left (equivalently right) irreducible subspace:
/// exactly one nonzero sector block, and that block has rank one.
inline RankOneResult rank_one_test(const AlgebraElement& v, const IrrepSet& set, double ratio = kRankOneRatio) {
  const auto sc = to_sectors(v, set);
  double total = 0.0;
  for (const auto& b : sc.blocks) total = std::max(total, b.norm());
  RankOneResult out;
  if (total == 0.0) return out;
  std::size_t which = 0;
  for (std::size_t mu = 0; mu < sc.blocks.size(); ++mu) {
    if (sc.blocks[mu].norm() > ratio * total) {
      ++out.nonzero_blocks;
      which = mu;
    }
  }
  if (out.nonzero_blocks != 1) return out;
  auto r = rank_one_block(sc.blocks[which], ratio);
  r.nonzero_blocks = 1;
  r.mu = which;
  return r;
}

/// For an operator on V_G (matrix in the group-element basis) commuting
/// with every right multiplication, the element o with O(v) = o.v,
/// assembled from the sector matrix elements
/// o = sum_{mu,i,k} (1/lambda^mu) O^mu_ik e^mu_ki with
/// O^mu_km = (1/n_mu) sum_r <e^mu_rk|O|e^mu_rm>.
inline AlgebraElement recover_left_multiplier(const AdaptedBasis& basis, const Matrix& op) {
  const auto& set = basis.irreps();
  const auto cfg = InnerProductConfig::for_set(set);
  const std::size_t n = basis.group().order();
  auto out = AlgebraElement::zero(n);
  for (std::size_t mu = 0; mu < set.count(); ++mu) {
    const std::size_t d = set[mu].dim();
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < d; ++k) {
        cplx o = 0.0;
        for (std::size_t r = 0; r < d; ++r)
          o += inner_product(basis.unit(mu, r, i), AlgebraElement(op * basis.unit(mu, r, k).coeffs));
        o /= static_cast<double>(d);
        out = out + basis.unit(mu, k, i) * (o / cfg.lambda[mu]);
      }
  }
  return out;
}

/// Matrix units after the change D^mu -> U D^mu U^dagger, computed as
/// e'^mu_ij = sum_{k,l} U_ik conj(U_jl) e^mu_kl.
inline std::vector<std::vector<AlgebraElement>> conjugated_units(const AdaptedBasis& basis, std::size_t mu,
                                                                  const Matrix& u) {
  const std::size_t d = basis.irreps()[mu].dim();
  const std::size_t n = basis.group().order();
  std::vector<std::vector<AlgebraElement>> out(d, std::vector<AlgebraElement>(d, AlgebraElement::zero(n)));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l)
          out[i][j] = out[i][j] + basis.unit(mu, k, l) *
                                      (u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) *
                                       std::conj(u(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l))));
  return out;
}

}  // namespace sectorium
