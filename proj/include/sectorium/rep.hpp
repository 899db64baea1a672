#pragma once

// Unitary irreducible representations of a finite group: validation,
// characters, orthogonality relations, multiplicities and complex
// conjugate partners.

#include "sectorium/error.hpp"
#include "sectorium/group.hpp"
#include "sectorium/linalg.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sectorium {

/// Unvalidated representation data: one matrix per group element index.
struct RawIrrep {
  std::string label;
  std::size_t dim = 0;
  std::vector<Matrix> matrices;
};

/// A representation that passed the homomorphism, unitarity and
/// irreducibility checks. Only `validate_irrep` creates one.
class Irrep {
 public:
  const std::string& label() const noexcept { return label_; }
  std::size_t dim() const noexcept { return dim_; }
  const Matrix& operator()(Element g) const { return matrices_[g]; }
  const std::vector<Matrix>& matrices() const noexcept { return matrices_; }
  cplx character(Element g) const { return characters_[g]; }
  const std::vector<cplx>& characters() const noexcept { return characters_; }
  bool is_abelian() const noexcept { return dim_ == 1; }

 private:
  friend Irrep validate_irrep(const FiniteGroup&, RawIrrep, double);
  Irrep(std::string label, std::size_t dim, std::vector<Matrix> matrices)
      : label_(std::move(label)), dim_(dim), matrices_(std::move(matrices)) {
    characters_.reserve(matrices_.size());
    for (const auto& m : matrices_) characters_.push_back(m.trace());
  }

  std::string label_;
  std::size_t dim_;
  std::vector<Matrix> matrices_;
  std::vector<cplx> characters_;
};

inline Irrep validate_irrep(const FiniteGroup& group, RawIrrep raw, double tol = kDefaultTol) {
  const std::size_t n = group.order();
  const auto d = static_cast<Eigen::Index>(raw.dim);
  if (raw.matrices.size() != n) {
    throw Error(ErrorKind::GroupMismatch, "irrep '" + raw.label + "' has " + std::to_string(raw.matrices.size()) +
                                              " matrices for group of order " + std::to_string(n));
  }
  for (Element g = 0; g < n; ++g) {
    if (raw.matrices[g].rows() != d || raw.matrices[g].cols() != d) {
      throw Error(ErrorKind::MalformedInput,
                  "irrep '" + raw.label + "' matrix for element " + group.label(g) + " is not " +
                      std::to_string(raw.dim) + "x" + std::to_string(raw.dim));
    }
    if (!raw.matrices[g].allFinite()) {
      throw Error(ErrorKind::MalformedInput, "irrep '" + raw.label + "' has non-finite entries");
    }
  }
  const Matrix id = Matrix::Identity(d, d);
  for (Element g = 0; g < n; ++g) {
    const double r = max_abs(raw.matrices[g] * raw.matrices[g].adjoint() - id);
    if (r > tol) {
      throw Error(ErrorKind::NonUnitary, "irrep '" + raw.label + "' element " + group.label(g) +
                                             " residual " + std::to_string(r));
    }
  }
  for (Element g = 0; g < n; ++g) {
    for (Element h = 0; h < n; ++h) {
      const double r = max_abs(raw.matrices[g] * raw.matrices[h] - raw.matrices[group.mul(g, h)]);
      if (r > tol) {
        throw Error(ErrorKind::NotAnIrrep, "irrep '" + raw.label + "' not a homomorphism at (" + group.label(g) +
                                               ", " + group.label(h) + "), residual " + std::to_string(r));
      }
    }
  }
  double norm = 0.0;
  for (const auto& m : raw.matrices) norm += std::norm(m.trace());
  if (std::abs(norm - static_cast<double>(n)) > tol * static_cast<double>(n)) {
    throw Error(ErrorKind::NotAnIrrep, "irrep '" + raw.label + "' is reducible: sum |chi|^2 = " +
                                           std::to_string(norm) + " != " + std::to_string(n));
  }
  return Irrep(std::move(raw.label), raw.dim, std::move(raw.matrices));
}

/// Largest deviations from the orthogonality relations of a validated set.
struct OrthogonalityResiduals {
  double grand_orthogonality = 0.0;  // (n_mu/n) sum_g D^mu_ij(g^-1) D^nu_kl(g) - delta delta delta
  double completeness = 0.0;         // sum_{mu,i,j} (n_mu/n) D^mu_ij(g^-1) D^mu_ji(h) - delta_gh
  double inequivalence = 0.0;        // |sum_g chi^mu(g) conj(chi^nu(g))| for mu != nu
  std::string worst_orthogonality_at;
  std::string worst_completeness_at;
};

inline OrthogonalityResiduals orthogonality_residuals(const FiniteGroup& group, const std::vector<Irrep>& irreps) {
  const std::size_t n = group.order();
  const double nd = static_cast<double>(n);
  OrthogonalityResiduals out;
  for (std::size_t mu = 0; mu < irreps.size(); ++mu) {
    for (std::size_t nu = 0; nu < irreps.size(); ++nu) {
      const auto& a = irreps[mu];
      const auto& b = irreps[nu];
      const auto da = static_cast<Eigen::Index>(a.dim());
      const auto db = static_cast<Eigen::Index>(b.dim());
      for (Eigen::Index i = 0; i < da; ++i)
        for (Eigen::Index j = 0; j < da; ++j)
          for (Eigen::Index k = 0; k < db; ++k)
            for (Eigen::Index l = 0; l < db; ++l) {
              cplx s = 0.0;
              for (Element g = 0; g < n; ++g) s += a(group.inverse(g))(i, j) * b(g)(k, l);
              s *= static_cast<double>(a.dim()) / nd;
              const double expected = (mu == nu && i == l && j == k) ? 1.0 : 0.0;
              if (std::abs(s - expected) > out.grand_orthogonality) {
                out.grand_orthogonality = std::abs(s - expected);
                out.worst_orthogonality_at = "(mu=" + std::to_string(mu) + ", nu=" + std::to_string(nu) +
                                             ", i=" + std::to_string(i) + ", j=" + std::to_string(j) +
                                             ", k=" + std::to_string(k) + ", l=" + std::to_string(l) + ")";
              }
            }
      if (mu != nu) {
        cplx s = 0.0;
        for (Element g = 0; g < n; ++g) s += a.character(g) * std::conj(b.character(g));
        out.inequivalence = std::max(out.inequivalence, std::abs(s));
      }
    }
  }
  for (Element g = 0; g < n; ++g) {
    for (Element h = 0; h < n; ++h) {
      cplx s = 0.0;
      for (const auto& r : irreps)
        s += static_cast<double>(r.dim()) / nd * (r(group.inverse(g)) * r(h)).trace();
      if (std::abs(s - (g == h ? 1.0 : 0.0)) > out.completeness) {
        out.completeness = std::abs(s - (g == h ? 1.0 : 0.0));
        out.worst_completeness_at = "(g=" + group.label(g) + ", h=" + group.label(h) + ")";
      }
    }
  }
  return out;
}

/// A complete set of pairwise inequivalent unitary irreps of one group.
class IrrepSet {
 public:
  const FiniteGroup& group() const noexcept { return group_; }
  const std::vector<Irrep>& irreps() const noexcept { return irreps_; }
  const Irrep& operator[](std::size_t mu) const { return irreps_.at(mu); }
  std::size_t count() const noexcept { return irreps_.size(); }
  std::size_t order() const noexcept { return group_.order(); }
  const OrthogonalityResiduals& residuals() const noexcept { return residuals_; }

  std::vector<std::size_t> dims() const {
    std::vector<std::size_t> out;
    for (const auto& r : irreps_) out.push_back(r.dim());
    return out;
  }
  std::size_t sum_dims() const {
    std::size_t s = 0;
    for (const auto& r : irreps_) s += r.dim();
    return s;
  }
  std::optional<std::size_t> find(const std::string& label) const {
    for (std::size_t mu = 0; mu < irreps_.size(); ++mu)
      if (irreps_[mu].label() == label) return mu;
    return std::nullopt;
  }

 private:
  friend IrrepSet validate_irrep_set(const FiniteGroup&, std::vector<RawIrrep>, double);
  IrrepSet(FiniteGroup group, std::vector<Irrep> irreps, OrthogonalityResiduals residuals)
      : group_(std::move(group)), irreps_(std::move(irreps)), residuals_(residuals) {}

  FiniteGroup group_;
  std::vector<Irrep> irreps_;
  OrthogonalityResiduals residuals_;
};

/// Validates every irrep, then the set: sum n_mu^2 == n, pairwise
/// inequivalence, grand orthogonality and completeness.
inline IrrepSet validate_irrep_set(const FiniteGroup& group, std::vector<RawIrrep> raw, double tol = kDefaultTol) {
  std::vector<Irrep> irreps;
  irreps.reserve(raw.size());
  for (auto& r : raw) irreps.push_back(validate_irrep(group, std::move(r), tol));

  std::size_t sum_sq = 0;
  for (const auto& r : irreps) sum_sq += r.dim() * r.dim();
  if (sum_sq != group.order()) {
    throw Error(ErrorKind::IncompleteSet, "sum of squared dimensions " + std::to_string(sum_sq) +
                                              " != group order " + std::to_string(group.order()));
  }
  const double nd = static_cast<double>(group.order());
  for (std::size_t mu = 0; mu < irreps.size(); ++mu) {
    for (std::size_t nu = mu + 1; nu < irreps.size(); ++nu) {
      cplx s = 0.0;
      for (Element g = 0; g < group.order(); ++g)
        s += irreps[mu].character(g) * std::conj(irreps[nu].character(g));
      if (std::abs(s) > tol * nd) {
        throw Error(ErrorKind::OrthogonalityViolation, "irreps '" + irreps[mu].label() + "' and '" +
                                                           irreps[nu].label() + "' are equivalent (overlap " +
                                                           std::to_string(std::abs(s)) + ")");
      }
    }
  }
  const auto res = orthogonality_residuals(group, irreps);
  if (res.grand_orthogonality > tol) {
    throw Error(ErrorKind::OrthogonalityViolation,
                "grand orthogonality residual " + std::to_string(res.grand_orthogonality) + " at " +
                    res.worst_orthogonality_at);
  }
  if (res.completeness > tol) {
    throw Error(ErrorKind::IncompleteSet, "completeness residual " + std::to_string(res.completeness) + " at " +
                                              res.worst_completeness_at);
  }
  return IrrepSet(group, std::move(irreps), res);
}

struct CharacterTable {
  std::vector<std::vector<Element>> classes;
  Matrix values;  // m x (number of classes)

  /// max |(1/n) sum_g conj(chi^mu) chi^nu - delta|, using class sizes as weights.
  double orthonormality_residual(std::size_t order) const {
    const auto m = values.rows();
    double worst = 0.0;
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index b = 0; b < m; ++b) {
        cplx s = 0.0;
        for (std::size_t c = 0; c < classes.size(); ++c)
          s += static_cast<double>(classes[c].size()) * std::conj(values(a, static_cast<Eigen::Index>(c))) *
               values(b, static_cast<Eigen::Index>(c));
        s /= static_cast<double>(order);
        worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
      }
    return worst;
  }
};

inline CharacterTable character_table(const IrrepSet& set) {
  const auto cs = conjugacy_structure(set.group());
  CharacterTable out{cs.classes, Matrix(static_cast<Eigen::Index>(set.count()),
                                        static_cast<Eigen::Index>(cs.classes.size()))};
  for (std::size_t mu = 0; mu < set.count(); ++mu)
    for (std::size_t c = 0; c < cs.classes.size(); ++c)
      out.values(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(c)) = set[mu].character(cs.classes[c].front());
  return out;
}

/// Number of times irrep `mu` occurs in a representation with the given
/// character values (one per element index).
inline std::size_t multiplicity(const std::vector<cplx>& chi, const IrrepSet& set, std::size_t mu,
                                double tol = 1e-8) {
  if (chi.size() != set.order()) {
    throw Error(ErrorKind::GroupMismatch, "character has " + std::to_string(chi.size()) + " values for order " +
                                              std::to_string(set.order()));
  }
  cplx s = 0.0;
  for (Element g = 0; g < set.order(); ++g) s += std::conj(set[mu].character(g)) * chi[g];
  s /= static_cast<double>(set.order());
  const double rounded = std::round(s.real());
  if (std::abs(s - cplx(rounded, 0.0)) > tol || rounded < 0.0) {
    throw Error(ErrorKind::NonIntegralMultiplicity, "irrep '" + set[mu].label() + "' inner product (" +
                                                        std::to_string(s.real()) + ", " + std::to_string(s.imag()) +
                                                        ")");
  }
  return static_cast<std::size_t>(rounded);
}

/// Intertwiner U with U * lhs(g) = rhs(g) * U for all g, normalized unitary.
/// Returns nullopt when the two families are inequivalent.
inline std::optional<Matrix> unitary_intertwiner(const std::vector<Matrix>& lhs, const std::vector<Matrix>& rhs) {
  if (lhs.empty() || lhs.size() != rhs.size()) return std::nullopt;
  const Eigen::Index d = lhs.front().rows();
  if (rhs.front().rows() != d) return std::nullopt;
  const Matrix id = Matrix::Identity(d, d);
  Matrix stacked(static_cast<Eigen::Index>(lhs.size()) * d * d, d * d);
  for (std::size_t k = 0; k < lhs.size(); ++k)
    stacked.middleRows(static_cast<Eigen::Index>(k) * d * d, d * d) = kron(lhs[k].transpose(), id) - kron(id, rhs[k]);
  const Matrix ns = nullspace(stacked);
  if (ns.cols() == 0) return std::nullopt;
  Matrix u = unvec(ns.col(0), d);
  // Schur: U^dagger U is a positive multiple of the identity.
  const double scale = (u.adjoint() * u).trace().real() / static_cast<double>(d);
  u /= std::sqrt(scale);
  // Fix the global phase so the largest entry is real positive.
  Eigen::Index r = 0, c = 0;
  u.cwiseAbs().maxCoeff(&r, &c);
  u *= std::conj(u(r, c)) / std::abs(u(r, c));
  return u;
}

struct ConjugatePartner {
  std::size_t mu;
  std::size_t partner;
  // conj(D^mu(g)) == U^dagger D^partner(g) U for all g.
  Matrix witness;
  bool self_conjugate() const noexcept { return mu == partner; }
};

/// The irrep whose character is the complex conjugate of chi^mu, together
/// with the unitary witnessing conj(D^mu) = U^dagger D^partner U.
inline ConjugatePartner conjugate_partner(const IrrepSet& set, std::size_t mu, double tol = 1e-8) {
  const auto& d = set[mu];
  for (std::size_t lam = 0; lam < set.count(); ++lam) {
    const auto& cand = set[lam];
    if (cand.dim() != d.dim()) continue;
    double worst = 0.0;
    for (Element g = 0; g < set.order(); ++g)
      worst = std::max(worst, std::abs(cand.character(g) - std::conj(d.character(g))));
    if (worst > tol) continue;
    std::vector<Matrix> conj_mats;
    for (const auto& m : d.matrices()) conj_mats.push_back(m.conjugate());
    auto u = unitary_intertwiner(conj_mats, cand.matrices());
    if (!u) continue;
    return {mu, lam, *u};
  }
  // Unreachable for a complete validated set.
  throw Error(ErrorKind::IncompleteSet, "no conjugate partner for irrep '" + d.label() + "'");
}

/// C^mu = { h : D(h f) == D(f h) for all f }, the elements mapped into the
/// center of D(G). The result is a normal subgroup on which D is constant
/// over conjugacy classes (checked, throws NotAnIrrep otherwise).
inline std::vector<Element> centralizing_subgroup(const FiniteGroup& group, const Irrep& irrep,
                                                  double tol = kDefaultTol) {
  if (irrep.matrices().size() != group.order()) {
    throw Error(ErrorKind::GroupMismatch, "irrep '" + irrep.label() + "' does not belong to group " + group.name());
  }
  std::vector<Element> out;
  for (Element h = 0; h < group.order(); ++h) {
    bool central = true;
    for (Element f = 0; f < group.order() && central; ++f)
      central = max_abs(irrep(group.mul(h, f)) - irrep(group.mul(f, h))) <= tol;
    if (central) out.push_back(h);
  }
  if (!group.is_normal_subgroup(out)) {
    throw Error(ErrorKind::NotAnIrrep, "centralizing subset of '" + irrep.label() + "' is not a normal subgroup");
  }
  for (Element h : out)
    for (Element f = 0; f < group.order(); ++f)
      if (max_abs(irrep(group.conjugate(f, h)) - irrep(h)) > tol) {
        throw Error(ErrorKind::NotAnIrrep, "irrep '" + irrep.label() + "' not constant on the class of " +
                                               group.label(h));
      }
  return out;
}

/// Raw irrep conjugated by a unitary, D -> U D U^dagger.
inline RawIrrep transform_irrep(const Irrep& irrep, const Matrix& u) {
  RawIrrep out{irrep.label(), irrep.dim(), {}};
  for (const auto& m : irrep.matrices()) out.matrices.push_back(u * m * u.adjoint());
  return out;
}

inline std::vector<RawIrrep> to_raw(const IrrepSet& set) {
  std::vector<RawIrrep> out;
  for (const auto& r : set.irreps()) out.push_back({r.label(), r.dim(), r.matrices()});
  return out;
}

}  // namespace sectorium
