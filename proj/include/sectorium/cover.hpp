#pragma once

// Functions on a finite principal G-cover Q x G with the free right action
// (q, h) g = (q, hg): the lift/evaluation pair F/E onto V_G-valued
// equivariant functions, right V_G action, sector projectors, invariant
// kernels and propagators, localization, voltage holonomy, gauge
// transformations and the C^mu action.
//
// Points are indexed p = q * n + h. Functions on the cover are vectors of
// length |Q| n; V_G-valued functions are vectors of length |Q| n^2 indexed
// p * n + x (value at p, coefficient of x-hat). Kernels are stored as the
// operator matrices they induce; the uniform weight 1/|Q x G| cancels from
// every formula used here.

#include "sectorium/algebra.hpp"
#include "sectorium/error.hpp"
#include "sectorium/linalg.hpp"
#include "sectorium/rep.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <string>
#include <vector>

namespace sectorium {

struct CoverEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  Element voltage = 0;
};

class DiscreteCover {
 public:
  DiscreteCover(std::size_t base_size, FiniteGroup group, std::vector<CoverEdge> edges = {})
      : base_(base_size), group_(std::move(group)), edges_(std::move(edges)) {
    if (base_ == 0) throw Error(ErrorKind::MalformedInput, "base_size must be positive");
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      const auto& e = edges_[k];
      if (e.from >= base_ || e.to >= base_)
        throw Error(ErrorKind::MalformedInput, "edges[" + std::to_string(k) + "] has an endpoint outside the base");
      if (e.voltage >= group_.order())
        throw Error(ErrorKind::MalformedInput, "edges[" + std::to_string(k) + "] has an unknown voltage");
    }
  }

  std::size_t base_size() const noexcept { return base_; }
  const FiniteGroup& group() const noexcept { return group_; }
  std::size_t order() const noexcept { return group_.order(); }
  const std::vector<CoverEdge>& edges() const noexcept { return edges_; }
  std::size_t points() const noexcept { return base_ * group_.order(); }

  std::size_t point(std::size_t q, Element h) const { return q * order() + h; }
  std::size_t base_of(std::size_t p) const { return p / order(); }
  Element sheet_of(std::size_t p) const { return p % order(); }
  /// R_g(q, h) = (q, hg).
  std::size_t act(std::size_t p, Element g) const { return point(base_of(p), group_.mul(sheet_of(p), g)); }

  /// Uniform discrete measure of each cover point.
  double weight() const { return 1.0 / static_cast<double>(points()); }

 private:
  std::size_t base_;
  FiniteGroup group_;
  std::vector<CoverEdge> edges_;
};

/// Inner product on functions over the cover with uniform weight.
inline cplx cover_inner(const DiscreteCover& c, const Vector& psi, const Vector& phi) {
  return psi.dot(phi) * c.weight();
}

/// Inner product on V_G-valued functions: the fiber inner product
/// <v|w> = sum_g conj(v(g)) w(g) / n integrated with the uniform weight.
inline cplx equivariant_inner(const DiscreteCover& c, const Vector& psi, const Vector& phi) {
  return psi.dot(phi) * c.weight() / static_cast<double>(c.order());
}

/// Max over p, g of |psi(R_g p) - (g^-1)-hat . psi(p)|.
inline double equivariance_residual(const DiscreteCover& c, const Vector& psihat) {
  const std::size_t n = c.order();
  const auto& grp = c.group();
  double worst = 0.0;
  for (std::size_t p = 0; p < c.points(); ++p)
    for (Element g = 0; g < n; ++g) {
      const std::size_t pg = c.act(p, g);
      for (Element x = 0; x < n; ++x) {
        // ((g^-1)-hat . w)(x) = w(g x)
        const cplx lhs = psihat(static_cast<Eigen::Index>(pg * n + x));
        const cplx rhs = psihat(static_cast<Eigen::Index>(p * n + grp.mul(g, x)));
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
  return worst;
}

/// F(psi)(p) = sum_g g-hat psi(R_g p), i.e. component x at p is psi(p x).
inline Matrix lift_matrix(const DiscreteCover& c) {
  const std::size_t n = c.order();
  Matrix f = Matrix::Zero(static_cast<Eigen::Index>(c.points() * n), static_cast<Eigen::Index>(c.points()));
  for (std::size_t p = 0; p < c.points(); ++p)
    for (Element x = 0; x < n; ++x) f(static_cast<Eigen::Index>(p * n + x), static_cast<Eigen::Index>(c.act(p, x))) = 1.0;
  return f;
}

/// E(psihat) = psihat_e, the identity component.
inline Matrix eval_matrix(const DiscreteCover& c) {
  const std::size_t n = c.order();
  Matrix e = Matrix::Zero(static_cast<Eigen::Index>(c.points()), static_cast<Eigen::Index>(c.points() * n));
  for (std::size_t p = 0; p < c.points(); ++p)
    e(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p * n + c.group().identity())) = 1.0;
  return e;
}

inline Vector lift_map_F(const DiscreteCover& c, const Vector& psi) {
  const std::size_t n = c.order();
  Vector out(static_cast<Eigen::Index>(c.points() * n));
  for (std::size_t p = 0; p < c.points(); ++p)
    for (Element x = 0; x < n; ++x)
      out(static_cast<Eigen::Index>(p * n + x)) = psi(static_cast<Eigen::Index>(c.act(p, x)));
  return out;
}

inline Vector eval_map_E(const DiscreteCover& c, const Vector& psihat, double tol = kDefaultTol) {
  const double r = equivariance_residual(c, psihat);
  if (r > tol * std::max(1.0, max_abs(psihat)))
    throw Error(ErrorKind::NotEquivariant, "equivariance residual " + std::to_string(r));
  const std::size_t n = c.order();
  Vector out(static_cast<Eigen::Index>(c.points()));
  for (std::size_t p = 0; p < c.points(); ++p)
    out(static_cast<Eigen::Index>(p)) = psihat(static_cast<Eigen::Index>(p * n + c.group().identity()));
  return out;
}

/// rho(g) psi = psi o R_g. A homomorphism: rho(g) rho(h) = rho(gh).
inline Matrix translation(const DiscreteCover& c, Element g) {
  const auto np = static_cast<Eigen::Index>(c.points());
  Matrix m = Matrix::Zero(np, np);
  for (std::size_t p = 0; p < c.points(); ++p) m(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(c.act(p, g))) = 1.0;
  return m;
}

/// T_v psi = sum_g v(g) psi o R_{g^-1}; T_v T_w = T_{w.v}.
inline Matrix right_action_operator(const DiscreteCover& c, const AlgebraElement& v) {
  require_same_group(c.group(), v);
  const auto np = static_cast<Eigen::Index>(c.points());
  Matrix m = Matrix::Zero(np, np);
  for (Element g = 0; g < c.order(); ++g) {
    if (v(g) == cplx(0.0)) continue;
    const Element gi = c.group().inverse(g);
    for (std::size_t p = 0; p < c.points(); ++p)
      m(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(c.act(p, gi))) += v(g);
  }
  return m;
}

/// Pointwise right multiplication psihat(p) -> psihat(p) . v-hat on V_G-valued functions.
inline Matrix pointwise_right_multiplication(const DiscreteCover& c, const AlgebraElement& v) {
  require_same_group(c.group(), v);
  const Matrix r = right_multiplication(c.group(), v);
  const auto np = static_cast<Eigen::Index>(c.points());
  return kron(Matrix::Identity(np, np), r);
}

inline void require_unit_amplitude(const Irrep& r, const Vector& a) {
  if (a.size() != static_cast<Eigen::Index>(r.dim()))
    throw Error(ErrorKind::MalformedInput, "amplitude vector has length " + std::to_string(a.size()));
  if (std::abs(a.norm() - 1.0) > 1e-10)
    throw Error(ErrorKind::NonUnitVector, "amplitude vector has norm " + std::to_string(a.norm()));
}

/// (n_mu/n) sum_g (a^T D^mu(g) conj(a)) rho(g) for any representation rho of
/// the group given by one matrix per element: the projector onto the copy of
/// sector mu selected by the unit vector a.
inline Matrix sector_projector(const IrrepSet& set, std::size_t mu, const Vector& a, const std::vector<Matrix>& rho) {
  const auto& r = set[mu];
  require_unit_amplitude(r, a);
  if (rho.size() != set.order()) throw Error(ErrorKind::GroupMismatch, "action has the wrong number of matrices");
  Matrix m = Matrix::Zero(rho.front().rows(), rho.front().cols());
  const double scale = static_cast<double>(r.dim()) / static_cast<double>(set.order());
  for (Element g = 0; g < set.order(); ++g) m += scale * (a.transpose() * r(g) * a.conjugate())(0, 0) * rho[g];
  return m;
}

inline std::vector<Matrix> translations(const DiscreteCover& c) {
  std::vector<Matrix> out;
  for (Element g = 0; g < c.order(); ++g) out.push_back(translation(c, g));
  return out;
}

/// T^mu(a) on functions over the cover, with rho(g) psi = psi o R_g.
inline Matrix sector_projector(const DiscreteCover& c, const IrrepSet& set, std::size_t mu, const Vector& a) {
  return sector_projector(set, mu, a, translations(c));
}

inline Vector unit_vector(std::size_t dim, std::size_t i) {
  Vector a = Vector::Zero(static_cast<Eigen::Index>(dim));
  a(static_cast<Eigen::Index>(i)) = 1.0;
  return a;
}

/// T^mu = sum_i T^mu_i, the projector onto the whole sector.
inline Matrix sector_projector(const DiscreteCover& c, const IrrepSet& set, std::size_t mu) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(c.points()), static_cast<Eigen::Index>(c.points()));
  for (std::size_t i = 0; i < set[mu].dim(); ++i) m += sector_projector(c, set, mu, unit_vector(set[mu].dim(), i));
  return m;
}

/// Max |K(R_g p', R_g p) - K(p', p)|.
inline double invariance_residual(const DiscreteCover& c, const Matrix& k) {
  double worst = 0.0;
  for (Element g = 0; g < c.order(); ++g)
    for (std::size_t a = 0; a < c.points(); ++a)
      for (std::size_t b = 0; b < c.points(); ++b)
        worst = std::max(worst, std::abs(k(static_cast<Eigen::Index>(c.act(a, g)), static_cast<Eigen::Index>(c.act(b, g))) -
                                         k(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))));
  return worst;
}

/// A kernel commuting with the right G action.
class InvariantKernel {
 public:
  InvariantKernel(const DiscreteCover& c, Matrix k, double tol = kDefaultTol) : k_(std::move(k)) {
    const auto np = static_cast<Eigen::Index>(c.points());
    if (k_.rows() != np || k_.cols() != np) throw Error(ErrorKind::MalformedInput, "kernel has wrong shape");
    const double r = invariance_residual(c, k_);
    if (r > tol * std::max(1.0, max_abs(k_))) throw Error(ErrorKind::NotInvariant, "invariance residual " + std::to_string(r));
  }
  const Matrix& matrix() const noexcept { return k_; }

 private:
  Matrix k_;
};

/// K_inv(p', p) = (1/n) sum_g K(R_g p', R_g p).
inline Matrix group_average(const DiscreteCover& c, const Matrix& k) {
  Matrix out = Matrix::Zero(k.rows(), k.cols());
  for (Element g = 0; g < c.order(); ++g)
    for (std::size_t a = 0; a < c.points(); ++a)
      for (std::size_t b = 0; b < c.points(); ++b)
        out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
            k(static_cast<Eigen::Index>(c.act(a, g)), static_cast<Eigen::Index>(c.act(b, g)));
  return out / static_cast<double>(c.order());
}

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = cplx(nd(rng), nd(rng));
  return m;
}

inline InvariantKernel random_invariant_kernel(const DiscreteCover& c, std::mt19937_64& rng, bool hermitian) {
  const auto np = static_cast<Eigen::Index>(c.points());
  Matrix k = random_matrix(np, np, rng);
  if (hermitian) k = ((k + k.adjoint()) / 2.0).eval();
  return InvariantKernel(c, group_average(c, k));
}

/// exp(-i H t) by spectral decomposition of a Hermitian generator.
inline Matrix propagator(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const auto& ev = es.eigenvalues();
  Vector phases(ev.size());
  for (Eigen::Index k = 0; k < ev.size(); ++k) phases(k) = std::exp(cplx(0.0, -ev(k) * t));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// K^mu(a)(p', p) = (n_mu/n) sum_g (a^T D^mu(g) conj(a)) K(R_g p', p).
inline Matrix project_kernel(const DiscreteCover& c, const IrrepSet& set, const InvariantKernel& kernel, std::size_t mu,
                             const Vector& a) {
  const auto& r = set[mu];
  require_unit_amplitude(r, a);
  const Matrix& k = kernel.matrix();
  Matrix out = Matrix::Zero(k.rows(), k.cols());
  const double scale = static_cast<double>(r.dim()) / static_cast<double>(c.order());
  for (Element g = 0; g < c.order(); ++g) {
    const cplx coef = scale * (a.transpose() * r(g) * a.conjugate())(0, 0);
    for (std::size_t p = 0; p < c.points(); ++p) out.row(static_cast<Eigen::Index>(p)) += coef * k.row(static_cast<Eigen::Index>(c.act(p, g)));
  }
  return out;
}

inline Matrix project_kernel(const DiscreteCover& c, const IrrepSet& set, const InvariantKernel& kernel, std::size_t mu,
                             std::size_t i) {
  return project_kernel(c, set, kernel, mu, unit_vector(set[mu].dim(), i));
}

/// Admissible base subset U; its lift is U x {e}.
struct LocalizationRegion {
  std::vector<bool> members;

  static LocalizationRegion of(const DiscreteCover& c, const std::vector<std::size_t>& base_points) {
    LocalizationRegion u;
    u.members.assign(c.base_size(), false);
    for (std::size_t q : base_points) {
      if (q >= c.base_size()) throw Error(ErrorKind::MalformedInput, "region point outside the base");
      u.members[q] = true;
    }
    return u;
  }
  bool contains(std::size_t q) const { return members.at(q); }
};

/// gamma_v(psihat)(q, k) = [q in U] (k^-1)-hat . v-hat . psihat(q, e).
inline Matrix localized_gamma(const DiscreteCover& c, const AlgebraElement& v, const LocalizationRegion& u) {
  require_same_group(c.group(), v);
  const std::size_t n = c.order();
  const auto& g = c.group();
  const auto dim = static_cast<Eigen::Index>(c.points() * n);
  Matrix m = Matrix::Zero(dim, dim);
  for (std::size_t q = 0; q < c.base_size(); ++q) {
    if (!u.contains(q)) continue;
    const std::size_t pe = c.point(q, g.identity());
    for (Element k = 0; k < n; ++k)
      for (Element x = 0; x < n; ++x)
        for (Element a = 0; a < n; ++a) {
          if (v(a) == cplx(0.0)) continue;
          // (v-hat . w)(y) = sum_a v(a) w(a^-1 y) at y = k x
          const Element src = g.mul(g.inverse(a), g.mul(k, x));
          m(static_cast<Eigen::Index>(c.point(q, k) * n + x), static_cast<Eigen::Index>(pe * n + src)) += v(a);
        }
  }
  return m;
}

/// P_U = gamma_e: keep the values over U, re-extended equivariantly from sheet e.
inline Matrix localization_projector(const DiscreteCover& c, const LocalizationRegion& u) {
  return localized_gamma(c, AlgebraElement::basis(c.order(), c.group().identity()), u);
}

inline Vector localize(const DiscreteCover& c, const Vector& psihat, const LocalizationRegion& u) {
  return localization_projector(c, u) * psihat;
}

/// O_v = gamma_v o P_U.
inline Matrix localized_left_action(const DiscreteCover& c, const AlgebraElement& v, const LocalizationRegion& u) {
  return localized_gamma(c, v, u) * localization_projector(c, u);
}

/// An operator on V_G-valued functions transported to functions on the cover: E X F.
inline Matrix pull_back(const DiscreteCover& c, const Matrix& x) { return eval_matrix(c) * x * lift_matrix(c); }

/// Step of an edge word: traverse edge `edge` forwards or backwards.
struct LoopStep {
  std::size_t edge = 0;
  bool forward = true;
};

/// Lifts the loop starting at (q, h) and returns g with endpoint (q, hg).
/// A forward edge with voltage v maps sheet s to v s, a backward one to v^-1 s.
inline Element holonomy(const DiscreteCover& c, std::size_t q, const std::vector<LoopStep>& loop, Element h) {
  if (q >= c.base_size()) throw Error(ErrorKind::MalformedInput, "base point outside the base");
  const auto& g = c.group();
  std::size_t at = q;
  Element sheet = h;
  for (std::size_t k = 0; k < loop.size(); ++k) {
    const auto& st = loop[k];
    if (st.edge >= c.edges().size()) throw Error(ErrorKind::UnknownEdge, "step " + std::to_string(k) + " uses edge " + std::to_string(st.edge));
    const auto& e = c.edges()[st.edge];
    const std::size_t tail = st.forward ? e.from : e.to;
    if (tail != at) throw Error(ErrorKind::NotALoop, "step " + std::to_string(k) + " does not start where the path is");
    at = st.forward ? e.to : e.from;
    sheet = st.forward ? g.mul(e.voltage, sheet) : g.mul(g.inverse(e.voltage), sheet);
  }
  if (at != q) throw Error(ErrorKind::NotALoop, "path ends at " + std::to_string(at) + ", not at " + std::to_string(q));
  return g.mul(g.inverse(h), sheet);
}

/// Concatenation: first a, then b.
inline std::vector<LoopStep> concatenate(std::vector<LoopStep> a, const std::vector<LoopStep>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// Neighbours of a cover point through lifted edges.
inline std::vector<std::size_t> lifted_neighbours(const DiscreteCover& c, std::size_t p) {
  const auto& g = c.group();
  const std::size_t q = c.base_of(p);
  const Element h = c.sheet_of(p);
  std::vector<std::size_t> out;
  for (const auto& e : c.edges()) {
    if (e.from == q) out.push_back(c.point(e.to, g.mul(e.voltage, h)));
    if (e.to == q) out.push_back(c.point(e.from, g.mul(g.inverse(e.voltage), h)));
  }
  return out;
}

inline bool is_connected(const DiscreteCover& c) {
  std::vector<bool> seen(c.points(), false);
  std::queue<std::size_t> todo;
  todo.push(0);
  seen[0] = true;
  std::size_t count = 1;
  while (!todo.empty()) {
    const std::size_t p = todo.front();
    todo.pop();
    for (std::size_t nb : lifted_neighbours(c, p))
      if (!seen[nb]) {
        seen[nb] = true;
        ++count;
        todo.push(nb);
      }
  }
  return count == c.points();
}

/// Bundle automorphism p -> p f(p) compatible with path lifting.
struct GaugeTransformation {
  Element value_at_base = 0;       // f(q0, e)
  std::vector<Element> f;          // f(p) for every point
  std::vector<std::size_t> image;  // p f(p)
  double action_commutator = 0.0;  // mismatches of F o R_g vs R_g o F (count)
  bool projects_to_identity = true;
};

/// Tries every c in G as f(q0, e) and propagates it with f(p g) = g^-1 f(p) g
/// and constancy along lifted edges; keeps the consistent ones.
inline std::vector<GaugeTransformation> gauge_transformations(const DiscreteCover& c) {
  if (!is_connected(c)) throw Error(ErrorKind::MalformedInput, "cover is not connected");
  const auto& g = c.group();
  const std::size_t none = g.order();
  std::vector<GaugeTransformation> out;
  for (Element cand = 0; cand < g.order(); ++cand) {
    std::vector<Element> f(c.points(), none);
    std::queue<std::size_t> todo;
    f[c.point(0, g.identity())] = cand;
    todo.push(c.point(0, g.identity()));
    bool ok = true;
    auto assign = [&](std::size_t p, Element val) {
      if (f[p] == none) {
        f[p] = val;
        todo.push(p);
      } else if (f[p] != val) {
        ok = false;
      }
    };
    while (!todo.empty() && ok) {
      const std::size_t p = todo.front();
      todo.pop();
      for (Element x = 0; x < g.order(); ++x) assign(c.act(p, x), g.conjugate(g.inverse(x), f[p]));
      for (std::size_t nb : lifted_neighbours(c, p)) assign(nb, f[p]);
    }
    if (!ok) continue;
    GaugeTransformation t;
    t.value_at_base = cand;
    t.f = f;
    for (std::size_t p = 0; p < c.points(); ++p) {
      t.image.push_back(c.act(p, f[p]));
      if (c.base_of(t.image.back()) != c.base_of(p)) t.projects_to_identity = false;
    }
    for (Element x = 0; x < g.order(); ++x)
      for (std::size_t p = 0; p < c.points(); ++p)
        if (t.image[c.act(p, x)] != c.act(t.image[p], x)) t.action_commutator += 1.0;
    out.push_back(std::move(t));
  }
  return out;
}

/// sigma(p g) = D^mu(g^-1) sigma(p), rows indexed by cover points.
inline double vector_equivariance_residual(const DiscreteCover& c, const Irrep& r, const Matrix& sigma) {
  double worst = 0.0;
  for (std::size_t p = 0; p < c.points(); ++p)
    for (Element g = 0; g < c.order(); ++g) {
      const Vector lhs = sigma.row(static_cast<Eigen::Index>(c.act(p, g))).transpose();
      const Vector rhs = r(c.group().inverse(g)) * sigma.row(static_cast<Eigen::Index>(p)).transpose();
      worst = std::max(worst, max_abs(lhs - rhs));
    }
  return worst;
}

/// Extends values on the sheet e (rows: base points) to a D^mu-equivariant function.
inline Matrix equivariant_extension(const DiscreteCover& c, const Irrep& r, const Matrix& on_base) {
  const auto d = static_cast<Eigen::Index>(r.dim());
  Matrix sigma(static_cast<Eigen::Index>(c.points()), d);
  for (std::size_t q = 0; q < c.base_size(); ++q)
    for (Element h = 0; h < c.order(); ++h)
      sigma.row(static_cast<Eigen::Index>(c.point(q, h))) =
          (r(c.group().inverse(h)) * on_base.row(static_cast<Eigen::Index>(q)).transpose()).transpose();
  return sigma;
}

struct CMuAction {
  Matrix shifted;     // sigma(p g^-1)
  Matrix multiplied;  // D^mu(g) sigma(p)
  double agreement = 0.0;
  double output_equivariance = 0.0;
};

inline CMuAction c_mu_action(const DiscreteCover& c, const IrrepSet& set, std::size_t mu, Element g, const Matrix& sigma,
                             double tol = kDefaultTol) {
  const auto& r = set[mu];
  const auto cmu = centralizing_subgroup(c.group(), r, tol);
  if (std::find(cmu.begin(), cmu.end(), g) == cmu.end())
    throw Error(ErrorKind::NotInCMu, "element " + c.group().label(g) + " is not in C^" + r.label());
  if (vector_equivariance_residual(c, r, sigma) > tol * std::max(1.0, max_abs(sigma)))
    throw Error(ErrorKind::NotEquivariant, "input is not D^" + r.label() + "-equivariant");
  CMuAction out;
  out.shifted = Matrix(sigma.rows(), sigma.cols());
  const Element gi = c.group().inverse(g);
  for (std::size_t p = 0; p < c.points(); ++p)
    out.shifted.row(static_cast<Eigen::Index>(p)) = sigma.row(static_cast<Eigen::Index>(c.act(p, gi)));
  out.multiplied = (r(g) * sigma.transpose()).transpose();
  out.agreement = max_abs(out.shifted - out.multiplied);
  out.output_equivariance = vector_equivariance_residual(c, r, out.shifted);
  return out;
}

/// Krylov closure of the span of `seed` under a family of operators.
inline Matrix invariant_closure(const Matrix& seed, const std::vector<Matrix>& ops) {
  Matrix basis = column_span(seed);
  while (true) {
    Matrix grown(basis.rows(), basis.cols() * static_cast<Eigen::Index>(ops.size() + 1));
    grown.leftCols(basis.cols()) = basis;
    for (std::size_t k = 0; k < ops.size(); ++k)
      grown.middleCols(basis.cols() * static_cast<Eigen::Index>(k + 1), basis.cols()) = ops[k] * basis;
    Matrix next = column_span(grown);
    if (next.cols() == basis.cols()) return next;
    basis = std::move(next);
  }
}

struct TheoremChecks {
  // (i) dim of the commutant of the invariant kernels compressed to each
  // T^mu_i image, per (mu, i); all should be 1.
  std::vector<std::vector<std::size_t>> image_commutant_dims;
  // (ii) principal-angle mismatch between the joint closure of a random
  // vector in a union of sectors and the sum of those sector images.
  double reduction_mismatch = 0.0;
  // (iii) max_g ||(1 - P) T_g P|| for P onto the T^mu_1 image, per mu.
  std::vector<double> right_action_leakage;
  // The T^mu_1 image is invariant under the centralizer Z^mu.
  double centralizer_leakage = 0.0;
};

inline TheoremChecks theorem_checks(const DiscreteCover& c, const IrrepSet& set, const AdaptedBasis& basis,
                                    std::mt19937_64& rng, std::size_t kernels = 3) {
  TheoremChecks out;
  std::vector<Matrix> ks;
  for (std::size_t k = 0; k < kernels; ++k) ks.push_back(random_invariant_kernel(c, rng, k == 0).matrix());
  const auto np = static_cast<Eigen::Index>(c.points());

  for (std::size_t mu = 0; mu < set.count(); ++mu) {
    std::vector<std::size_t> dims;
    for (std::size_t i = 0; i < set[mu].dim(); ++i) {
      const Matrix v = column_span(sector_projector(c, set, mu, unit_vector(set[mu].dim(), i)));
      std::vector<Matrix> restricted;
      for (const auto& k : ks) restricted.push_back(v.adjoint() * k * v);
      dims.push_back(commutant(std::span<const Matrix>(restricted), v.cols()).size());
    }
    out.image_commutant_dims.push_back(std::move(dims));
  }

  std::vector<Matrix> joint = ks;
  for (Element g = 0; g < c.order(); ++g) joint.push_back(translation(c, g));
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<std::size_t> chosen;
    for (std::size_t mu = 0; mu < set.count(); ++mu)
      if (coin(rng)) chosen.push_back(mu);
    if (chosen.empty()) chosen.push_back(trial % set.count());
    Matrix p = Matrix::Zero(np, np);
    for (std::size_t mu : chosen) p += sector_projector(c, set, mu);
    const Vector psi = p * random_matrix(np, 1, rng);
    out.reduction_mismatch =
        std::max(out.reduction_mismatch, max_principal_angle_sine(invariant_closure(psi, joint), column_span(p)));
  }

  const auto sub = center_and_subalgebras(basis);
  const Matrix id = Matrix::Identity(np, np);
  for (std::size_t mu = 0; mu < set.count(); ++mu) {
    const Matrix p = sector_projector(c, set, mu, unit_vector(set[mu].dim(), 0));
    double leak = 0.0;
    for (Element g = 0; g < c.order(); ++g)
      leak = std::max(leak, ((id - p) * right_action_operator(c, AlgebraElement::basis(c.order(), g)) * p).norm());
    out.right_action_leakage.push_back(leak);
    for (Eigen::Index k = 0; k < sub.centralizers[mu].cols(); ++k)
      out.centralizer_leakage = std::max(
          out.centralizer_leakage,
          ((id - p) * right_action_operator(c, AlgebraElement(sub.centralizers[mu].col(k))) * p).norm());
  }
  return out;
}

/// Complex conjugation maps the image of T^mu(a) onto the image of
/// T^lambda(conj(U) conj(a)) where conj(D^mu) = U^dagger D^lambda U.
struct TimeReversalMap {
  std::size_t mu = 0;
  std::size_t partner = 0;
  Vector partner_amplitude;
  double principal_angle_sine = 0.0;
};

inline TimeReversalMap time_reversal(const DiscreteCover& c, const IrrepSet& set, std::size_t mu, const Vector& a) {
  const auto cp = conjugate_partner(set, mu);
  TimeReversalMap out;
  out.mu = mu;
  out.partner = cp.partner;
  out.partner_amplitude = cp.witness.conjugate() * a.conjugate();
  const Matrix src = column_span(sector_projector(c, set, mu, a)).conjugate();
  const Matrix dst = column_span(sector_projector(c, set, cp.partner, out.partner_amplitude));
  out.principal_angle_sine = max_principal_angle_sine(column_span(src), dst);
  return out;
}

}  // namespace sectorium
