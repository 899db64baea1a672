#pragma once

// Asymmetric rotor: rotation-matrix blocks R^L of SU(2) restricted to the
// quaternion units, the sector projectors acting on the span of the matrix
// entry functions R^L_MN, the symmetry-adapted bases and their behaviour
// under complex conjugation.
//
// L is carried as the integer two_l = 2L; M, N likewise as 2M, 2N, with
// matrix index k <-> 2M = -two_l + 2k (ascending M). Phases are computed
// from integer exponents, never from floating trig.
//
// A function sum_MN C_MN R_MN is stored as the row-major vector of C.
// Right translation psi -> psi(. g) maps C to C R(g)^T, i.e. kron(1, R(g)).

#include "sectorium/cover.hpp"
#include "sectorium/error.hpp"
#include "sectorium/fixtures.hpp"
#include "sectorium/linalg.hpp"
#include "sectorium/rep.hpp"

#include <array>
#include <cmath>
#include <utility>
#include <vector>

namespace sectorium {

namespace detail {

/// i^k for any integer k.
inline cplx i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

/// (-1)^(doubled / 2) for even `doubled`.
inline double sign_of_half(int doubled) { return ((doubled / 2) % 2 == 0) ? 1.0 : -1.0; }

}  // namespace detail

struct RotorBlock {
  int two_l = 0;
  Eigen::Index dim = 1;
  std::vector<Matrix> matrices;  // indexed like the bundled d8star group
  double homomorphism_residual = 0.0;
  double unitarity_residual = 0.0;

  int two_m(Eigen::Index k) const { return -two_l + 2 * static_cast<int>(k); }
  Eigen::Index index_of(int two_m) const { return (two_m + two_l) / 2; }
  bool half_odd() const { return two_l % 2 != 0; }
};

/// R(k)_MN = exp(i pi N) delta_MN.
inline Matrix rotor_k(int two_l) {
  const Eigen::Index d = two_l + 1;
  Matrix m = Matrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) m(k, k) = detail::i_power(-two_l + 2 * static_cast<int>(k));
  return m;
}

/// R(j)_MN = (-1)^(L+N) delta_{M,-N}.
inline Matrix rotor_j(int two_l) {
  const Eigen::Index d = two_l + 1;
  Matrix m = Matrix::Zero(d, d);
  for (Eigen::Index col = 0; col < d; ++col) {
    const int two_n = -two_l + 2 * static_cast<int>(col);
    m(d - 1 - col, col) = detail::sign_of_half(two_l + two_n);
  }
  return m;
}

/// R(i)_MN = exp(i pi N) (-1)^(L+N) delta_{M,-N}, equal to R(j) R(k).
inline Matrix rotor_i(int two_l) {
  const Eigen::Index d = two_l + 1;
  Matrix m = Matrix::Zero(d, d);
  for (Eigen::Index col = 0; col < d; ++col) {
    const int two_n = -two_l + 2 * static_cast<int>(col);
    m(d - 1 - col, col) = detail::i_power(two_n) * detail::sign_of_half(two_l + two_n);
  }
  return m;
}

inline RotorBlock wigner_block(int two_l) {
  if (two_l < 0) throw Error(ErrorKind::MalformedInput, "2L must be non-negative");
  RotorBlock b;
  b.two_l = two_l;
  b.dim = two_l + 1;
  const double minus = (two_l % 2 == 0) ? 1.0 : -1.0;  // R(-x) = (-1)^(2L) R(x)
  const std::array<Matrix, 4> base{Matrix(Matrix::Identity(b.dim, b.dim)), rotor_i(two_l), rotor_j(two_l),
                                   rotor_k(two_l)};
  for (const auto& q : fixtures::d8star_elements())
    b.matrices.push_back(q.negative ? Matrix(minus * base[static_cast<std::size_t>(q.axis)])
                                    : base[static_cast<std::size_t>(q.axis)]);
  const auto group = fixtures::d8star();
  for (Element x = 0; x < group.order(); ++x) {
    b.unitarity_residual = std::max(
        b.unitarity_residual, max_abs(b.matrices[x] * b.matrices[x].adjoint() - Matrix::Identity(b.dim, b.dim)));
    for (Element y = 0; y < group.order(); ++y)
      b.homomorphism_residual =
          std::max(b.homomorphism_residual, max_abs(b.matrices[x] * b.matrices[y] - b.matrices[group.mul(x, y)]));
  }
  return b;
}

/// Right translation on coefficient vectors, one matrix per group element.
inline std::vector<Matrix> coefficient_action(const RotorBlock& b) {
  std::vector<Matrix> out;
  const Matrix id = Matrix::Identity(b.dim, b.dim);
  for (const auto& r : b.matrices) out.push_back(kron(id, r));
  return out;
}

/// Character of the block at each group element from the rotation angle:
/// sin((L + 1/2) a) / sin(a / 2) with a = 0 at 1, 2 pi at -1 and pi elsewhere.
inline std::vector<cplx> rotor_character(int two_l) {
  std::vector<cplx> chi;
  const double d = two_l + 1;
  for (const auto& q : fixtures::d8star_elements()) {
    if (q.axis == 0) {
      chi.emplace_back(q.negative && two_l % 2 != 0 ? -d : d);
    } else {
      // sin((2L + 1) pi / 2)
      chi.emplace_back(two_l % 2 != 0 ? 0.0 : detail::sign_of_half(two_l));
    }
  }
  return chi;
}

/// P = 1/2 (1 + r2 R(j)) 1/2 (1 + r3 R(k)), the abelian sector projector.
inline Matrix abelian_projector_matrices(const RotorBlock& b, int r2, int r3) {
  if (b.half_odd()) throw Error(ErrorKind::OddHalfInteger, "abelian sectors need integer L, got 2L = " + std::to_string(b.two_l));
  if ((r2 != 1 && r2 != -1) || (r3 != 1 && r3 != -1)) throw Error(ErrorKind::MalformedInput, "signs must be +1 or -1");
  const Matrix id = Matrix::Identity(b.dim, b.dim);
  return 0.25 * (id + double(r2) * rotor_j(b.two_l)) * (id + double(r3) * rotor_k(b.two_l));
}

/// (r2, r3) of the one-dimensional sector mu in the bundled ordering.
inline std::pair<int, int> abelian_signs(std::size_t mu) {
  static constexpr std::array<std::pair<int, int>, 4> kSigns{{{1, 1}, {-1, -1}, {1, -1}, {-1, 1}}};
  return kSigns.at(mu);
}

/// One symmetry-adapted basis function: coefficient vector and its labels.
struct RotorFunction {
  int two_m = 0;
  int two_n = 0;
  Vector coeffs;
};

inline Vector entry_function(const RotorBlock& b, int two_m, int two_n) {
  Vector v = Vector::Zero(b.dim * b.dim);
  v(b.index_of(two_m) * b.dim + b.index_of(two_n)) = 1.0;
  return v;
}

inline Matrix as_columns(const std::vector<RotorFunction>& fs, Eigen::Index rows) {
  Matrix m(rows, static_cast<Eigen::Index>(fs.size()));
  for (std::size_t k = 0; k < fs.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = fs[k].coeffs;
  return m;
}

/// Complex conjugation of functions in coefficient form:
/// conj(R_MN) = (-1)^(M-N) R_{-M,-N}.
inline Vector conjugate_function(const RotorBlock& b, const Vector& c) {
  Vector out = Vector::Zero(c.size());
  for (Eigen::Index km = 0; km < b.dim; ++km)
    for (Eigen::Index kn = 0; kn < b.dim; ++kn) {
      const int two_m = b.two_m(km), two_n = b.two_m(kn);
      out(b.index_of(-two_m) * b.dim + b.index_of(-two_n)) =
          detail::sign_of_half(two_m - two_n) * std::conj(c(km * b.dim + kn));
    }
  return out;
}

/// Span of a family of functions each supported on a single row M, compared
/// with the image of kron(1, P). Rows have disjoint supports, so the span
/// splits into per-row spans, each compared with the column span of P.
struct RowSpan {
  std::size_t dim = 0;
  double image_mismatch = 0.0;
};

inline RowSpan row_span(const RotorBlock& b, const std::vector<RotorFunction>& fs, const Matrix& p) {
  RowSpan out;
  const Matrix image = column_span(p);
  for (Eigen::Index km = 0; km < b.dim; ++km) {
    std::vector<Vector> parts;
    for (const auto& f : fs)
      if (b.index_of(f.two_m) == km) parts.push_back(f.coeffs.segment(km * b.dim, b.dim));
    Matrix cols(b.dim, static_cast<Eigen::Index>(parts.size()));
    for (std::size_t k = 0; k < parts.size(); ++k) cols.col(static_cast<Eigen::Index>(k)) = parts[k];
    const Matrix span = column_span(cols);
    out.dim += static_cast<std::size_t>(span.cols());
    out.image_mismatch = std::max(out.image_mismatch, max_principal_angle_sine(span, image));
  }
  return out;
}

struct AbelianSectorBasis {
  int r2 = 1;
  int r3 = 1;
  std::vector<RotorFunction> functions;  // nonvanishing members only
  std::size_t vanishing = 0;             // allowed labels whose function cancels
  std::size_t span_dim = 0;
  double image_mismatch = 0.0;           // vs the image of kron(1, P)
  double time_reversal_residual = 0.0;   // conj(B_MN) - r2 (-1)^(L+M) B_{-M,N}
  double time_reversal_square = 1.0;     // product of the two label factors
};

/// B_MN = R_MN + r2 (-1)^(L+N) R_{M,-N}, N >= 0 even (r3 = +1) or N >= 1 odd (r3 = -1).
inline Vector abelian_function(const RotorBlock& b, int r2, int two_m, int two_n) {
  return entry_function(b, two_m, two_n) + r2 * detail::sign_of_half(b.two_l + two_n) * entry_function(b, two_m, -two_n);
}

inline AbelianSectorBasis abelian_sector_basis(const RotorBlock& b, int r2, int r3) {
  const Matrix p = abelian_projector_matrices(b, r2, r3);
  AbelianSectorBasis out;
  out.r2 = r2;
  out.r3 = r3;
  const int l = b.two_l / 2;
  for (int n = (r3 == 1 ? 0 : 1); n <= l; n += 2)
    for (int m = -l; m <= l; ++m) {
      Vector f = abelian_function(b, r2, 2 * m, 2 * n);
      if (max_abs(f) == 0.0) {
        ++out.vanishing;
        continue;
      }
      const Vector lhs = conjugate_function(b, f);
      const Vector rhs = r2 * detail::sign_of_half(b.two_l + 2 * m) * abelian_function(b, r2, -2 * m, 2 * n);
      out.time_reversal_residual = std::max(out.time_reversal_residual, max_abs(lhs - rhs));
      const double twice = r2 * detail::sign_of_half(b.two_l + 2 * m) * r2 * detail::sign_of_half(b.two_l - 2 * m);
      if (twice != out.time_reversal_square) out.time_reversal_square = twice;
      out.functions.push_back({2 * m, 2 * n, std::move(f)});
    }
  const auto span = row_span(b, out.functions, p);
  out.span_dim = span.dim;
  out.image_mismatch = span.image_mismatch;
  return out;
}

/// The projector for the copy of D^4 selected by the unit vector a, assembled
/// from R(i), R(j), R(k):
/// 1/2 [ |a1|^2 (1 - i R(k)) + |a2|^2 (1 + i R(k))
///       + a1 conj(a2) (-i R(i) - R(j)) + conj(a1) a2 (-i R(i) + R(j)) ].
inline Matrix spinor_projector(const RotorBlock& b, const Vector& a) {
  if (!b.half_odd()) throw Error(ErrorKind::IntegerLambda, "spinor sector needs half-odd L, got 2L = " + std::to_string(b.two_l));
  if (a.size() != 2) throw Error(ErrorKind::MalformedInput, "amplitude vector must have two components");
  if (std::abs(a.norm() - 1.0) > 1e-10) throw Error(ErrorKind::NonUnitVector, "amplitude vector has norm " + std::to_string(a.norm()));
  const cplx i(0.0, 1.0);
  const Matrix id = Matrix::Identity(b.dim, b.dim);
  const Matrix ri = rotor_i(b.two_l), rj = rotor_j(b.two_l), rk = rotor_k(b.two_l);
  const cplx a1 = a(0), a2 = a(1);
  return 0.5 * (std::norm(a1) * (id - i * rk) + std::norm(a2) * (id + i * rk) + a1 * std::conj(a2) * (-i * ri - rj) +
                std::conj(a1) * a2 * (-i * ri + rj));
}

/// Conjugation partner of a spinor amplitude: i tau_2 conj(a).
inline Vector reversed_amplitude(const Vector& a) {
  Vector out(2);
  out << std::conj(a(1)), -std::conj(a(0));
  return out;
}

struct SpinorSectorBasis {
  Vector a;
  std::vector<RotorFunction> functions;
  std::size_t span_dim = 0;
  std::size_t full_projected_dim = 0;  // rank of T^4(a) on all (M, N)
  double image_mismatch = 0.0;
  double time_reversal_residual = 0.0;  // conj(B_MN(a)) + (-1)^(L+M) B_{-M,N}(i tau_2 conj(a))
  double time_reversal_square = 0.0;    // i tau_2 conj(i tau_2 conj(a)) = s a, s reported
};

/// a1 R_MN + (-1)^(L+N) a2 R_{M,-N} for 2N = 1 mod 4.
inline Vector spinor_function(const RotorBlock& b, const Vector& a, int two_m, int two_n) {
  return a(0) * entry_function(b, two_m, two_n) + a(1) * detail::sign_of_half(b.two_l + two_n) * entry_function(b, two_m, -two_n);
}

inline SpinorSectorBasis spinor_sector_basis(const RotorBlock& b, const Vector& a) {
  const Matrix p = spinor_projector(b, a);
  SpinorSectorBasis out;
  out.a = a;
  const Vector ta = reversed_amplitude(a);
  for (int two_n = -b.two_l; two_n <= b.two_l; two_n += 2) {
    if (((two_n % 4) + 4) % 4 != 1) continue;
    for (int two_m = -b.two_l; two_m <= b.two_l; two_m += 2) {
      Vector f = spinor_function(b, a, two_m, two_n);
      const Vector lhs = conjugate_function(b, f);
      const Vector rhs = -detail::sign_of_half(b.two_l + two_m) * spinor_function(b, ta, -two_m, two_n);
      out.time_reversal_residual = std::max(out.time_reversal_residual, max_abs(lhs - rhs));
      out.functions.push_back({two_m, two_n, std::move(f)});
    }
  }
  const Vector back = reversed_amplitude(ta);
  out.time_reversal_square = (a.dot(back)).real();
  const auto span = row_span(b, out.functions, p);
  out.span_dim = span.dim;
  out.image_mismatch = span.image_mismatch;
  // rank(kron(1, P)) = (2L + 1) rank(P)
  out.full_projected_dim = static_cast<std::size_t>(b.dim * numerical_rank(p));
  return out;
}

struct RotorSectorRow {
  std::size_t mu = 0;
  std::size_t multiplicity = 0;           // from characters
  std::size_t expected_multiplicity = 0;  // closed-form count
  std::size_t projector_rank = 0;         // rank of the full sector projector on the block
  std::size_t dimension = 0;              // (2L + 1) * projector_rank
  std::size_t basis_size = 0;             // abelian: span of B_MN; spinor: family size
  double generic_mismatch = 0.0;          // closed form vs group-averaged projector
  double projector_residual = 0.0;        // P^2 - P and P^dagger - P
  double image_mismatch = 0.0;
  double time_reversal_residual = 0.0;
};

struct RotorRow {
  int two_l = 0;
  double homomorphism_residual = 0.0;
  double unitarity_residual = 0.0;
  double character_trace_mismatch = 0.0;
  std::vector<RotorSectorRow> sectors;
  std::size_t rank_sum = 0;  // sum of sector dimensions; equals (2L + 1)^2
  double spinor_orthogonality = 0.0;  // ||P(e1) P(e2)||, half-odd L only
  std::size_t spinor_family_size = 0;
};

/// Closed-form multiplicity of sector mu in the block 2L.
inline std::size_t expected_rotor_multiplicity(int two_l, std::size_t mu) {
  if (two_l % 2 != 0) return mu == 4 ? static_cast<std::size_t>((two_l + 1) / 2) : 0;
  if (mu == 4) return 0;
  const int l = two_l / 2;
  if (l % 2 == 0) return static_cast<std::size_t>(mu == 0 ? l / 2 + 1 : l / 2);
  return static_cast<std::size_t>(mu == 0 ? (l - 1) / 2 : (l + 1) / 2);
}

inline RotorRow rotor_row(const IrrepSet& set, int two_l, const Vector& a) {
  RotorRow row;
  row.two_l = two_l;
  const auto b = wigner_block(two_l);
  row.homomorphism_residual = b.homomorphism_residual;
  row.unitarity_residual = b.unitarity_residual;
  const auto chi = rotor_character(two_l);
  for (Element g = 0; g < chi.size(); ++g)
    row.character_trace_mismatch = std::max(row.character_trace_mismatch, std::abs(chi[g] - b.matrices[g].trace()));
  // The coefficient action is kron(1, R(g)); comparing the group average of
  // R(g) with the closed form is the same check row by row.
  const auto& action = b.matrices;
  for (std::size_t mu = 0; mu < set.count(); ++mu) {
    RotorSectorRow s;
    s.mu = mu;
    s.multiplicity = multiplicity(chi, set, mu);
    s.expected_multiplicity = expected_rotor_multiplicity(two_l, mu);
    const std::size_t nmu = set[mu].dim();
    Matrix full = Matrix::Zero(b.dim, b.dim);
    if (nmu == 1) {
      const Vector one = Vector::Ones(1);
      const Matrix generic = sector_projector(set, mu, one, action);
      if (!b.half_odd()) {
        const auto [r2, r3] = abelian_signs(mu);
        full = abelian_projector_matrices(b, r2, r3);
        const auto basis = abelian_sector_basis(b, r2, r3);
        s.basis_size = basis.span_dim;
        s.image_mismatch = basis.image_mismatch;
        s.time_reversal_residual = basis.time_reversal_residual;
      }
      s.generic_mismatch = max_abs(generic - full);
    } else {
      if (b.half_odd()) {
        const Matrix pa = spinor_projector(b, a);
        s.generic_mismatch = max_abs(sector_projector(set, mu, a, action) - pa);
        Vector e1 = Vector::Zero(2), e2 = Vector::Zero(2);
        e1(0) = 1.0;
        e2(1) = 1.0;
        const Matrix p1 = spinor_projector(b, e1), p2 = spinor_projector(b, e2);
        s.generic_mismatch = std::max(
            {s.generic_mismatch, max_abs(sector_projector(set, mu, e1, action) - p1),
             max_abs(sector_projector(set, mu, e2, action) - p2)});
        row.spinor_orthogonality = max_abs(p1 * p2);
        full = p1 + p2;
        const auto basis = spinor_sector_basis(b, a);
        s.basis_size = basis.functions.size();
        row.spinor_family_size = basis.functions.size();
        s.image_mismatch = basis.image_mismatch;
        s.time_reversal_residual = basis.time_reversal_residual;
        const auto pr = projector_residual(pa);
        s.projector_residual = std::max(pr.idempotency, pr.hermiticity);
      } else {
        Matrix generic = Matrix::Zero(b.dim, b.dim);
        for (std::size_t i = 0; i < nmu; ++i) generic += sector_projector(set, mu, unit_vector(nmu, i), action);
        s.generic_mismatch = max_abs(generic);
      }
    }
    const auto pr = projector_residual(full);
    s.projector_residual = std::max({s.projector_residual, pr.idempotency, pr.hermiticity});
    s.projector_rank = static_cast<std::size_t>(projector_rank(full));
    s.dimension = static_cast<std::size_t>(b.dim) * s.projector_rank;
    row.rank_sum += s.dimension;
    row.sectors.push_back(s);
  }
  return row;
}

}  // namespace sectorium
