#pragma once

// Bundled groups and complete irrep sets: Z_n (n <= 12), S_3, Q8 and the
// binary dihedral group D8* of the asymmetric rotor.

#include "sectorium/group.hpp"
#include "sectorium/rep.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace sectorium::fixtures {

inline GroupSpec cyclic_spec(std::size_t n) {
  GroupSpec spec{"z" + std::to_string(n), {}, 0, {}};
  for (std::size_t k = 0; k < n; ++k) spec.labels.push_back(k == 0 ? "e" : "g" + std::to_string(k));
  spec.table.assign(n, std::vector<Element>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) spec.table[a][b] = (a + b) % n;
  return spec;
}

inline std::vector<RawIrrep> cyclic_irreps(std::size_t n) {
  std::vector<RawIrrep> out;
  for (std::size_t j = 0; j < n; ++j) {
    RawIrrep r{"chi" + std::to_string(j), 1, {}};
    for (std::size_t k = 0; k < n; ++k) {
      // Reduce j*k mod n first so the phase stays exact for the real cases.
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
      r.matrices.push_back(Matrix::Constant(1, 1, std::polar(1.0, angle)));
    }
    out.push_back(std::move(r));
  }
  return out;
}

// S_3 as permutations of {0,1,2}; (p*q)(x) = p(q(x)).
inline const std::array<std::array<int, 3>, 6>& s3_permutations() {
  static const std::array<std::array<int, 3>, 6> perms{{
      {0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {2, 1, 0}, {0, 2, 1}}};
  return perms;
}

inline GroupSpec s3_spec() {
  const auto& p = s3_permutations();
  GroupSpec spec{"s3", {"e", "(012)", "(021)", "(01)", "(02)", "(12)"}, 0, {}};
  spec.table.assign(6, std::vector<Element>(6));
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = 0; b < 6; ++b) {
      std::array<int, 3> c{};
      for (int x = 0; x < 3; ++x) c[static_cast<std::size_t>(x)] = p[a][static_cast<std::size_t>(p[b][static_cast<std::size_t>(x)])];
      for (std::size_t k = 0; k < 6; ++k)
        if (p[k] == c) spec.table[a][b] = k;
    }
  return spec;
}

inline std::vector<RawIrrep> s3_irreps() {
  const auto& p = s3_permutations();
  RawIrrep trivial{"trivial", 1, {}}, sign{"sign", 1, {}}, standard{"standard", 2, {}};
  // Vertices of an equilateral triangle; a permutation acts by v_k -> v_p(k).
  std::array<Eigen::Vector2d, 3> v;
  for (int k = 0; k < 3; ++k) {
    const double a = 2.0 * std::numbers::pi * k / 3.0;
    v[static_cast<std::size_t>(k)] = Eigen::Vector2d(std::cos(a), std::sin(a));
  }
  Eigen::Matrix2d basis;
  basis << v[0], v[1];
  const Eigen::Matrix2d basis_inv = basis.inverse();
  for (const auto& perm : p) {
    int inversions = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)]) ++inversions;
    trivial.matrices.push_back(Matrix::Ones(1, 1));
    sign.matrices.push_back(Matrix::Constant(1, 1, inversions % 2 ? -1.0 : 1.0));
    Eigen::Matrix2d image;
    image << v[static_cast<std::size_t>(perm[0])], v[static_cast<std::size_t>(perm[1])];
    standard.matrices.push_back((image * basis_inv).cast<cplx>());
  }
  return {trivial, sign, standard};
}

// Unit quaternions {±1, ±i, ±j, ±k}: a unit is (negative?, axis) with axis
// 0 = 1, 1 = i, 2 = j, 3 = k.
struct Quaternion {
  bool negative;
  int axis;
  bool operator==(const Quaternion&) const = default;
};

inline Quaternion quaternion_product(Quaternion a, Quaternion b) {
  // kTable[x][y] = (sign flip, axis) of unit x times unit y.
  static constexpr std::array<std::array<std::pair<bool, int>, 4>, 4> kTable{{
      {{{false, 0}, {false, 1}, {false, 2}, {false, 3}}},
      {{{false, 1}, {true, 0}, {false, 3}, {true, 2}}},
      {{{false, 2}, {true, 3}, {true, 0}, {false, 1}}},
      {{{false, 3}, {false, 2}, {true, 1}, {true, 0}}},
  }};
  const auto [flip, axis] = kTable[static_cast<std::size_t>(a.axis)][static_cast<std::size_t>(b.axis)];
  return {static_cast<bool>(a.negative ^ b.negative ^ flip), axis};
}

inline std::string quaternion_label(Quaternion q) {
  static constexpr std::array<const char*, 4> kNames{"1", "i", "j", "k"};
  return std::string(q.negative ? "-" : "") + kNames[static_cast<std::size_t>(q.axis)];
}

inline GroupSpec quaternion_spec(std::string name, const std::vector<Quaternion>& elements) {
  GroupSpec spec{std::move(name), {}, 0, {}};
  for (const auto& q : elements) spec.labels.push_back(quaternion_label(q));
  spec.table.assign(elements.size(), std::vector<Element>(elements.size()));
  for (std::size_t a = 0; a < elements.size(); ++a)
    for (std::size_t b = 0; b < elements.size(); ++b) {
      const Quaternion c = quaternion_product(elements[a], elements[b]);
      for (std::size_t k = 0; k < elements.size(); ++k)
        if (elements[k] == c) spec.table[a][b] = k;
    }
  return spec;
}

/// D8* element order: 1, -1, i, -i, j, -j, k, -k.
inline const std::vector<Quaternion>& d8star_elements() {
  static const std::vector<Quaternion> e{{false, 0}, {true, 0}, {false, 1}, {true, 1},
                                         {false, 2}, {true, 2}, {false, 3}, {true, 3}};
  return e;
}

/// Q8 element order: 1, i, j, k, -1, -i, -j, -k.
inline const std::vector<Quaternion>& q8_elements() {
  static const std::vector<Quaternion> e{{false, 0}, {false, 1}, {false, 2}, {false, 3},
                                         {true, 0},  {true, 1},  {true, 2},  {true, 3}};
  return e;
}

inline GroupSpec d8star_spec() { return quaternion_spec("d8star", d8star_elements()); }
inline GroupSpec q8_spec() { return quaternion_spec("q8", q8_elements()); }

inline Matrix pauli(int k) {
  Matrix t(2, 2);
  const cplx i(0.0, 1.0);
  switch (k) {
    case 1: t << 0.0, 1.0, 1.0, 0.0; break;
    case 2: t << 0.0, -i, i, 0.0; break;
    default: t << 1.0, 0.0, 0.0, -1.0; break;
  }
  return t;
}

/// The rotor's irreps: four characters labelled by (r1, r2, r3), the values
/// on ±i, ±j, ±k, and the two-dimensional D^4(±x) = ∓ i tau_x with
/// D^4(±1) = ±1.
inline std::vector<RawIrrep> d8star_irreps() {
  static constexpr std::array<std::array<int, 3>, 4> kSigns{{{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}};
  std::vector<RawIrrep> out;
  for (std::size_t mu = 0; mu < 4; ++mu) {
    RawIrrep r{"D" + std::to_string(mu), 1, {}};
    for (const auto& q : d8star_elements()) {
      const double value = q.axis == 0 ? 1.0 : kSigns[mu][static_cast<std::size_t>(q.axis - 1)];
      r.matrices.push_back(Matrix::Constant(1, 1, value));
    }
    out.push_back(std::move(r));
  }
  RawIrrep spinor{"D4", 2, {}};
  const cplx i(0.0, 1.0);
  for (const auto& q : d8star_elements()) {
    const double s = q.negative ? -1.0 : 1.0;
    spinor.matrices.push_back(q.axis == 0 ? Matrix(s * Matrix::Identity(2, 2)) : Matrix(-s * i * pauli(q.axis)));
  }
  out.push_back(std::move(spinor));
  return out;
}

inline std::vector<RawIrrep> q8_irreps() {
  std::vector<RawIrrep> out;
  // Characters: trivial, then the ones that are +1 on exactly one axis.
  static constexpr std::array<std::array<int, 3>, 4> kSigns{{{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}};
  static constexpr std::array<const char*, 4> kNames{"A1", "Ai", "Aj", "Ak"};
  for (std::size_t mu = 0; mu < 4; ++mu) {
    RawIrrep r{kNames[mu], 1, {}};
    for (const auto& q : q8_elements()) {
      const double value = q.axis == 0 ? 1.0 : kSigns[mu][static_cast<std::size_t>(q.axis - 1)];
      r.matrices.push_back(Matrix::Constant(1, 1, value));
    }
    out.push_back(std::move(r));
  }
  // Quaternions as SU(2): i -> diag(i, -i), j -> [[0, 1], [-1, 0]], k = ij.
  const cplx i(0.0, 1.0);
  std::array<Matrix, 4> unit;
  unit[0] = Matrix::Identity(2, 2);
  unit[1] = Matrix(2, 2);
  unit[1] << i, 0.0, 0.0, -i;
  unit[2] = Matrix(2, 2);
  unit[2] << 0.0, 1.0, -1.0, 0.0;
  unit[3] = unit[1] * unit[2];
  RawIrrep e{"E", 2, {}};
  for (const auto& q : q8_elements())
    e.matrices.push_back((q.negative ? -1.0 : 1.0) * unit[static_cast<std::size_t>(q.axis)]);
  out.push_back(std::move(e));
  return out;
}

inline FiniteGroup cyclic(std::size_t n) { return FiniteGroup::load(cyclic_spec(n)); }
inline FiniteGroup s3() { return FiniteGroup::load(s3_spec()); }
inline FiniteGroup q8() { return FiniteGroup::load(q8_spec()); }
inline FiniteGroup d8star() { return FiniteGroup::load(d8star_spec()); }

inline IrrepSet cyclic_set(std::size_t n) { return validate_irrep_set(cyclic(n), cyclic_irreps(n)); }
inline IrrepSet s3_set() { return validate_irrep_set(s3(), s3_irreps()); }
inline IrrepSet q8_set() { return validate_irrep_set(q8(), q8_irreps()); }
inline IrrepSet d8star_set() { return validate_irrep_set(d8star(), d8star_irreps()); }

/// Names accepted by `bundled_group` / `bundled_irreps`.
inline std::vector<std::string> bundled_names() {
  std::vector<std::string> names;
  for (std::size_t n = 1; n <= 12; ++n) names.push_back("z" + std::to_string(n));
  names.insert(names.end(), {"s3", "q8", "d8star"});
  return names;
}

inline std::optional<GroupSpec> bundled_group(const std::string& name) {
  if (name == "s3") return s3_spec();
  if (name == "q8") return q8_spec();
  if (name == "d8star") return d8star_spec();
  if (name.size() >= 2 && name[0] == 'z') {
    try {
      std::size_t pos = 0;
      const auto n = std::stoul(name.substr(1), &pos);
      if (pos == name.size() - 1 && n >= 1 && n <= 12) return cyclic_spec(n);
    } catch (const std::exception&) {
    }
  }
  return std::nullopt;
}

inline std::optional<std::vector<RawIrrep>> bundled_irreps(const std::string& name) {
  if (name == "s3") return s3_irreps();
  if (name == "q8") return q8_irreps();
  if (name == "d8star") return d8star_irreps();
  if (auto spec = bundled_group(name)) return cyclic_irreps(spec->table.size());
  return std::nullopt;
}

}  // namespace sectorium::fixtures
