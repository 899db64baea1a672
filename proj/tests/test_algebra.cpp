#include "sectorium/sectorium.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace sectorium;

namespace {

std::vector<IrrepSet> all_sets() {
  std::vector<IrrepSet> out;
  for (const auto& name : fixtures::bundled_names()) {
    const auto g = FiniteGroup::load(*fixtures::bundled_group(name));
    out.push_back(validate_irrep_set(g, *fixtures::bundled_irreps(name)));
  }
  return out;
}

AlgebraElement random_element(std::size_t n, std::mt19937_64& rng) {
  return AlgebraElement(random_matrix(static_cast<Eigen::Index>(n), 1, rng));
}

AlgebraElement hat(const FiniteGroup& g, Element x) { return AlgebraElement::basis(g.order(), x); }

// Product through the sector blocks: transform, multiply blockwise, transform back.
AlgebraElement blockwise_product(const IrrepSet& set, const AlgebraElement& v, const AlgebraElement& w) {
  const auto a = to_sectors(v, set), b = to_sectors(w, set);
  SectorComponents c;
  for (std::size_t mu = 0; mu < set.count(); ++mu) c.blocks.push_back(a.blocks[mu] * b.blocks[mu]);
  return from_sectors(c, set);
}

// Independent nullspace oracle: dimension of {x : x.b == b.x for every b in family}.
std::size_t commuting_dim(const FiniteGroup& g, const std::vector<AlgebraElement>& family) {
  const auto n = static_cast<Eigen::Index>(g.order());
  Matrix stacked(n * static_cast<Eigen::Index>(family.size()), n);
  for (std::size_t k = 0; k < family.size(); ++k)
    stacked.middleRows(static_cast<Eigen::Index>(k) * n, n) =
        right_multiplication(g, family[k]) - left_multiplication(g, family[k]);
  return static_cast<std::size_t>(nullspace(stacked).cols());
}

}  // namespace

TEST(Multiply, BasisAndIdentity) {
  const auto set = fixtures::s3_set();
  const auto& g = set.group();
  std::mt19937_64 rng(3);
  for (Element a = 0; a < g.order(); ++a)
    for (Element b = 0; b < g.order(); ++b)
      EXPECT_LT(max_abs(multiply(g, hat(g, a), hat(g, b)).coeffs - hat(g, g.mul(a, b)).coeffs), 1e-15);
  const auto v = random_element(g.order(), rng);
  EXPECT_LT(max_abs(multiply(g, hat(g, g.identity()), v).coeffs - v.coeffs), 1e-15);
  EXPECT_THROW(multiply(g, v, AlgebraElement::zero(5)), Error);
}

TEST(Multiply, ConvolutionMatchesBlockwiseProduct) {
  std::mt19937_64 rng(5);
  for (const auto& set : all_sets()) {
    const auto& g = set.group();
    for (int k = 0; k < 10; ++k) {
      const auto v = random_element(g.order(), rng), w = random_element(g.order(), rng);
      EXPECT_LT(max_abs(multiply(g, v, w).coeffs - blockwise_product(set, v, w).coeffs), 1e-12) << g.name();
      EXPECT_LT(max_abs(left_multiplication(g, v) * w.coeffs - multiply(g, v, w).coeffs), 1e-12);
      EXPECT_LT(max_abs(right_multiplication(g, w) * v.coeffs - multiply(g, v, w).coeffs), 1e-12);
    }
  }
}

TEST(Sectors, IdentityAndBasisElements) {
  const auto set = fixtures::d8star_set();
  const auto& g = set.group();
  const auto e = to_sectors(hat(g, g.identity()), set);
  for (std::size_t mu = 0; mu < set.count(); ++mu) {
    const auto d = static_cast<Eigen::Index>(set[mu].dim());
    EXPECT_LT(max_abs(e.blocks[mu] - Matrix::Identity(d, d)), 1e-15);
  }
  for (Element x = 0; x < g.order(); ++x) {
    const auto s = to_sectors(hat(g, x), set);
    for (std::size_t mu = 0; mu < set.count(); ++mu) EXPECT_LT(max_abs(s.blocks[mu] - set[mu](x)), 1e-15);
  }
}

TEST(Sectors, RoundTrip) {
  const auto set = fixtures::d8star_set();
  std::mt19937_64 rng(7);
  for (int k = 0; k < 100; ++k) {
    const auto v = random_element(set.order(), rng);
    EXPECT_LT(max_abs(from_sectors(to_sectors(v, set), set).coeffs - v.coeffs), 1e-12);
  }
}

TEST(AdaptedBasis, Z2ByHand) {
  const auto set = fixtures::cyclic_set(2);
  const auto b = adapted_basis(set);
  EXPECT_LT(max_abs(b.unit(0, 0, 0).coeffs - Vector::Constant(2, 0.5)), 1e-15);
  Vector odd(2);
  odd << 0.5, -0.5;
  EXPECT_LT(max_abs(b.unit(1, 0, 0).coeffs - odd), 1e-15);
}

TEST(AdaptedBasis, MultiplicationLawByConvolution) {
  // Brute force over all pairs using the convolution product directly.
  for (const auto& set : all_sets()) {
    const auto& g = set.group();
    const auto b = adapted_basis(set);
    double worst = 0.0;
    for (std::size_t mu = 0; mu < set.count(); ++mu)
      for (std::size_t nu = 0; nu < set.count(); ++nu)
        for (std::size_t i = 0; i < set[mu].dim(); ++i)
          for (std::size_t j = 0; j < set[mu].dim(); ++j)
            for (std::size_t k = 0; k < set[nu].dim(); ++k)
              for (std::size_t l = 0; l < set[nu].dim(); ++l) {
                auto expected = AlgebraElement::zero(g.order());
                if (mu == nu && i == l) expected = b.unit(mu, k, j);
                worst = std::max(worst, max_abs(multiply(g, b.unit(mu, i, j), b.unit(nu, k, l)).coeffs - expected.coeffs));
              }
    EXPECT_LT(worst, 1e-10) << g.name();
    const auto r = basis_residuals(b);
    EXPECT_LT(r.multiplication_law, 1e-10);
    EXPECT_LT(r.resolution_of_identity, 1e-12);
    EXPECT_LT(r.orthogonal_idempotents, 1e-10);
    EXPECT_LT(r.left_action, 1e-10);
    EXPECT_LT(r.right_action, 1e-10);
  }
}

TEST(AdaptedBasis, ResolutionOfIdentityAndLeftAction) {
  const auto set = fixtures::s3_set();
  const auto& g = set.group();
  const auto b = adapted_basis(set);
  auto sum = AlgebraElement::zero(g.order());
  for (std::size_t mu = 0; mu < set.count(); ++mu)
    for (std::size_t i = 0; i < set[mu].dim(); ++i) sum = sum + b.idempotent(mu, i);
  EXPECT_LT(max_abs(sum.coeffs - hat(g, g.identity()).coeffs), 1e-12);
  for (Element h = 0; h < g.order(); ++h)
    for (std::size_t mu = 0; mu < set.count(); ++mu)
      for (std::size_t i = 0; i < set[mu].dim(); ++i)
        for (std::size_t j = 0; j < set[mu].dim(); ++j) {
          auto expected = AlgebraElement::zero(g.order());
          for (std::size_t k = 0; k < set[mu].dim(); ++k)
            expected = expected + b.unit(mu, i, k) * set[mu](h)(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
          EXPECT_LT(max_abs(multiply(g, hat(g, h), b.unit(mu, i, j)).coeffs - expected.coeffs), 1e-12);
        }
}

TEST(AdaptedBasis, PrimitiveIdempotentFromAmplitude) {
  const auto set = fixtures::d8star_set();
  const auto& g = set.group();
  const auto b = adapted_basis(set);
  Vector a(2);
  a << cplx(0.6, 0.0), cplx(0.0, 0.8);
  const auto p = b.idempotent(4, a);
  EXPECT_LT(max_abs(multiply(g, p, p).coeffs - p.coeffs), 1e-12);
  EXPECT_LT(max_abs(star(g, p).coeffs - p.coeffs), 1e-12);
  const auto block = to_sectors(p, set).blocks[4];
  EXPECT_LT(max_abs(block - a.conjugate() * a.transpose()), 1e-12);
}

TEST(Subalgebras, DimensionsMatchFormulas) {
  for (const auto& set : all_sets()) {
    const auto& g = set.group();
    const auto b = adapted_basis(set);
    const auto rep = center_and_subalgebras(b);
    EXPECT_EQ(rep.center_dim, set.count()) << g.name();
    EXPECT_EQ(rep.abelian_dim, set.sum_dims()) << g.name();
    for (std::size_t mu = 0; mu < set.count(); ++mu)
      EXPECT_EQ(rep.centralizer_dims[mu], g.order() - set[mu].dim() * set[mu].dim() + 1) << g.name();
    EXPECT_LT(rep.center_span_mismatch, 1e-10);
    EXPECT_LT(rep.abelian_span_mismatch, 1e-10);
    EXPECT_LT(rep.centralizer_span_mismatch, 1e-10);
    EXPECT_LT(rep.abelian_commutator, 1e-10);

    // Oracle: nullspace of the commutator map in the group-element basis.
    std::vector<AlgebraElement> group_elems, diag;
    for (Element x = 0; x < g.order(); ++x) group_elems.push_back(hat(g, x));
    for (std::size_t mu = 0; mu < set.count(); ++mu)
      for (std::size_t i = 0; i < set[mu].dim(); ++i) diag.push_back(b.idempotent(mu, i));
    EXPECT_EQ(commuting_dim(g, group_elems), set.count());
    EXPECT_EQ(commuting_dim(g, diag), set.sum_dims());
  }
}

TEST(Subalgebras, NamedExamples) {
  const auto s3 = center_and_subalgebras(adapted_basis(fixtures::s3_set()));
  EXPECT_EQ(s3.center_dim, 3u);
  EXPECT_EQ(s3.abelian_dim, 4u);
  EXPECT_EQ(s3.centralizer_dims[2], 3u);
  const auto d8 = center_and_subalgebras(adapted_basis(fixtures::d8star_set()));
  EXPECT_EQ(d8.center_dim, 5u);
  EXPECT_EQ(d8.abelian_dim, 6u);
  EXPECT_EQ(d8.centralizer_dims[4], 5u);
  const auto z7 = center_and_subalgebras(adapted_basis(fixtures::cyclic_set(7)));
  EXPECT_EQ(z7.center_dim, 7u);
  EXPECT_EQ(z7.abelian_dim, 7u);
}

TEST(InnerProduct, Examples) {
  const auto set = fixtures::d8star_set();
  const auto& g = set.group();
  const auto cfg = InnerProductConfig::for_set(set);
  for (Element a = 0; a < g.order(); ++a)
    for (Element b = 0; b < g.order(); ++b) {
      const double expected = a == b ? 1.0 / 8.0 : 0.0;
      EXPECT_NEAR(std::abs(inner_product(hat(g, a), hat(g, b), set, cfg) - expected), 0.0, 1e-14);
      EXPECT_NEAR(std::abs(inner_product(hat(g, a), hat(g, b)) - expected), 0.0, 1e-14);
    }
  const auto basis = adapted_basis(set);
  for (std::size_t mu = 0; mu < set.count(); ++mu)
    for (std::size_t nu = 0; nu < set.count(); ++nu)
      for (std::size_t i = 0; i < set[mu].dim(); ++i)
        for (std::size_t k = 0; k < set[mu].dim(); ++k)
          for (std::size_t l = 0; l < set[nu].dim(); ++l)
            for (std::size_t m = 0; m < set[nu].dim(); ++m) {
              const double expected = (mu == nu && i == l && k == m) ? static_cast<double>(set[mu].dim()) / 64.0 : 0.0;
              EXPECT_NEAR(std::abs(inner_product(basis.unit(mu, i, k), basis.unit(nu, l, m)) - expected), 0.0, 1e-14);
            }
}

TEST(InnerProduct, RightInvariantAndRoutesAgree) {
  std::mt19937_64 rng(11);
  for (const auto& set : all_sets()) {
    const auto& g = set.group();
    const auto cfg = InnerProductConfig::for_set(set);
    for (int k = 0; k < 5; ++k) {
      const auto v = random_element(g.order(), rng), w = random_element(g.order(), rng);
      const Element x = static_cast<Element>(rng() % g.order());
      const auto vg = multiply(g, v, hat(g, x)), wg = multiply(g, w, hat(g, x));
      EXPECT_LT(std::abs(inner_product(vg, wg) - inner_product(v, w)), 1e-12);
      const auto gv = multiply(g, hat(g, x), v), gw = multiply(g, hat(g, x), w);
      EXPECT_LT(std::abs(inner_product(gv, gw) - inner_product(v, w)), 1e-12);
      EXPECT_LT(std::abs(inner_product(v, w, set, cfg) - inner_product(v, w)), 1e-12);
    }
  }
}

TEST(Star, Examples) {
  const auto set = fixtures::s3_set();
  const auto& g = set.group();
  const auto b = adapted_basis(set);
  for (Element x = 0; x < g.order(); ++x) EXPECT_LT(max_abs(star(g, hat(g, x)).coeffs - hat(g, g.inverse(x)).coeffs), 1e-15);
  for (std::size_t mu = 0; mu < set.count(); ++mu)
    for (std::size_t i = 0; i < set[mu].dim(); ++i)
      for (std::size_t j = 0; j < set[mu].dim(); ++j)
        EXPECT_LT(max_abs(star(g, b.unit(mu, i, j)).coeffs - b.unit(mu, j, i).coeffs), 1e-12);
  std::mt19937_64 rng(13);
  const auto v = random_element(g.order(), rng), w = random_element(g.order(), rng);
  EXPECT_LT(max_abs(star(g, star(g, v)).coeffs - v.coeffs), 1e-15);
  // (vw)* = w* v*
  EXPECT_LT(max_abs(star(g, multiply(g, v, w)).coeffs - multiply(g, star(g, w), star(g, v)).coeffs), 1e-12);
}

TEST(RankOne, Examples) {
  const auto set = fixtures::d8star_set();
  const auto& g = set.group();
  const auto b = adapted_basis(set);
  for (std::size_t mu = 0; mu < set.count(); ++mu)
    for (std::size_t i = 0; i < set[mu].dim(); ++i)
      for (std::size_t j = 0; j < set[mu].dim(); ++j) {
        const auto r = rank_one_test(b.unit(mu, i, j), set);
        ASSERT_TRUE(r.is_irreducible_member);
        EXPECT_EQ(*r.mu, mu);
        const Matrix block = to_sectors(b.unit(mu, i, j), set).blocks[mu];
        EXPECT_LT(max_abs(r.a * r.b.transpose() - block), 1e-12);
      }
  EXPECT_FALSE(rank_one_test(b.unit(4, 0, 0) + b.unit(4, 1, 1), set).is_irreducible_member);
  const auto s3 = fixtures::s3_set();
  for (Element x = 0; x < s3.order(); ++x) EXPECT_FALSE(rank_one_test(hat(s3.group(), x), s3).is_irreducible_member);
  // A perturbed rank-one block is rank two.
  auto perturbed = b.unit(4, 0, 1) + b.unit(4, 1, 0) * 1e-6;
  EXPECT_FALSE(rank_one_test(perturbed, set).is_irreducible_member);
  (void)g;
}

TEST(LeftMultiplier, RecoveredFromRightInvariantOperators) {
  std::mt19937_64 rng(17);
  for (const auto& set : all_sets()) {
    const auto& g = set.group();
    const auto basis = adapted_basis(set);
    std::vector<Matrix> right;
    for (Element x = 0; x < g.order(); ++x) right.push_back(right_multiplication(g, hat(g, x)));
    const auto comm = commutant(std::span<const Matrix>(right), static_cast<Eigen::Index>(g.order()));
    ASSERT_EQ(comm.size(), g.order());
    Matrix op = Matrix::Zero(static_cast<Eigen::Index>(g.order()), static_cast<Eigen::Index>(g.order()));
    for (const auto& c : comm) op += random_matrix(1, 1, rng)(0, 0) * c;
    const auto o = recover_left_multiplier(basis, op);
    EXPECT_LT(max_abs(left_multiplication(g, o) - op), 1e-10) << g.name();
  }
}

TEST(LeftMultiplier, SelfAdjointIffStarSymmetric) {
  std::mt19937_64 rng(19);
  const auto set = fixtures::d8star_set();
  const auto& g = set.group();
  const Matrix w = ToyHilbert(set).coordinate_map();  // unitary onto coordinates
  for (int k = 0; k < 20; ++k) {
    auto o = random_element(g.order(), rng);
    const bool symmetric = k % 2 == 0;
    if (symmetric) o = (o + star(g, o)) * 0.5;
    const Matrix l = w * left_multiplication(g, o) * w.adjoint();
    EXPECT_EQ(max_abs(l - l.adjoint()) < 1e-10, symmetric);
  }
}

TEST(BasisChange, ConjugatedUnitsMatchTransformedIrreps) {
  const auto set = fixtures::d8star_set();
  const auto basis = adapted_basis(set);
  std::mt19937_64 rng(23);
  const Matrix u = Eigen::HouseholderQR<Matrix>(random_matrix(2, 2, rng)).householderQ();
  const auto conj = conjugated_units(basis, 4, u);
  auto raw = to_raw(set);
  raw[4] = transform_irrep(set[4], u);
  const auto moved = adapted_basis(validate_irrep_set(set.group(), raw));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_LT(max_abs(conj[i][j].coeffs - moved.unit(4, i, j).coeffs), 1e-12);
  // Central idempotent is basis independent.
  EXPECT_LT(max_abs((conj[0][0] + conj[1][1]).coeffs - basis.central_idempotent(4).coeffs), 1e-12);
}
