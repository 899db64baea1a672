#include "sectorium/sectorium.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace sectorium;

namespace {

Element el(const FiniteGroup& g, const std::string& label) { return *g.find(label); }

// |Q| = 5 ring with a chord; voltages generate S3.
DiscreteCover s3_ring(const FiniteGroup& g) {
  return DiscreteCover(5, g,
                       {{0, 1, el(g, "(012)")},
                        {1, 2, el(g, "e")},
                        {2, 3, el(g, "(01)")},
                        {3, 4, el(g, "e")},
                        {4, 0, el(g, "e")},
                        {0, 2, el(g, "(12)")}});
}

// Wedge of two circles at base point 0 with voltages a and b.
DiscreteCover wedge(const FiniteGroup& g, Element a, Element b) { return DiscreteCover(1, g, {{0, 0, a}, {0, 0, b}}); }

Vector random_unit_vector(Eigen::Index d, std::mt19937_64& rng) {
  Vector v = random_matrix(d, 1, rng);
  return v / v.norm();
}

AlgebraElement random_element(std::size_t n, std::mt19937_64& rng) {
  return AlgebraElement(random_matrix(static_cast<Eigen::Index>(n), 1, rng));
}

Matrix identity(const DiscreteCover& c) {
  const auto np = static_cast<Eigen::Index>(c.points());
  return Matrix::Identity(np, np);
}

}  // namespace

TEST(Cover, RejectsBadEdges) {
  const auto g = fixtures::s3();
  EXPECT_THROW(DiscreteCover(0, g), Error);
  EXPECT_THROW(DiscreteCover(2, g, {{0, 2, 0}}), Error);
  EXPECT_THROW(DiscreteCover(2, g, {{0, 1, 6}}), Error);
}

TEST(LiftEval, IndicatorLiftsToItsFiber) {
  const auto g = fixtures::s3();
  const DiscreteCover c(5, g);
  Vector psi = Vector::Zero(static_cast<Eigen::Index>(c.points()));
  const std::size_t p0 = c.point(2, 3);
  psi(static_cast<Eigen::Index>(p0)) = 1.0;
  const Vector lifted = lift_map_F(c, psi);
  for (std::size_t p = 0; p < c.points(); ++p) {
    double nonzero = 0;
    for (Element x = 0; x < g.order(); ++x) nonzero += std::abs(lifted(static_cast<Eigen::Index>(p * g.order() + x)));
    EXPECT_EQ(nonzero, c.base_of(p) == 2 ? 1.0 : 0.0);
  }
}

TEST(LiftEval, RoundTripAndIsometry) {
  const auto g = fixtures::s3();
  const DiscreteCover c(5, g);
  std::mt19937_64 rng(1);
  const Matrix f = lift_matrix(c), e = eval_matrix(c);
  for (int k = 0; k < 50; ++k) {
    const Vector psi = random_matrix(static_cast<Eigen::Index>(c.points()), 1, rng);
    const Vector lifted = lift_map_F(c, psi);
    EXPECT_LT(equivariance_residual(c, lifted), 1e-15);
    EXPECT_LT(max_abs(eval_map_E(c, lifted) - psi), 1e-15);
    EXPECT_LT(max_abs(f * psi - lifted), 1e-15);
    EXPECT_LT(std::abs(std::sqrt(equivariant_inner(c, lifted, lifted).real()) - std::sqrt(cover_inner(c, psi, psi).real())),
              1e-12);
  }
  EXPECT_LT(max_abs(e * f - identity(c)), 1e-15);
  Vector bad = Vector::Zero(static_cast<Eigen::Index>(c.points() * g.order()));
  bad(1) = 1.0;
  EXPECT_THROW(eval_map_E(c, bad), Error);
}

TEST(RightAction, IdentityHomomorphismAndMatrixUnits) {
  const auto set = fixtures::s3_set();
  const auto& g = set.group();
  const auto c = s3_ring(g);
  EXPECT_LT(max_abs(right_action_operator(c, AlgebraElement::basis(6, g.identity())) - identity(c)), 1e-15);
  for (Element a = 0; a < 6; ++a)
    for (Element b = 0; b < 6; ++b) EXPECT_LT(max_abs(translation(c, a) * translation(c, b) - translation(c, g.mul(a, b))), 1e-15);
  std::mt19937_64 rng(2);
  const auto v = random_element(6, rng), w = random_element(6, rng);
  EXPECT_LT(max_abs(right_action_operator(c, v) * right_action_operator(c, w) - right_action_operator(c, multiply(g, w, v))), 1e-12);

  const auto basis = adapted_basis(set);
  Matrix sum = Matrix::Zero(30, 30);
  for (std::size_t mu = 0; mu < set.count(); ++mu)
    for (std::size_t i = 0; i < set[mu].dim(); ++i) {
      const Matrix t = right_action_operator(c, basis.idempotent(mu, i));
      const auto pr = projector_residual(t);
      EXPECT_LT(pr.idempotency, 1e-12);
      EXPECT_LT(pr.hermiticity, 1e-12);
      for (std::size_t nu = 0; nu < set.count(); ++nu)
        for (std::size_t j = 0; j < set[nu].dim(); ++j)
          if (mu != nu || i != j) EXPECT_LT(max_abs(t * right_action_operator(c, basis.idempotent(nu, j))), 1e-12);
      sum += t;
    }
  EXPECT_LT(max_abs(sum - identity(c)), 1e-12);
}

TEST(RightAction, LiftIntertwinesPointwiseMultiplication) {
  const auto set = fixtures::d8star_set();
  const auto& g = set.group();
  const DiscreteCover c(4, g);
  std::mt19937_64 rng(3);
  const Matrix f = lift_matrix(c), e = eval_matrix(c);
  for (int k = 0; k < 5; ++k) {
    const auto v = random_element(8, rng);
    const Matrix pw = pointwise_right_multiplication(c, v);
    // On equivariant functions (the range of F), F T_v E == pointwise multiplication.
    EXPECT_LT((f * right_action_operator(c, v) * e * f - pw * f).norm(), 1e-10);
  }
}

TEST(SectorProjector, TrivialIsGroupAverage) {
  const auto set = fixtures::s3_set();
  const auto c = s3_ring(set.group());
  const Matrix t0 = sector_projector(c, set, 0, unit_vector(1, 0));
  Matrix avg = Matrix::Zero(30, 30);
  for (Element g = 0; g < 6; ++g) avg += translation(c, g) / 6.0;
  EXPECT_LT(max_abs(t0 - avg), 1e-15);
  EXPECT_EQ(numerical_rank(t0), 5);
}

TEST(SectorProjector, RanksAndCharacterFormula) {
  const auto set = fixtures::s3_set();
  const auto c = s3_ring(set.group());
  EXPECT_EQ(numerical_rank(sector_projector(c, set, 2, unit_vector(2, 0))), 10);
  std::mt19937_64 rng(4);
  Matrix total = Matrix::Zero(30, 30);
  for (std::size_t mu = 0; mu < set.count(); ++mu) {
    const auto d = set[mu].dim();
    const Matrix p = sector_projector(c, set, mu, random_unit_vector(static_cast<Eigen::Index>(d), rng));
    EXPECT_EQ(numerical_rank(p), static_cast<Eigen::Index>(5 * d));
    EXPECT_LT(projector_residual(p).idempotency, 1e-12);
    EXPECT_LT(projector_residual(p).hermiticity, 1e-12);
    total += sector_projector(c, set, mu);
  }
  EXPECT_LT(max_abs(total - identity(c)), 1e-12);

  // Abelian sectors: (1/n) sum_g chi(g) psi o R_g.
  const auto z4 = fixtures::cyclic_set(4);
  const DiscreteCover cz(3, z4.group());
  for (std::size_t mu = 0; mu < 4; ++mu) {
    Matrix expected = Matrix::Zero(12, 12);
    for (Element g = 0; g < 4; ++g) expected += z4[mu].character(g) * translation(cz, g) / 4.0;
    EXPECT_LT(max_abs(sector_projector(cz, z4, mu, unit_vector(1, 0)) - expected), 1e-15);
  }
  EXPECT_THROW(sector_projector(c, set, 2, Vector::Ones(2)), Error);
}

TEST(SectorProjector, AmplitudeSelectsRightActionImage) {
  // T^mu(a) equals the right action of the primitive idempotent for a.
  const auto set = fixtures::d8star_set();
  const auto basis = adapted_basis(set);
  const DiscreteCover c(3, set.group());
  std::mt19937_64 rng(5);
  const Vector a = random_unit_vector(2, rng);
  EXPECT_LT(max_abs(sector_projector(c, set, 4, a) - right_action_operator(c, basis.idempotent(4, a))), 1e-12);
}

TEST(Kernels, InvarianceAndGroupAverage) {
  const auto set = fixtures::s3_set();
  const DiscreteCover c(4, set.group());
  std::mt19937_64 rng(6);
  const Matrix k = random_matrix(24, 24, rng);
  EXPECT_GT(invariance_residual(c, k), 1e-3);
  EXPECT_THROW(InvariantKernel(c, k), Error);
  const Matrix avg = group_average(c, k);
  EXPECT_LT(invariance_residual(c, avg), 1e-12);
  EXPECT_LT(max_abs(group_average(c, avg) - avg), 1e-12);
  const auto h = random_invariant_kernel(c, rng, true);
  EXPECT_LT(max_abs(h.matrix() - h.matrix().adjoint()), 1e-15);
}

TEST(Kernels, ProjectedKernelsAndPropagators) {
  const auto set = fixtures::s3_set();
  const DiscreteCover c(4, set.group());
  std::mt19937_64 rng(7);
  const InvariantKernel one(c, identity(c));
  for (std::size_t mu = 0; mu < set.count(); ++mu)
    for (std::size_t i = 0; i < set[mu].dim(); ++i)
      EXPECT_LT(max_abs(project_kernel(c, set, one, mu, i) - sector_projector(c, set, mu, unit_vector(set[mu].dim(), i))), 1e-15);

  const auto h = random_invariant_kernel(c, rng, true);
  const double d1 = 0.3, d2 = 1.1;
  const InvariantKernel k1(c, propagator(h.matrix(), d1)), k2(c, propagator(h.matrix(), d2)),
      k12(c, propagator(h.matrix(), d1 + d2));
  const auto generic = random_invariant_kernel(c, rng, false);
  for (std::size_t mu = 0; mu < set.count(); ++mu) {
    const Vector a = random_unit_vector(static_cast<Eigen::Index>(set[mu].dim()), rng);
    const Matrix p = sector_projector(c, set, mu, a);
    EXPECT_LT(max_abs(p * generic.matrix() - generic.matrix() * p), 1e-12);
    EXPECT_LT(max_abs(project_kernel(c, set, generic, mu, a) - generic.matrix() * p), 1e-12);
    for (std::size_t i = 0; i < set[mu].dim(); ++i)
      EXPECT_LT(max_abs(project_kernel(c, set, k1, mu, i) * project_kernel(c, set, k2, mu, i) - project_kernel(c, set, k12, mu, i)),
                1e-9);
  }
  // Abelian sectors with characters.
  const auto z3 = fixtures::cyclic_set(3);
  const DiscreteCover cz(2, z3.group());
  const auto kz = random_invariant_kernel(cz, rng, false);
  for (std::size_t mu = 0; mu < 3; ++mu) {
    Matrix expected = Matrix::Zero(6, 6);
    for (Element g = 0; g < 3; ++g) expected += z3[mu].character(g) * translation(cz, g) * kz.matrix() / 3.0;
    EXPECT_LT(max_abs(project_kernel(cz, z3, kz, mu, std::size_t{0}) - expected), 1e-12);
  }
}

TEST(Localization, ProjectorProperties) {
  const auto set = fixtures::s3_set();
  const auto& g = set.group();
  const auto c = s3_ring(g);
  const Matrix f = lift_matrix(c);
  const auto whole = LocalizationRegion::of(c, {0, 1, 2, 3, 4});
  EXPECT_LT(max_abs(localization_projector(c, whole) * f - f), 1e-15);

  const auto u = LocalizationRegion::of(c, {0, 3});
  const Matrix pu = localization_projector(c, u);
  EXPECT_LT(max_abs(pu * pu - pu), 1e-15);
  std::mt19937_64 rng(8);
  const Vector psihat = f * random_matrix(30, 1, rng);
  const Vector loc = localize(c, psihat, u);
  EXPECT_LT(max_abs(localize(c, loc, u) - loc), 1e-15);
  EXPECT_LT(equivariance_residual(c, loc), 1e-15);
  for (int k = 0; k < 10; ++k) {
    const auto v = random_element(6, rng);
    const Matrix pw = pointwise_right_multiplication(c, v);
    EXPECT_LT(max_abs(pu * pw - pw * pu), 1e-12);
  }
  EXPECT_THROW(LocalizationRegion::of(c, {7}), Error);
}

TEST(Localization, LeftActionProperties) {
  const auto set = fixtures::s3_set();
  const auto& g = set.group();
  const auto c = s3_ring(g);
  const auto u = LocalizationRegion::of(c, {1, 2, 4});
  const Matrix f = lift_matrix(c);
  const Matrix pu = localization_projector(c, u);
  const auto e = AlgebraElement::basis(6, g.identity());
  EXPECT_LT(max_abs(localized_left_action(c, e, u) - pu), 1e-15);

  for (Element x = 0; x < 6; ++x) {
    const auto sym = AlgebraElement::basis(6, x) + AlgebraElement::basis(6, g.inverse(x));
    const Matrix pulled = pull_back(c, localized_left_action(c, sym, u));
    EXPECT_LT(max_abs(pulled - pulled.adjoint()), 1e-12);
  }
  std::mt19937_64 rng(9);
  for (int k = 0; k < 20; ++k) {
    auto v = random_element(6, rng);
    const bool symmetric = k % 2 == 0;
    if (symmetric) v = (v + star(g, v)) * 0.5;
    const Matrix ov = localized_left_action(c, v, u);
    EXPECT_LT(equivariance_residual(c, ov * (f * random_matrix(30, 1, rng))), 1e-12);
    const Matrix pulled = pull_back(c, ov);
    EXPECT_EQ(max_abs(pulled - pulled.adjoint()) < 1e-10, symmetric);
  }
  for (Element a = 0; a < 6; ++a)
    for (Element b = 0; b < 6; ++b) {
      const Matrix lhs = localized_left_action(c, AlgebraElement::basis(6, a), u) * localized_left_action(c, AlgebraElement::basis(6, b), u);
      EXPECT_LT(max_abs((lhs - localized_left_action(c, AlgebraElement::basis(6, g.mul(a, b)), u)) * f), 1e-12);
    }
}

TEST(Holonomy, TrivialVoltages) {
  const auto g = fixtures::s3();
  const DiscreteCover c(3, g, {{0, 1, 0}, {1, 2, 0}, {2, 0, 0}, {0, 2, 0}});
  const std::vector<LoopStep> loop{{0, true}, {1, true}, {2, true}, {3, true}, {2, true}, {0, true}, {0, false}};
  for (Element h = 0; h < 6; ++h) {
    EXPECT_EQ(holonomy(c, 0, loop, h), g.identity());
    EXPECT_EQ(holonomy(c, 0, {}, h), g.identity());
  }
}

TEST(Holonomy, WedgeAntiHomomorphismAndConjugation) {
  const auto g = fixtures::d8star();
  const auto c = wedge(g, el(g, "i"), el(g, "j"));
  const std::vector<LoopStep> ga{{0, true}}, gb{{1, true}};
  for (Element h = 0; h < 8; ++h) {
    EXPECT_EQ(holonomy(c, 0, concatenate(ga, gb), h), g.mul(holonomy(c, 0, gb, h), holonomy(c, 0, ga, h)));
    for (Element s = 0; s < 8; ++s)
      EXPECT_EQ(holonomy(c, 0, ga, g.mul(h, s)), g.conjugate(g.inverse(s), holonomy(c, 0, ga, h)));
  }
  // Traversing a loop backwards inverts the holonomy.
  EXPECT_EQ(holonomy(c, 0, {{0, false}}, g.identity()), g.inverse(holonomy(c, 0, ga, g.identity())));
  EXPECT_THROW(holonomy(c, 0, {{5, true}}, 0), Error);
  const DiscreteCover path(2, g, {{0, 1, 0}});
  try {
    holonomy(path, 0, {{0, true}}, 0);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotALoop);
  }
  try {
    holonomy(c, 0, {{3, true}}, 0);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownEdge);
  }
}

TEST(Holonomy, RandomLoopsOnNonAbelianCover) {
  const auto g = fixtures::s3();
  const auto c = s3_ring(g);
  std::mt19937_64 rng(10);
  // Loops at 0 built from the cycle basis of the ring with its chord.
  const std::vector<std::vector<LoopStep>> cycles{
      {{0, true}, {1, true}, {2, true}, {3, true}, {4, true}}, {{5, true}, {1, false}, {0, false}}};
  auto random_loop = [&] {
    std::vector<LoopStep> loop;
    const int len = 1 + static_cast<int>(rng() % 4);
    for (int k = 0; k < len; ++k) {
      auto cyc = cycles[rng() % 2];
      if (rng() % 2) {
        std::reverse(cyc.begin(), cyc.end());
        for (auto& s : cyc) s.forward = !s.forward;
      }
      loop = concatenate(loop, cyc);
    }
    return loop;
  };
  for (int k = 0; k < 100; ++k) {
    const auto l1 = random_loop(), l2 = random_loop();
    const Element h = static_cast<Element>(rng() % 6), s = static_cast<Element>(rng() % 6);
    EXPECT_EQ(holonomy(c, 0, concatenate(l1, l2), h), g.mul(holonomy(c, 0, l2, h), holonomy(c, 0, l1, h)));
    EXPECT_EQ(holonomy(c, 0, l1, g.mul(h, s)), g.conjugate(g.inverse(s), holonomy(c, 0, l1, h)));
  }
}

TEST(Gauge, CountEqualsCenter) {
  {
    const auto z6 = fixtures::cyclic(6);
    EXPECT_EQ(gauge_transformations(wedge(z6, 1, 1)).size(), 6u);
  }
  {
    const auto g = fixtures::d8star();
    const auto gt = gauge_transformations(wedge(g, el(g, "i"), el(g, "j")));
    ASSERT_EQ(gt.size(), 2u);
    std::set<Element> values;
    for (const auto& t : gt) {
      values.insert(t.value_at_base);
      EXPECT_TRUE(t.projects_to_identity);
      EXPECT_EQ(t.action_commutator, 0.0);
    }
    EXPECT_EQ(values, (std::set<Element>{el(g, "1"), el(g, "-1")}));
  }
  {
    const auto g = fixtures::s3();
    const auto gt = gauge_transformations(s3_ring(g));
    ASSERT_EQ(gt.size(), 1u);
    EXPECT_EQ(gt.front().value_at_base, g.identity());
  }
  const auto g = fixtures::s3();
  const DiscreteCover split(2, g, {{0, 1, el(g, "(01)")}});
  EXPECT_FALSE(is_connected(split));
  EXPECT_THROW(gauge_transformations(split), Error);
  EXPECT_TRUE(is_connected(s3_ring(g)));
}

TEST(CMuAction, Examples) {
  const auto set = fixtures::d8star_set();
  const auto& g = set.group();
  const DiscreteCover c(3, g);
  std::mt19937_64 rng(11);
  for (std::size_t mu = 0; mu < set.count(); ++mu) {
    const auto d = static_cast<Eigen::Index>(set[mu].dim());
    const Matrix sigma = equivariant_extension(c, set[mu], random_matrix(3, d, rng));
    EXPECT_LT(vector_equivariance_residual(c, set[mu], sigma), 1e-15);
    const auto id = c_mu_action(c, set, mu, g.identity(), sigma);
    EXPECT_LT(max_abs(id.shifted - sigma), 1e-15);
    for (Element x : centralizing_subgroup(g, set[mu])) {
      const auto act = c_mu_action(c, set, mu, x, sigma);
      EXPECT_LT(act.agreement, 1e-12);
      EXPECT_LT(act.output_equivariance, 1e-12);
      if (d == 1) EXPECT_LT(max_abs(act.shifted - set[mu].character(x) * sigma), 1e-12);
    }
  }
  const Matrix sigma4 = equivariant_extension(c, set[4], random_matrix(3, 2, rng));
  const auto minus = c_mu_action(c, set, 4, el(g, "-1"), sigma4);
  EXPECT_LT(max_abs(minus.shifted + sigma4), 1e-12);
  try {
    c_mu_action(c, set, 4, el(g, "i"), sigma4);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotInCMu);
  }
  try {
    c_mu_action(c, set, 4, g.identity(), random_matrix(24, 2, rng));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotEquivariant);
  }
}

TEST(Theorem, SectorStructureOnS3AndD8Star) {
  std::mt19937_64 rng(12);
  for (const auto& set : {fixtures::s3_set(), fixtures::d8star_set()}) {
    const DiscreteCover c(set.order() == 6 ? 5 : 3, set.group());
    const auto th = theorem_checks(c, set, adapted_basis(set), rng);
    for (std::size_t mu = 0; mu < set.count(); ++mu) {
      for (std::size_t d : th.image_commutant_dims[mu]) EXPECT_EQ(d, 1u);
      EXPECT_EQ(th.right_action_leakage[mu] < 1e-10, set[mu].dim() == 1) << mu;
    }
    EXPECT_LT(th.reduction_mismatch, 1e-8);
    EXPECT_LT(th.centralizer_leakage, 1e-10);
  }
}

TEST(TimeReversal, ConjugationMapsToPartnerSector) {
  std::mt19937_64 rng(13);
  for (const auto& set : {fixtures::cyclic_set(3), fixtures::s3_set(), fixtures::q8_set(), fixtures::d8star_set()}) {
    const DiscreteCover c(3, set.group());
    for (std::size_t mu = 0; mu < set.count(); ++mu) {
      const auto tr = time_reversal(c, set, mu, random_unit_vector(static_cast<Eigen::Index>(set[mu].dim()), rng));
      EXPECT_LT(tr.principal_angle_sine, 1e-8);
      EXPECT_EQ(tr.partner, conjugate_partner(set, mu).partner);
    }
  }
  const auto z3 = fixtures::cyclic_set(3);
  const DiscreteCover c(2, z3.group());
  EXPECT_EQ(time_reversal(c, z3, 1, unit_vector(1, 0)).partner, 2u);
  // Conjugating T^1 does not land in T^1 itself.
  const Matrix src = column_span(sector_projector(c, z3, 1, unit_vector(1, 0))).conjugate();
  EXPECT_GT(max_principal_angle_sine(src, column_span(sector_projector(c, z3, 1, unit_vector(1, 0)))), 0.5);
}
