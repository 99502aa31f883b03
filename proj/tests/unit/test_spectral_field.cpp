#include <gtest/gtest.h>

#include <random>

#include "nambu_em/errors.hpp"
#include "nambu_em/spectral_field.hpp"
#include "oracles.hpp"

using namespace nambu_em;
namespace t = nambu_em::testing;
using t::random_state;

namespace {

const Complex I(0.0, 1.0);

Mode make_mode(WaveVector k, ComplexVec3 e, ComplexVec3 b) {
  Mode m;
  m.k = k;
  m.e = e;
  m.b = b;
  return m;
}

// State whose recorded charge is c rather than k·E.
SpectralState with_charge(std::vector<Mode> modes, std::vector<Complex> c) {
  return SpectralState(std::move(modes), std::move(c));
}

}  // namespace

TEST(Validate, TransverseSingleModeIsClean) {
  const auto s = with_charge({make_mode({{0, 0, 1}}, {{1.0, 0.0, 0.0}}, {{0.0, 1.0, 0.0}})}, {0.0});
  EXPECT_TRUE(validate(s, 1e-12).ok());
}

TEST(Validate, ReportsGaussEViolation) {
  const auto s = with_charge({make_mode({{0, 0, 1}}, {{0.0, 0.0, 1.0}}, {})}, {0.0});
  const auto r = validate(s, 1e-12);
  ASSERT_EQ(r.violations.size(), 1u);
  const Violation* v = r.find(ConstraintKind::gauss_e);
  ASSERT_NE(v, nullptr);
  EXPECT_DOUBLE_EQ(v->magnitude, 1.0);
  EXPECT_EQ(v->mode_index, 0u);
}

TEST(Validate, ReportsGaussBViolation) {
  const auto s = with_charge({make_mode({{0, 0, 1}}, {}, {{0.0, 0.0, 2.0}})}, {0.0});
  const auto r = validate(s, 1e-12);
  const Violation* v = r.find(ConstraintKind::gauss_b);
  ASSERT_NE(v, nullptr);
  EXPECT_DOUBLE_EQ(v->magnitude, 2.0);
  EXPECT_EQ(r.find(ConstraintKind::gauss_e), nullptr);
}

TEST(Validate, ReportsWorstOffenderPerClass) {
  const auto s = with_charge({make_mode({{0, 0, 1}}, {}, {{0.0, 0.0, 0.5}}),
                              make_mode({{1, 0, 0}}, {}, {{3.0, 0.0, 0.0}})},
                             {0.0, 0.0});
  const auto report = validate(s, 1e-12);
  const Violation* v = report.find(ConstraintKind::gauss_b);
  ASSERT_NE(v, nullptr);
  EXPECT_EQ(v->mode_index, 1u);
  EXPECT_DOUBLE_EQ(v->magnitude, 3.0);
}

TEST(Validate, RejectsNonPositiveTolerance) {
  EXPECT_THROW(validate(SpectralState{}, 0.0), InvalidArgument);
  EXPECT_THROW(validate(SpectralState{}, -1.0), InvalidArgument);
}

TEST(Validate, EmptyStateIsValid) {
  const SpectralState s;
  EXPECT_TRUE(validate(s).ok());
  EXPECT_TRUE(s.empty());
}

TEST(Validate, NonFiniteAmplitudesAreReported) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const auto s = with_charge({make_mode({{0, 0, 1}}, {}, {{0.0, 0.0, nan}})}, {0.0});
  EXPECT_FALSE(validate(s).ok());
}

TEST(Validate, DetectsBrokenHermitianSymmetry) {
  std::mt19937_64 rng(5);
  SpectralState s = t::random_paired_state(rng, 3);
  EXPECT_TRUE(validate(s, 1e-13).ok());
  auto e = std::vector<ComplexVec3>();
  auto b = std::vector<ComplexVec3>();
  for (const auto& m : s.modes()) {
    e.push_back(m.e);
    b.push_back(m.b);
  }
  // Perturb mode 1 transversally so only the pairing breaks.
  const WaveVector k = s.mode(1).k;
  const ComplexVec3 t = t::transverse_part(k, {{0.3 * I, 0.1, 0.2}});
  b[1] = b[1] + t;
  const SpectralState broken = s.with_fields(e, b);
  const auto r = validate(broken, 1e-12);
  const Violation* v = r.find(ConstraintKind::hermitian);
  ASSERT_NE(v, nullptr);
  EXPECT_NEAR(v->magnitude, t.norm(), 1e-12);
}

TEST(Ingest, RecordsChargeFromLongitudinalField) {
  const auto s = SpectralState::ingest({make_mode({{0, 0, 2}}, {{1.0, 0.0, 3.0 * I}}, {})});
  EXPECT_EQ(s.charge()[0], 6.0 * I);
}

TEST(Ingest, RejectsNonPositiveWeight) {
  Mode m = make_mode({{1, 0, 0}}, {}, {});
  m.weight = 0.0;
  EXPECT_THROW(SpectralState::ingest({m}), InvalidState);
}

TEST(Ingest, RejectsInconsistentPartner) {
  Mode a = make_mode({{1, 0, 0}}, {}, {});
  Mode b = make_mode({{0, 1, 0}}, {}, {});
  a.hermitian_partner = 1;
  b.hermitian_partner = 0;
  EXPECT_THROW(SpectralState::ingest({a, b}), InvalidState);
  b.k = {{-1, 0, 0}};
  EXPECT_NO_THROW(SpectralState::ingest({a, b}));
  b.hermitian_partner = std::nullopt;
  EXPECT_THROW(SpectralState::ingest({a, b}), InvalidState);
}

TEST(HermitianPair, SpecExamplesOnFourByOneByOne) {
  const GridDescriptor g{{4, 1, 1}, {1.0, 1.0, 1.0}};
  EXPECT_EQ(hermitian_pair_index(g, 1), 3u);
  EXPECT_EQ(hermitian_pair_index(g, 0), 0u);
  EXPECT_EQ(hermitian_pair_index(g, 2), 2u);
}

TEST(HermitianPair, InvolutionOnSeveralGrids) {
  for (const auto dims : {std::array{4, 4, 4}, std::array{5, 3, 2}, std::array{8, 1, 6},
                          std::array{1, 1, 1}, std::array{7, 7, 7}}) {
    const GridDescriptor g{dims, {1.0, 2.0, 3.0}};
    for (std::size_t j = 0; j < g.size(); ++j) {
      const std::size_t p = hermitian_pair_index(g, j);
      ASSERT_LT(p, g.size());
      ASSERT_EQ(hermitian_pair_index(g, p), j);
      // Wave vectors negate except across Nyquist planes.
      if (!g.is_nyquist(j)) {
        const WaveVector k = g.wave_vector(j);
        const WaveVector q = g.wave_vector(p);
        for (int a = 0; a < 3; ++a) ASSERT_EQ(q[a], -k[a]);
      }
    }
  }
}

TEST(HermitianPair, ExplicitListWithoutPairingThrows) {
  const auto s = SpectralState::ingest({make_mode({{1, 0, 0}}, {}, {})});
  EXPECT_THROW(hermitian_pair_index(s, 0), NoHermitianPairing);
}

TEST(Grid, SignedIndicesAndWaveVectors) {
  const GridDescriptor g{{4, 1, 1}, {2.0, 1.0, 1.0}};
  EXPECT_EQ(g.signed_index(0, 1), 1);
  EXPECT_EQ(g.signed_index(0, 2), 2);
  EXPECT_EQ(g.signed_index(0, 3), -1);
  EXPECT_DOUBLE_EQ(g.wave_vector(3)[0], -std::numbers::pi);
  EXPECT_TRUE(g.is_nyquist(2));
  EXPECT_FALSE(g.is_nyquist(1));
}

TEST(Project, DropsLongitudinalMagneticField) {
  const auto s = with_charge({make_mode({{0, 0, 1}}, {}, {{0.0, 1.0, 0.5}})}, {0.0});
  const auto p = project_constraints(s);
  EXPECT_EQ(p.mode(0).b[0], Complex(0.0));
  EXPECT_EQ(p.mode(0).b[1], Complex(1.0));
  EXPECT_EQ(p.mode(0).b[2], Complex(0.0));
}

TEST(Project, RestoresRecordedCharge) {
  // E_par = c k / |k|^2 = (0, 0, 2), so that k·E = 4 = c.
  const auto s = with_charge({make_mode({{0, 0, 2}}, {{1.0, 0.0, 0.0}}, {})}, {4.0});
  const auto p = project_constraints(s);
  EXPECT_EQ(p.mode(0).e[0], Complex(1.0));
  EXPECT_EQ(p.mode(0).e[1], Complex(0.0));
  EXPECT_EQ(p.mode(0).e[2], Complex(2.0));
  EXPECT_TRUE(validate(p, 1e-15).ok());
  EXPECT_EQ(p.charge()[0], Complex(4.0));
}

TEST(Project, ZeroModeWithChargeIsUnsatisfiable) {
  const auto s = with_charge({make_mode({{0, 0, 0}}, {{1.0, 0.0, 0.0}}, {})}, {1.0});
  EXPECT_THROW(project_constraints(s), ConstraintError);
  const auto ok = with_charge({make_mode({{0, 0, 0}}, {{1.0, 2.0, 0.0}}, {{0.0, 0.0, 3.0}})}, {0.0});
  const auto p = project_constraints(ok);
  EXPECT_EQ(p.mode(0).e[1], Complex(2.0));
  EXPECT_EQ(p.mode(0).b[2], Complex(3.0));
}

TEST(Project, ValidStateIsUnchanged) {
  std::mt19937_64 rng(11);
  const auto s = random_state(rng, 16);
  const auto p = project_constraints(s);
  EXPECT_LE(t::max_abs_diff(s, p), 1e-15 * t::max_abs_component(s));
}

TEST(ProjectProperty, IdempotentAndValidOnRandomStates) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Mode> modes;
    std::vector<Complex> charge;
    for (int j = 0; j < 8; ++j) {
      modes.push_back(make_mode(t::random_k(rng), t::normal_vec(rng), t::normal_vec(rng)));
      charge.push_back({n(rng), n(rng)});
    }
    const SpectralState s(modes, charge);
    const auto once = project_constraints(s);
    const auto twice = project_constraints(once);
    ASSERT_LE(t::max_abs_diff(once, twice), 1e-15 * t::max_abs_component(once) * 4)
        << "trial " << trial;
    ASSERT_TRUE(validate(once, 1e-13).ok()) << "trial " << trial;
  }
}

TEST(SelectModes, RemapsPartnersAndRequiresClosure) {
  const GridDescriptor g{{4, 4, 4}, {1.0, 1.0, 1.0}};
  std::vector<Mode> modes(g.size());
  const auto s = SpectralState::ingest(g, modes);
  const auto low = select_modes(s, [&](std::size_t j) {
    const auto idx = g.signed_indices(j);
    return !g.is_nyquist(j) && std::abs(idx[0]) + std::abs(idx[1]) + std::abs(idx[2]) <= 1;
  });
  EXPECT_EQ(low.size(), 7u);
  EXPECT_FALSE(low.grid().has_value());
  for (std::size_t j = 0; j < low.size(); ++j) {
    const std::size_t p = hermitian_pair_index(low, j);
    for (int a = 0; a < 3; ++a) EXPECT_EQ(low.mode(p).k[a], -low.mode(j).k[a]);
  }
  EXPECT_THROW(select_modes(s, [](std::size_t j) { return j == 1; }), InvalidArgument);
}

TEST(SpectralState, MaxWavenumberAndEnergyNorm) {
  const auto s = SpectralState::ingest({make_mode({{0, 3, 4}}, {{1.0, 0.0, 0.0}}, {}),
                                        make_mode({{1, 0, 0}}, {}, {{0.0, I, 0.0}})});
  EXPECT_DOUBLE_EQ(s.max_wavenumber(), 5.0);
  EXPECT_DOUBLE_EQ(s.energy_norm(), 2.0);
  EXPECT_TRUE(s.is_finite());
}
