#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bdlab/error.hpp"
#include "bdlab/fields.hpp"
#include "bdlab/measure.hpp"
#include "fixtures.hpp"

using namespace bdlab;

namespace {

DisplacementField rigid_field(const Grid& g, const Vec& u0, double w) {
  return sample_field(g, [&](std::span<const double> x) { return Vec{u0[0] - w * x[1], u0[1] + w * x[0]}; });
}

double max_error_smooth(int n) {
  const Grid g = Grid::cube(2, 0.0, 1.0, n);
  const auto u = sample_field(
      g, [](std::span<const double> x) { return Vec{std::sin(x[0]) * std::cos(x[1]), x[0] * x[0] * x[1]}; });
  const CellGradient e = sym_gradient(u);
  double err = 0.0;
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    const Vec x = g.cell_center(c);
    const double e11 = std::cos(x[0]) * std::cos(x[1]);
    const double e22 = x[0] * x[0];
    const double e12 = 0.5 * (-std::sin(x[0]) * std::sin(x[1]) + 2 * x[0] * x[1]);
    err = std::max({err, std::abs(e.sym[c](0, 0) - e11), std::abs(e.sym[c](1, 1) - e22),
                    std::abs(e.sym[c](0, 1) - e12)});
  }
  return err;
}

}  // namespace

TEST(SymGradient, ExactForAffineFields) {
  const Grid g(Vec{-1.0, 0.0}, Vec{2.0, 1.0}, {7, 5});
  const auto u = sample_field(g, [](std::span<const double> x) {
    return Vec{1.0 + 2.0 * x[0] - 3.0 * x[1], -0.5 + 4.0 * x[0] + 0.25 * x[1]};
  });
  const CellGradient e = sym_gradient(u);
  for (const auto& m : e.sym) {
    EXPECT_NEAR(m(0, 0), 2.0, 1e-13);
    EXPECT_NEAR(m(1, 1), 0.25, 1e-13);
    EXPECT_NEAR(m(0, 1), 0.5, 1e-13);
  }
  EXPECT_EQ(e.cut_count(), 0u);
}

TEST(SymGradient, SecondOrderForSmoothFields) {
  const double e1 = max_error_smooth(17), e2 = max_error_smooth(33), e3 = max_error_smooth(65);
  EXPECT_GT(test::observed_order(e1, e2), 1.9);
  EXPECT_GT(test::observed_order(e2, e3), 1.9);
}

TEST(SymGradient, ThreeDimensionalAffine) {
  const Grid g = Grid::cube(3, 0.0, 1.0, 4);
  const auto u = sample_field(g, [](std::span<const double> x) { return Vec{x[1], x[2], x[0]}; });
  for (const auto& m : sym_gradient(u).sym) {
    EXPECT_NEAR(m(0, 1), 0.5, 1e-13);
    EXPECT_NEAR(m(1, 2), 0.5, 1e-13);
    EXPECT_NEAR(m(0, 2), 0.5, 1e-13);
    EXPECT_NEAR(m(0, 0), 0.0, 1e-13);
  }
}

TEST(SymGradient, JumpIsRemovedOnCutCells) {
  const Grid g = Grid::cube(2, 0.0, 1.0, 21);
  std::vector<JumpInterface> j2{JumpInterface::polyline({{0.37, 0.0}, {0.37, 1.0}}, {2.0, -1.0})};
  const double sign = j2[0].pieces[0].normal[0];
  const auto u = sample_field(
      g,
      [&](std::span<const double> x) {
        const double h = sign * (x[0] - 0.37) > 0 ? 1.0 : 0.0;
        return Vec{x[0] + 2.0 * h, -x[1] - h};
      },
      j2);
  const CellGradient e = sym_gradient(u);
  EXPECT_GT(e.cut_count(), 0u);
  for (const auto& m : e.sym) {
    EXPECT_NEAR(m(0, 0), 1.0, 1e-12);
    EXPECT_NEAR(m(1, 1), -1.0, 1e-12);
    EXPECT_NEAR(m(0, 1), 0.0, 1e-12);
  }
}

TEST(SymGradient, InterfaceOrientationSetsPlusSide) {
  const auto u = test::staircase(9);
  const Grid& g = u.grid();
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    const Vec x = g.node_position(n);
    EXPECT_EQ(u.on_plus_side(n, 0), x[1] > 1e-12);
    EXPECT_EQ(u.on_plus_side(n, 1), x[0] > 1e-12);
  }
}

TEST(RigidKernel, SymGradientVanishesAndFitRecovers) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> N;
  const Grid g = Grid::cube(2, 0.0, 1.0, 64);
  for (int trial = 0; trial < 5; ++trial) {
    const Vec u0{N(rng), N(rng)};
    const double w = N(rng);
    const auto u = rigid_field(g, u0, w);
    for (const auto& m : sym_gradient(u).sym) EXPECT_LT(m.norm(), 1e-12);
    const RigidFit fit = fit_rigid(u);
    EXPECT_NEAR(fit.u0[0], u0[0], 1e-10);
    EXPECT_NEAR(fit.u0[1], u0[1], 1e-10);
    EXPECT_NEAR(fit.R[1][0], w, 1e-10);
    EXPECT_NEAR(fit.R[0][1], -w, 1e-10);
    EXPECT_LT(fit.residual, 1e-10);
    const auto r = subtract_rigid(u, fit);
    for (double v : r.values()) EXPECT_NEAR(v, 0.0, 1e-10);
  }
}

TEST(WIdentity, DiscreteIdentityIsExact) {
  auto res = [](int n) {
    const Grid g = Grid::cube(2, 0.0, 1.0, n);
    return w_identity_residual(sample_field(g, [](std::span<const double> x) {
      return Vec{std::exp(x[0]) * std::sin(2 * x[1]), std::cos(x[0] * x[1])};
    }));
  };
  EXPECT_LT(res(17), 1e-10);
  EXPECT_LT(res(33), 1e-10);
}

TEST(DisplacementField, ValidatesSizes) {
  const Grid g = Grid::cube(2, 0.0, 1.0, 3);
  EXPECT_THROW(DisplacementField(g, std::vector<double>(5, 0.0)), InputError);
  EXPECT_THROW(DisplacementField(g, std::vector<double>(18, 0.0), {JumpInterface::polyline({{0.0, 0.5}, {1.0, 0.5}},
                                                                                          {1.0, 0.0, 0.0})}),
               InputError);
}

TEST(Measure, StaircaseAtoms) {
  const auto u = test::staircase(33);
  const SymMeasure mu = assemble_symmetrized_measure(u);
  EXPECT_NEAR(absolutely_continuous_mass(mu), 0.0, 1e-14);
  EXPECT_NEAR(singular_mass(mu), 2.0 * std::sqrt(2.0), 1e-12);
  for (const auto& atom : mu.surface) {
    EXPECT_NEAR(atom.amplitude(0, 1), 0.5, 1e-15);
    EXPECT_NEAR(atom.amplitude(0, 0), 0.0, 1e-15);
  }
  for (double r : {0.1, 0.3, 0.7}) {
    EXPECT_NEAR(mass_in_ball(mu, Vec{0.0, 0.0}, r), 4 * r / std::sqrt(2.0), 1e-12);
  }
  EXPECT_NEAR(mass_in_box(mu, Vec{0.0, 0.0}, Vec{1.0, 1.0}), 2.0 / std::sqrt(2.0), 1e-12);
}

TEST(Measure, PolarHasUnitNorm) {
  const SymMatrix p = polar(SymMatrix::from_rows({{3.0, 0.0}, {0.0, 4.0}}));
  EXPECT_NEAR(p.norm(), 1.0, 1e-15);
  EXPECT_NEAR(p(1, 1), 0.8, 1e-15);
}

TEST(Measure, DoublingRatiosForModelMeasures) {
  const Grid g = Grid::cube(2, -1.0, 1.0, 65);
  const std::vector<double> radii{0.2, 0.1, 0.05};
  const Vec x0{0.0, 0.0};
  const SymMatrix P = test::e12();
  const SymMeasure leb = SymMeasure::uniform(g, SymMatrix::identity(2));
  SymMeasure line = SymMeasure::zero(g);
  line.surface.push_back({make_piece({{-1.0, 0.0}, {1.0, 0.0}}), P, -1});
  SymMeasure dirac = SymMeasure::zero(g);
  dirac.points.push_back({x0, P});
  const double t = 3.0;
  for (double r : doubling_scan(leb, x0, t, radii).ratios) EXPECT_NEAR(r, t * t, 1e-12);
  for (double r : doubling_scan(line, x0, t, radii).ratios) EXPECT_NEAR(r, t, 1e-12);
  for (double r : doubling_scan(dirac, x0, t, radii).ratios) EXPECT_NEAR(r, 1.0, 1e-12);
}

TEST(Measure, BlowUpScalesMass) {
  const auto u = test::staircase(33);
  const SymMeasure mu = assemble_symmetrized_measure(u);
  const double r = 0.25, c = 1.0 / r;
  const BlowUp b = blow_up(mu, Vec{0.0, 0.0}, r, c);
  // Two unit-amplitude-1/sqrt2 crosses of length 2 each inside [-1, 1]^2.
  EXPECT_NEAR(mass_in_box(b.measure, Vec{-1.0, -1.0}, Vec{1.0, 1.0}), 2.0 * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(b.clipped_mass, total_variation(b.measure) - mass_in_box(b.measure, Vec{-1.0, -1.0}, Vec{1.0, 1.0}),
              1e-12);
}

TEST(Measure, SlicingIdentityWithJump) {
  const Grid g = Grid::cube(2, 0.0, 1.0, 41);
  const std::vector<JumpInterface> jumps{JumpInterface::polyline({{0.5, 0.0}, {0.5, 1.0}}, {1.0, 0.0})};
  const double s = jumps[0].pieces[0].normal[0];
  const auto u = sample_field(
      g, [&](std::span<const double> x) { return Vec{x[0] * x[0] + (s * (x[0] - 0.5) > 0 ? s : 0.0), x[1]}; },
      jumps);
  const SliceCheck sc = directional_slice_check(u, Vec{1.0, 0.0});
  EXPECT_NEAR(sc.lhs, sc.rhs, 1e-9);
  EXPECT_NEAR(sc.lhs, 2.0, 1e-3);
}
