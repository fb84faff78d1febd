#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bdlab/error.hpp"
#include "bdlab/expression.hpp"
#include "bdlab/integrand.hpp"
#include "bdlab/quasiconvexity.hpp"
#include "fixtures.hpp"

using namespace bdlab;

namespace {
const Vec kOrigin{0.0, 0.0};
}

TEST(Catalog, Values) {
  const SymMatrix A = SymMatrix::from_rows({{3.0, 0.0}, {0.0, -4.0}});
  EXPECT_DOUBLE_EQ(catalog::norm()(kOrigin, A), 5.0);
  EXPECT_DOUBLE_EQ(catalog::neg_norm()(kOrigin, A), -5.0);
  EXPECT_DOUBLE_EQ(catalog::area()(kOrigin, A), std::sqrt(26.0));
  EXPECT_DOUBLE_EQ(catalog::quadratic()(kOrigin, A), 25.0);
  EXPECT_DOUBLE_EQ(catalog::linear(SymMatrix::identity(2))(kOrigin, A), -1.0);
  EXPECT_DOUBLE_EQ(catalog::shifted_norm(A)(kOrigin, A), 0.0);
  const SymMatrix P = test::e12();
  // 2|0| - |P| - |-P|
  EXPECT_NEAR(catalog::kinked_dyad(P)(kOrigin, SymMatrix::zero(2)), -2.0 / std::sqrt(2.0), 1e-15);
}

TEST(Catalog, GrowthSample) {
  EXPECT_TRUE(catalog::norm().growth_ok);
  EXPECT_NEAR(catalog::norm().growth_M, 1.0, 1e-6);
  EXPECT_TRUE(catalog::area().growth_ok);
  EXPECT_TRUE(catalog::kinked_dyad(test::e12()).growth_ok);
  EXPECT_FALSE(catalog::quadratic().growth_ok);
}

TEST(Catalog, AnalyticGradientMatchesDifferences) {
  std::mt19937_64 rng(2);
  for (const Integrand& f : {catalog::norm(), catalog::area(), catalog::kinked_dyad(test::e12())}) {
    for (int trial = 0; trial < 20; ++trial) {
      const SymMatrix A = test::random_sym(rng);
      const SymMatrix g = f.gradient(kOrigin, A);
      const SymMatrix fd = fd_gradient(f.eval, kOrigin, A, 1e-6);
      for (std::size_t k = 0; k < g.packed_size(); ++k) EXPECT_NEAR(g.packed()[k], fd.packed()[k], 1e-6);
    }
  }
}

TEST(Recession, ClosedForms) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const SymMatrix A = test::random_sym(rng);
    EXPECT_NEAR(recession_value(catalog::norm(), kOrigin, A), A.norm(), 1e-6 * (1 + A.norm()));
    EXPECT_NEAR(recession_value(catalog::area(), kOrigin, A), A.norm(), 1e-6 * (1 + A.norm()));
    EXPECT_NEAR(recession_value(catalog::neg_norm(), kOrigin, A), -A.norm(), 1e-6 * (1 + A.norm()));
    const SymMatrix A0 = test::random_sym(rng);
    EXPECT_NEAR(recession_value(catalog::shifted_norm(A0), kOrigin, A), A.norm(), 1e-5 * (1 + A.norm()));
    const SymMatrix B = test::random_sym(rng);
    EXPECT_NEAR(recession_value(catalog::linear(B), kOrigin, A), frobenius_inner(A, B), 1e-9 * (1 + A.norm()));
    EXPECT_NEAR(recession_value(catalog::kinked_dyad(test::e12()), kOrigin, A), 0.0, 1e-6 * (1 + A.norm()));
  }
}

TEST(Recession, SharpAboveStrongAboveFlat) {
  std::mt19937_64 rng(8);
  for (const Integrand& f : {catalog::norm(), catalog::area(), catalog::kinked_dyad(test::e12())}) {
    for (int trial = 0; trial < 5; ++trial) {
      const SymMatrix A = test::random_sym(rng);
      const double s = recession(f, kOrigin, A, RecessionMode::Strong).value;
      EXPECT_GE(recession(f, kOrigin, A, RecessionMode::UpperSharp).value, s - 1e-9);
      EXPECT_LE(recession(f, kOrigin, A, RecessionMode::LowerFlat).value, s + 1e-9);
    }
  }
}

TEST(Recession, PositivelyOneHomogeneous) {
  const Integrand f = catalog::area();
  const SymMatrix A = SymMatrix::from_rows({{1.0, 2.0}, {2.0, 0.5}});
  EXPECT_NEAR(recession_value(f, kOrigin, 3.0 * A), 3.0 * recession_value(f, kOrigin, A), 1e-5);
}

TEST(Recession, SuperlinearThrows) {
  EXPECT_THROW(recession_value(catalog::quadratic(), kOrigin, SymMatrix::identity(2)), RecessionError);
}

TEST(TransformS, BoundedForLinearGrowth) {
  const SymMatrix Ahat = 0.6 * SymMatrix::identity(2) / std::sqrt(2.0);
  EXPECT_NEAR(transform_S(catalog::norm(), kOrigin, Ahat), 0.6, 1e-14);
  // (1 - s) sqrt(1 + s^2 / (1 - s)^2) = sqrt((1 - s)^2 + s^2)
  EXPECT_NEAR(transform_S(catalog::area(), kOrigin, Ahat), std::sqrt(0.16 + 0.36), 1e-14);
}

TEST(Expression, MatchesCatalog) {
  std::mt19937_64 rng(6);
  const Integrand parsed = parse_integrand("sqrt(1 + normsq(A))");
  const Integrand kinked = parse_integrand("2*norm(A) - norm(A + [[0,0.5],[0.5,0]]) - norm(A - [[0,0.5],[0.5,0]])");
  for (int trial = 0; trial < 20; ++trial) {
    const SymMatrix A = test::random_sym(rng);
    EXPECT_NEAR(parsed(kOrigin, A), catalog::area()(kOrigin, A), 1e-14);
    EXPECT_NEAR(kinked(kOrigin, A), catalog::kinked_dyad(test::e12())(kOrigin, A), 1e-14);
  }
}

TEST(Expression, Operators) {
  const SymMatrix A = SymMatrix::from_rows({{1.0, 2.0}, {2.0, 3.0}});
  const Vec x{0.5, 2.0};
  auto ev = [&](const char* s) { return Expression::parse(s).eval(x, A); };
  EXPECT_DOUBLE_EQ(ev("tr(A)"), 4.0);
  EXPECT_DOUBLE_EQ(ev("dot(A, [[1,0],[0,0]])"), 1.0);
  EXPECT_DOUBLE_EQ(ev("x[1] * x[2]^2"), 2.0);
  EXPECT_DOUBLE_EQ(ev("2^-1"), 0.5);
  EXPECT_DOUBLE_EQ(ev("-2^2"), -4.0);
  EXPECT_DOUBLE_EQ(ev("2*-3"), -6.0);
  EXPECT_DOUBLE_EQ(ev("min(1, 2) + max(3, abs(-4))"), 5.0);
  EXPECT_NEAR(ev("sin(pi/2) + log(e)"), 2.0, 1e-15);
  EXPECT_DOUBLE_EQ(ev("norm(2*A - A)"), A.norm());
  EXPECT_DOUBLE_EQ(ev("8 / 4 / 2"), 1.0);
  EXPECT_DOUBLE_EQ(ev("1 - 2 - 3"), -4.0);
}

TEST(Expression, ToStringRoundTrips) {
  for (const char* s : {"sqrt(1 + normsq(A))", "x[1]*norm(A - [[1,0],[0,0.1]]) + 0.3", "-tr(A)^2 / 7"}) {
    const Expression e = Expression::parse(s);
    EXPECT_EQ(Expression::parse(e.to_string()).to_string(), e.to_string());
  }
}

TEST(Expression, Metadata) {
  const Expression e = Expression::parse("x[2] * norm(A - [[1,0],[0,1]])");
  EXPECT_TRUE(e.uses_matrix());
  EXPECT_EQ(e.max_x_index(), 2);
  EXPECT_EQ(e.literal_dim(), 2);
  EXPECT_TRUE(parse_integrand("x[1] * norm(A)").x_dependent);
  EXPECT_FALSE(parse_integrand("norm(A)").x_dependent);
}

TEST(Expression, Errors) {
  EXPECT_THROW(Expression::parse("norm(A"), ParseError);
  EXPECT_THROW(Expression::parse("1 +"), ParseError);
  EXPECT_THROW(Expression::parse("foo(A)"), ParseError);
  EXPECT_THROW(parse_integrand("A"), InputError);
  EXPECT_THROW(parse_integrand("norm(A + [[1,0,0],[0,1,0],[0,0,1]])", 2), InputError);
  EXPECT_THROW(parse_integrand("x[3] * norm(A)", 2), InputError);
  EXPECT_THROW(parse_scalar_function("norm(A)", 1), InputError);
  try {
    Expression::parse("1 + $");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 4u);
  }
}

TEST(ScalarFunction, Evaluates) {
  const auto f = parse_scalar_function("exp(x[1]) * sin(x[2])", 2);
  const Vec x{0.3, 1.1};
  EXPECT_NEAR(f(x), std::exp(0.3) * std::sin(1.1), 1e-15);
}

TEST(Quasiconvexity, SawtoothShape) {
  EXPECT_DOUBLE_EQ(sawtooth(0.0), 0.0);
  EXPECT_DOUBLE_EQ(sawtooth(0.5), 0.5);
  EXPECT_DOUBLE_EQ(sawtooth(1.0), 0.0);
  EXPECT_DOUBLE_EQ(sawtooth(0.25), 0.25);
  EXPECT_DOUBLE_EQ(sawtooth(-0.25), 0.25);
  EXPECT_DOUBLE_EQ(sawtooth(3.75), 0.25);
}

TEST(Quasiconvexity, LaminateFieldPinned) {
  const Grid cell = Grid::cube(2, 0.0, 1.0, 17);
  const auto psi = laminate_field(cell, Vec{1.0, 0.0}, Vec{0.0, 1.0}, 0.5, 2);
  for (std::size_t n = 0; n < cell.node_count(); ++n) {
    const auto idx = cell.node_multi_index(n);
    const bool bdry = idx[0] == 0 || idx[1] == 0 || idx[0] == 16 || idx[1] == 16;
    if (bdry) EXPECT_EQ(psi.at(n)[1], 0.0);
    EXPECT_EQ(psi.at(n)[0], 0.0);
  }
}

TEST(Quasiconvexity, NegNormViolatesAtZero) {
  const CellProblemResult r =
      cell_problem_min(catalog::neg_norm(), SymMatrix::zero(2), Grid::cube(2, 0.0, 1.0, 17));
  EXPECT_TRUE(r.violation);
  EXPECT_LE(r.min_mean, -0.5 * test::e12().norm());
  EXPECT_LE(r.min_mean, r.h_at_A);
}

TEST(Quasiconvexity, ConvexIntegrandsHaveNoViolation) {
  std::mt19937_64 rng(13);
  const Grid cell = Grid::cube(2, 0.0, 1.0, 9);
  CellProblemOptions opts;
  opts.iters = 60;
  for (const Integrand& h : {catalog::norm(), catalog::area()}) {
    const SymMatrix A = test::random_sym(rng);
    const CellProblemResult r = cell_problem_min(h, A, cell, opts);
    EXPECT_FALSE(r.violation);
    EXPECT_LE(r.min_mean, r.h_at_A + 1e-15);
  }
}

TEST(Quasiconvexity, ThreadCountDoesNotChangeResult) {
  const Grid cell = Grid::cube(2, 0.0, 1.0, 9);
  CellProblemOptions a, b;
  a.iters = b.iters = 40;
  b.threads = 4;
  const SymMatrix A = SymMatrix::from_rows({{0.2, 0.1}, {0.1, -0.3}});
  const auto ra = cell_problem_min(catalog::neg_norm(), A, cell, a);
  const auto rb = cell_problem_min(catalog::neg_norm(), A, cell, b);
  EXPECT_EQ(ra.min_mean, rb.min_mean);
  EXPECT_EQ(ra.best_start, rb.best_start);
}

TEST(Quasiconvexity, DyadSegmentScanFindsKink) {
  const SymMatrix P = test::e12();
  const std::vector<SymMatrix> As{0.5 * P};
  const std::vector<std::pair<Vec, Vec>> dyads{{Vec{1.0, 0.0}, Vec{0.0, 1.0}}};
  const std::vector<double> thetas{0.5};
  const auto v = dyad_segment_scan(catalog::kinked_dyad(P), As, dyads, thetas);
  ASSERT_EQ(v.size(), 1u);
  // h(P/2) = -|P|, h(P) = h(3P/2) = 0.
  EXPECT_NEAR(v[0].gap, 0.5 * P.norm(), 1e-12);
  EXPECT_TRUE(dyad_segment_scan(catalog::norm(), As, dyads, thetas).empty());
}
