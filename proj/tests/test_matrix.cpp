#include <gtest/gtest.h>

#include "geoeig.hpp"
#include "support/fixtures.hpp"
#include "support/naive.hpp"

using namespace geoeig;
using fixtures::dense_to_geo;

namespace {

GeoMatrix random_local(const graph_ptr& g, std::size_t w, std::uint64_t seed, bool herm = false) {
  auto rng = make_rng(seed);
  return random::local_matrix(g, w, rng, herm);
}

}  // namespace

TEST(GeoMatrix, WidthExamples) {
  const auto g = fixtures::path(5);
  EXPECT_EQ(identity(g).width(), 0u);
  EXPECT_EQ(adjacency_matrix(g).width(), 1u);
  EXPECT_EQ(zero_matrix(g).width(), 0u);
  const GeoMatrix h = spline_filter(g, 2);
  EXPECT_EQ(h.width(), 2u);
  EXPECT_EQ(h.width(), naive::width(naive::from(h), *g));
}

TEST(GeoMatrix, WidthMatchesNaive) {
  const auto g = fixtures::rgg(40, 3);
  for (std::size_t w = 0; w <= 3; ++w) {
    const auto a = random_local(g, w, 10 + w);
    EXPECT_EQ(a.width(), naive::width(naive::from(a), *g));
    EXPECT_EQ(a.width(), w);
  }
}

TEST(GeoMatrix, BuilderMergesAndDropsZeros) {
  const auto g = fixtures::path(3);
  GeoMatrix::Builder b(g);
  b.add(0, 1, 2.0).add(0, 1, -2.0).add(1, 1, 1.0).add(2, 2, 0.5).add(2, 2, 0.5);
  const auto a = std::move(b).freeze();
  EXPECT_EQ(a.nnz(), 2u);
  EXPECT_EQ(a.width(), 0u);
  EXPECT_EQ(a.at(2, 2), cplx(1.0));
  EXPECT_EQ(a.at(0, 1), cplx(0.0));
}

TEST(GeoMatrix, BuilderRejectsBadInput) {
  const auto g = fixtures::path(3);
  GeoMatrix::Builder b(g);
  EXPECT_THROW(b.add(0, 3, 1.0), invalid_vertex);
  EXPECT_THROW(b.add(0, 1, cplx(NAN, 0.0)), invalid_input);
  EXPECT_THROW(b.add(0, 1, cplx(0.0, INFINITY)), invalid_input);
}

TEST(GeoMatrix, RowAndColumnViewsAgree) {
  const auto g = fixtures::rgg(30, 8);
  const auto a = random_local(g, 2, 5);
  std::size_t total = 0;
  for (vertex i = 0; i < a.size(); ++i) {
    for (const auto& e : a.row(i)) EXPECT_EQ(a.at(i, e.index), e.value);
    for (const auto& e : a.col(i)) EXPECT_EQ(a.at(e.index, i), e.value);
    total += a.col(i).size();
    EXPECT_TRUE(std::is_sorted(a.row(i).begin(), a.row(i).end(),
                               [](const Entry& x, const Entry& y) { return x.index < y.index; }));
  }
  EXPECT_EQ(total, a.nnz());
}

TEST(GeoMatrix, Matvec) {
  const auto g = fixtures::complete(2);
  EXPECT_EQ(matvec(adjacency_matrix(g), cvec{1.0, 0.0}), (cvec{0.0, 1.0}));
  const cvec x{cplx(1, 2), cplx(3, -1)};
  EXPECT_EQ(matvec(identity(g), x), x);
  EXPECT_EQ(matvec(zero_matrix(g), x), (cvec{0.0, 0.0}));
  EXPECT_THROW(matvec(identity(g), cvec{1.0}), dimension_mismatch);

  const auto g2 = fixtures::rgg(25, 2);
  const auto a = random_local(g2, 2, 4);
  const cvec y = fixtures::unit_vector(25, 3);
  EXPECT_LT(fixtures::max_diff(matvec(a, y), naive::apply(naive::from(a), y)), 1e-14);
}

TEST(GeoMatrix, HermitianTranspose) {
  const auto g = fixtures::path(2);
  const auto d = dense_to_geo(g, {{cplx(0, 1), 0.0}, {0.0, cplx(0, 1)}});
  EXPECT_EQ(hermitian_transpose(d).at(0, 0), cplx(0, -1));
  EXPECT_EQ(hermitian_transpose(d).at(1, 1), cplx(0, -1));
  const auto sym = adjacency_matrix(fixtures::rgg(20, 1));
  EXPECT_EQ(max_abs_diff(hermitian_transpose(sym), sym), 0.0);
  const auto a = random_local(fixtures::rgg(20, 6), 2, 9);
  EXPECT_EQ(max_abs_diff(hermitian_transpose(hermitian_transpose(a)), a), 0.0);
  EXPECT_EQ(hermitian_transpose(a).width(), a.width());
}

TEST(GeoMatrix, MultiplyAndCombineMatchDense) {
  const auto g = fixtures::rgg(20, 12);
  const auto a = random_local(g, 1, 1), b = random_local(g, 2, 2);
  const auto prod = naive::mul(naive::from(a), naive::from(b));
  EXPECT_LT(naive::max_abs(naive::add(naive::from(a * b), prod, -1.0)), 1e-14);
  const auto sum = naive::add(naive::from(a), naive::from(b), cplx(0, 2));
  EXPECT_LT(naive::max_abs(naive::add(naive::from(combine(1.0, a, cplx(0, 2), b)), sum, -1.0)), 1e-15);
  EXPECT_EQ(max_abs_diff(power(a, 3), a * a * a), 0.0);
  EXPECT_THROW(multiply(a, identity(fixtures::rgg(20, 13))), dimension_mismatch);
}

TEST(Diagonal, Validation) {
  EXPECT_THROW(DiagonalMatrix({1.0, -1.0}), invalid_preconditioner);
  EXPECT_THROW(DiagonalMatrix({NAN}), invalid_preconditioner);
  const DiagonalMatrix z({0.0, 1.0});
  EXPECT_FALSE(z.nonsingular());
  EXPECT_THROW(z.require_nonsingular(2), invalid_preconditioner);
  EXPECT_THROW(DiagonalMatrix({1.0}).require_nonsingular(2), dimension_mismatch);
}

TEST(Preconditioners, IdentityAndDiagonal) {
  const auto g = fixtures::path(4);
  const auto p = preconditioner_P(identity(g));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(p[i], 1.0);
  const cvec d{2.0, cplx(0, -3), 0.5, -1.0};
  const auto pd = preconditioner_P(diagonal(g, d));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(pd[i], std::abs(d[i]));
  EXPECT_EQ(schur_norm(identity(g)), 1.0);
}

TEST(Preconditioners, PathAdjacency) {
  const auto a = adjacency_matrix(fixtures::path(3));
  EXPECT_EQ(preconditioner_P(a), DiagonalMatrix({2.0, 2.0, 2.0}));
  EXPECT_EQ(schur_norm(a), 2.0);
  EXPECT_DOUBLE_EQ(schur_norm(scale(cplx(0, -3), a)), 6.0);
}

TEST(Preconditioners, QcExamples) {
  const auto g = fixtures::path(3);
  EXPECT_EQ(make_Qc(identity(g), 0.01), DiagonalMatrix::constant(3, 1.0));
  EXPECT_EQ(make_Qc(zero_matrix(g), 0.01), DiagonalMatrix::constant(3, 0.01));
  EXPECT_EQ(make_Qc_sym(identity(g), 0.01), DiagonalMatrix::constant(3, 1.0));
  EXPECT_EQ(make_Qc_sym(zero_matrix(g), 0.01), DiagonalMatrix::constant(3, 0.01));
  EXPECT_EQ(make_Qc_sym(normalized_laplacian(fixtures::complete(2)), 0.01), DiagonalMatrix({2.0, 2.0}));
  EXPECT_THROW(make_Qc(identity(g), 0.0), invalid_parameter);
  EXPECT_THROW(make_Qc_sym(identity(g), -1.0), invalid_parameter);
  const auto a = random_local(fixtures::rgg(30, 2), 2, 3);
  EXPECT_EQ(make_Qc(a, schur_norm(a)), DiagonalMatrix::constant(30, schur_norm(a)));
}

TEST(Preconditioners, MatchesNaiveFormula) {
  const auto g = fixtures::rgg(30, 21);
  const auto hops = naive::all_hops(*g);
  for (std::size_t w : {0u, 1u, 2u}) {
    const auto a = random_local(g, w, 40 + w);
    const auto d = naive::from(a);
    const auto p = preconditioner_P(a);
    for (vertex i = 0; i < 30; ++i) {
      double expect = 0.0;
      for (vertex k = 0; k < 30; ++k) {
        if (hops[i][k] > a.width()) continue;
        double col = 0.0, row = 0.0;
        for (vertex j = 0; j < 30; ++j) {
          col += std::abs(d(j, k));
          row += std::abs(d(k, j));
        }
        expect = std::max({expect, col, row});
      }
      EXPECT_NEAR(p[i], expect, 1e-14 * expect);
    }
  }
}

TEST(Preconditioners, DominatesGramMatrix) {
  // x* A* A x <= x* P_A^2 x: the smallest eigenvalue of P_A^2 - A*A is >= 0.
  for (std::uint64_t s = 0; s < 6; ++s) {
    const auto g = fixtures::rgg(24, 50 + s);
    const auto a = random_local(g, 1 + s % 2, s);
    const auto p = preconditioner_P(a);
    auto d = naive::mul(naive::adjoint(naive::from(a)), naive::from(a));
    for (vertex i = 0; i < 24; ++i) d(i, i) = p[i] * p[i] - d(i, i);
    for (vertex i = 0; i < 24; ++i)
      for (vertex j = 0; j < 24; ++j)
        if (i != j) d(i, j) = -d(i, j);
    EXPECT_GE(naive::jacobi(d).values.front(), -1e-10);
  }
}
