#include <monge_ampere/problems.hpp>
#include <monge_ampere/transfer.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <random>

using namespace ma;

namespace {

template <int Dim>
GridField<Dim> random_field(const GridGeometry<Dim>& g, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    GridField<Dim> f(g);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = d(rng);
    return f;
}

template <int Dim>
GridField<Dim> delta(const GridGeometry<Dim>& g, const IndexArg<Dim>& at) {
    GridField<Dim> f(g);
    f.at(at) = 1.0;
    return f;
}

// Number of axes on which idx differs from the fine image of the coarse node c.
int offset_axes(const Index<3>& idx, const Index<3>& c) {
    int k = 0;
    for (int d = 0; d < 3; ++d) k += std::abs(idx[d] - 2 * c[d]) == 1 ? 1 : 0;
    return k;
}

} // namespace

TEST(LevelPair, Validation) {
    EXPECT_NO_THROW(LevelPair<3>(GridGeometry<3>(8), GridGeometry<3>(4)));
    EXPECT_THROW(LevelPair<3>(GridGeometry<3>(8), GridGeometry<3>(2)), DomainError);
    EXPECT_THROW(LevelPair<3>(GridGeometry<3>(8), GridGeometry<3>(4, 2.0)), DomainError);
    EXPECT_THROW(LevelPair<2>(GridGeometry<2>(8), GridGeometry<2>(4, 1.0, {0.5, 0.0})), DomainError);
    GridField<3> fine(GridGeometry<3>(8)), wrong(GridGeometry<3>(2));
    EXPECT_THROW(restrict_halfweight(fine, wrong), DomainError);
    EXPECT_THROW(prolong_linear(wrong, fine), DomainError);
}

TEST(HalfWeight, DeltaProbe3D) {
    const GridGeometry<3> fine(8);
    const LevelPair<3> pair(fine);
    // delta on the coincident node
    auto c = restrict_halfweight(delta(fine, {4, 4, 4}), pair);
    EXPECT_EQ(c.at({2, 2, 2}), 6.0 / 12.0);
    EXPECT_EQ(interior_l2_norm(c), 6.0 / 12.0);
    // delta on a face neighbor reaches the two coarse nodes it sits between
    c = restrict_halfweight(delta(fine, {5, 4, 4}), pair);
    EXPECT_EQ(c.at({2, 2, 2}), 1.0 / 12.0);
    EXPECT_EQ(c.at({3, 2, 2}), 1.0 / 12.0);
    EXPECT_NEAR(interior_l2_norm(c), std::sqrt(2.0) / 12.0, 1e-16);
    // edge and corner positions are outside the stencil
    EXPECT_EQ(interior_max_norm(restrict_halfweight(delta(fine, {5, 5, 4}), pair)), 0.0);
    EXPECT_EQ(interior_max_norm(restrict_halfweight(delta(fine, {5, 5, 5}), pair)), 0.0);
}

TEST(HalfWeight, DeltaProbe2D) {
    const GridGeometry<2> fine(8);
    const LevelPair<2> pair(fine);
    EXPECT_EQ(restrict_halfweight(delta(fine, {4, 2}), pair).at({2, 1}), 4.0 / 8.0);
    const auto c = restrict_halfweight(delta(fine, {4, 3}), pair);
    EXPECT_EQ(c.at({2, 1}), 1.0 / 8.0);
    EXPECT_EQ(c.at({2, 2}), 1.0 / 8.0);
    EXPECT_EQ(interior_max_norm(restrict_halfweight(delta(fine, {3, 3}), pair)), 0.0);
}

TEST(HalfWeight, ConstantInteriorAndZeroBoundary) {
    const GridGeometry<3> fine(16);
    GridField<3> f(fine, 0.0);
    f.fill_interior(2.5);
    const auto c = restrict_halfweight(f, LevelPair<3>(fine));
    for_each_interior(c.geometry(), [&](const Index<3>& idx) { EXPECT_DOUBLE_EQ(c.at(idx), 2.5); });
    for_each_boundary(c.geometry(), [&](const Index<3>& idx) { EXPECT_EQ(c.at(idx), 0.0); });
    EXPECT_EQ(interior_max_norm(restrict_halfweight(GridField<3>(fine), LevelPair<3>(fine))), 0.0);
}

TEST(Inject, CopiesCoincidentNodesIncludingBoundary) {
    const GridGeometry<3> fine(8, 2.0, {-1.0, 0.0, 1.0});
    auto fn = [](const Point<3>& p) { return std::cos(p[0]) * p[1] + p[2] * p[2]; };
    const auto c = restrict_inject(sample(fine, fn), LevelPair<3>(fine));
    const auto expected = sample(fine.coarsened(), fn);
    for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(c[i], expected[i]);
}

TEST(Linear, DeltaProbeMatchesDistributionStencil) {
    // a coarse delta spreads as 1, 1/2, 1/4, 1/8 over coincident,
    // face-, edge- and corner-adjacent fine nodes
    const GridGeometry<3> coarse(4);
    const LevelPair<3> pair(coarse.refined(), coarse);
    for_each_interior(coarse, [&](const Index<3>& c) {
        const auto fine = prolong_linear(delta(coarse, c), pair);
        for_each_node(pair.fine, [&](const Index<3>& idx) {
            bool near = true;
            for (int d = 0; d < 3; ++d) near = near && std::abs(idx[d] - 2 * c[d]) <= 1;
            const double expected = near ? std::pow(0.5, offset_axes(idx, c)) : 0.0;
            EXPECT_EQ(fine.at(idx), expected);
        });
    });
}

TEST(Linear, DeltaProbe2D) {
    const GridGeometry<2> coarse(4);
    const LevelPair<2> pair(coarse.refined(), coarse);
    const auto f = prolong_linear(delta(coarse, {2, 1}), pair);
    EXPECT_EQ(f.at({4, 2}), 1.0);
    EXPECT_EQ(f.at({5, 2}), 0.5);
    EXPECT_EQ(f.at({4, 3}), 0.5);
    EXPECT_EQ(f.at({5, 3}), 0.25);
    EXPECT_EQ(f.at({6, 2}), 0.0);
}

// The interpolation matrix on interior nodes is the transpose of the full-weighting
// pattern: entry (fine i, coarse c) equals 8 times the weight fine i contributes to c.
TEST(Linear, TransposeOfFullWeighting) {
    const GridGeometry<3> coarse(4);
    const LevelPair<3> pair(coarse.refined(), coarse);
    for_each_interior(coarse, [&](const Index<3>& c) {
        const auto column = prolong_linear(delta(coarse, c), pair);
        for_each_interior(pair.fine, [&](const Index<3>& i) {
            double fw = 0.0;
            bool near = true;
            for (int d = 0; d < 3; ++d) near = near && std::abs(i[d] - 2 * c[d]) <= 1;
            if (near) fw = std::pow(2.0, 3 - offset_axes(i, c)) / 64.0;
            EXPECT_EQ(column.at(i), 8.0 * fw);
        });
    });
}

TEST(Linear, ReproducesConstantsAndLinears) {
    const GridGeometry<3> fine(16, 2.0, {0.5, -1.0, 0.0});
    const LevelPair<3> pair(fine);
    auto lin = [](const Point<3>& p) { return 1.5 * p[0] - 0.5 * p[1] + 2.0 * p[2] + 3.0; };
    const auto out = prolong_linear(sample(pair.coarse, lin), pair);
    EXPECT_LE(max_norm_error(out, lin), 1e-14);
    const auto k = prolong_linear(GridField<3>(pair.coarse, 4.0), pair);
    EXPECT_LE(max_norm_error(k, [](const Point<3>&) { return 4.0; }), 0.0);
    // injection followed by interpolation is exact for linears
    const auto back = prolong_linear(restrict_inject(sample(fine, lin), pair), pair);
    EXPECT_LE(max_norm_error(back, lin), 1e-14);

    const GridGeometry<2> f2(8);
    auto lin2 = [](const Point<2>& p) { return p[0] - 3.0 * p[1] + 0.25; };
    EXPECT_LE(max_norm_error(prolong_linear(sample(f2.coarsened(), lin2), LevelPair<2>(f2)), lin2), 1e-14);
}

TEST(Cubic, ReproducesCubicPolynomials) {
    for (int n : {8, 16, 32}) {
        const GridGeometry<3> fine(n, 1.5, {-0.5, 0.0, 0.25});
        const LevelPair<3> pair(fine);
        auto poly = [](const Point<3>& p) {
            return p[0] * p[0] * p[0] - 2.0 * p[1] * p[1] * p[1] + 0.5 * p[2] * p[2] * p[2] + p[0] * p[1] * p[2] -
                   p[0] * p[0] * p[2] + 1.0;
        };
        const auto out = prolong_cubic(sample(pair.coarse, poly), pair);
        EXPECT_LE(max_norm_error(out, poly), 1e-12) << "n=" << n;
    }
    const GridGeometry<2> f2(16);
    auto poly2 = [](const Point<2>& p) { return p[0] * p[0] * p[0] * p[1] * p[1] * p[1] - p[1] * p[1] + 2.0; };
    EXPECT_LE(max_norm_error(prolong_cubic(sample(f2.coarsened(), poly2), LevelPair<2>(f2)), poly2), 1e-12);
}

TEST(Cubic, ConstantsAndCoarsestFallback) {
    const GridGeometry<3> fine(4);
    const LevelPair<3> pair(fine);
    const auto c = GridField<3>(pair.coarse, -2.0);
    EXPECT_EQ(max_abs_difference(prolong_cubic(c, pair), prolong_linear(c, pair)), 0.0);
    const auto rnd = random_field(pair.coarse, 4);
    EXPECT_EQ(max_abs_difference(prolong_cubic(rnd, pair), prolong_linear(rnd, pair)), 0.0);
    const LevelPair<3> big(GridGeometry<3>(16));
    EXPECT_LE(max_norm_error(prolong_cubic(GridField<3>(big.coarse, 3.0), big), [](const Point<3>&) { return 3.0; }),
              1e-14);
}

TEST(Cubic, BeatsLinearOnSmoothData) {
    const auto p = catalog<3>("ex4");
    const LevelPair<3> pair(p.geometry(16));
    const auto coarse = restrict_inject(sample_exact(p, pair.fine), pair);
    const double cubic = max_norm_error(prolong_cubic(coarse, pair), *p.exact);
    const double linear = max_norm_error(prolong_linear(coarse, pair), *p.exact);
    EXPECT_LE(4.0 * cubic, linear);
}

TEST(Transfers, AreLinear) {
    const GridGeometry<3> fine(8);
    const LevelPair<3> pair(fine);
    const double a = 0.7, b = -1.3;
    auto combine = [&](const GridField<3>& x, const GridField<3>& y) {
        GridField<3> out(x.geometry());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x[i] + b * y[i];
        return out;
    };
    const auto fu = random_field(fine, 1), fv = random_field(fine, 2);
    const auto cu = random_field(pair.coarse, 3), cv = random_field(pair.coarse, 4);

    EXPECT_LE(max_abs_difference(restrict_halfweight(combine(fu, fv), pair),
                                 combine(restrict_halfweight(fu, pair), restrict_halfweight(fv, pair))),
              1e-13);
    EXPECT_LE(max_abs_difference(restrict_inject(combine(fu, fv), pair),
                                 combine(restrict_inject(fu, pair), restrict_inject(fv, pair))),
              1e-13);
    EXPECT_LE(max_abs_difference(prolong_linear(combine(cu, cv), pair),
                                 combine(prolong_linear(cu, pair), prolong_linear(cv, pair))),
              1e-13);
    const LevelPair<3> big(GridGeometry<3>(16));
    const auto bu = random_field(big.coarse, 5), bv = random_field(big.coarse, 6);
    EXPECT_LE(max_abs_difference(prolong_cubic(combine(bu, bv), big),
                                 combine(prolong_cubic(bu, big), prolong_cubic(bv, big))),
              1e-13);
}
