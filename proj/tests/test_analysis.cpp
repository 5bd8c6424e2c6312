#include "chi2/analysis.hpp"
#include "chi2/closed_form.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

using namespace chi2;
using chi2::testing::uniform;

namespace {

const SystemParams unit(1, 1, 1);

FieldPair exact_on(const Grid& g) {
    return sample_closed_form(ClosedFormKind::exact, g, ExactSolutionParams{});
}

} // namespace

TEST(Lipschitz, Examples) {
    const auto L = lipschitz(unit, {1.0, 1.0});
    EXPECT_DOUBLE_EQ(L.L11, 2.0);
    EXPECT_DOUBLE_EQ(L.L12, 1.0);
    EXPECT_DOUBLE_EQ(L.L21, 1.0);
    EXPECT_DOUBLE_EQ(L.L22, 1.0);

    const SystemParams p(-2.0, 4.0, 3.0);
    const auto z = lipschitz(p, {0.0, 0.0});
    EXPECT_DOUBLE_EQ(z.L11, 0.5);
    EXPECT_EQ(z.L12, 0.0);
    EXPECT_EQ(z.L21, 0.0);
    EXPECT_DOUBLE_EQ(z.L22, 0.75);

    const Bounds b{1.7, 0.4};
    const auto a = lipschitz(SystemParams(1.5, -2.0, 0.3), b);
    const auto c = lipschitz(SystemParams(3.0, -2.0, 0.3), b);
    EXPECT_DOUBLE_EQ(c.L11, a.L11 / 2);
    EXPECT_DOUBLE_EQ(c.L12, a.L12 / 2);
    EXPECT_EQ(c.L21, a.L21);
    EXPECT_EQ(c.L22, a.L22);
}

TEST(Lipschitz, BoundsTheRightHandSidesOnTheBox) {
    // brute-force oracle: the constants dominate sampled difference quotients
    const SystemParams p(0.7, -1.3, 2.0);
    const Bounds b{1.5, 2.5};
    const auto L = lipschitz(p, b);
    for (int i = 0; i < 20000; ++i) {
        const double p1 = uniform(-b.M, b.M), p2 = uniform(-b.M, b.M);
        const double q1 = uniform(-b.Mstar, b.Mstar), q2 = uniform(-b.Mstar, b.Mstar);
        EXPECT_LE(std::abs(eval_f1(p, p1, q1) - eval_f1(p, p2, q2)),
                  L.L11 * std::abs(p1 - p2) + L.L12 * std::abs(q1 - q2) + 1e-12);
        EXPECT_LE(std::abs(eval_f2(p, p1, q1) - eval_f2(p, p2, q2)),
                  L.L21 * std::abs(p1 - p2) + L.L22 * std::abs(q1 - q2) + 1e-12);
    }
}

TEST(ExistenceBound, Examples) {
    EXPECT_NEAR(existence_interval_bound(unit, {1.0, 1.0}), std::cbrt(16.0 / 3.5), 1e-15);
    EXPECT_NEAR(existence_interval_bound(unit, {1.0, 1.0}), 1.659653, 1e-6);
    EXPECT_THROW(existence_interval_bound(unit, {0.0, 0.0}), DegenerateBoundsError);
}

TEST(ExistenceBound, ScalesAsCubeRootUnderCoefficientScaling) {
    // doubling |r| and |s| doubles L^3: the forcing bracket halves, the ball is fixed
    for (int i = 0; i < 200; ++i) {
        const SystemParams p(uniform(0.2, 3.0), -uniform(0.2, 3.0), uniform(0.1, 3.0));
        const double c = uniform(0.5, 4.0);
        const SystemParams q(c * p.r(), c * p.s(), p.alpha());
        const Bounds b{uniform(0.1, 3.0), uniform(0.1, 3.0)};
        EXPECT_NEAR(existence_interval_bound(q, b) / existence_interval_bound(p, b), std::cbrt(c), 1e-12);
    }
}

TEST(ExistenceBound, SelfMapOracle) {
    // at the bound length the invariance inequality is tight
    const SystemParams p(1.4, 0.6, 0.8);
    const Bounds b{0.9, 1.7};
    const double L = existence_interval_bound(p, b);
    const double image = L * L * L / 8.0 *
                         ((b.M + b.M * b.Mstar) / p.r() + (p.alpha() * b.Mstar + b.M * b.M / 2) / p.s());
    EXPECT_NEAR(image, b.M + b.Mstar, 1e-12);
}

TEST(Uniqueness, Examples) {
    EXPECT_DOUBLE_EQ(uniqueness_constant(unit, Domain(0, 1), {1, 1}), 0.25);
    EXPECT_EQ(uniqueness_constant(unit, 0.0, {1, 1}), 0.0);
    EXPECT_DOUBLE_EQ(uniqueness_constant(unit, Domain(0, 2), {1, 1}),
                     4.0 * uniqueness_constant(unit, Domain(0, 1), {1, 1}));
}

TEST(Certify, Examples) {
    const auto ok = certify(unit, Domain(0, 1), {1, 1});
    EXPECT_TRUE(ok.exists_ok);
    EXPECT_TRUE(ok.unique_ok);
    EXPECT_DOUBLE_EQ(ok.A, 0.25);
    EXPECT_NEAR(ok.L_max, 1.659653, 1e-6);
    EXPECT_DOUBLE_EQ(ok.K, 3.5 / 8.0);

    const auto bad = certify(unit, Domain(0, 3), {1, 1});
    EXPECT_FALSE(bad.exists_ok);
    EXPECT_FALSE(bad.unique_ok);
    EXPECT_DOUBLE_EQ(bad.A, 2.25);

    const auto empty = certify(unit, 0.0, {1, 1});
    EXPECT_TRUE(empty.exists_ok);
    EXPECT_TRUE(empty.unique_ok);

    EXPECT_THROW(certify(unit, Domain(0, 1), {0, 0}), DegenerateBoundsError);
}

TEST(Certify, MonotoneInIntervalLength) {
    for (int i = 0; i < 500; ++i) {
        const SystemParams p(uniform(0.2, 2.0), uniform(0.2, 2.0), uniform(0.1, 2.0));
        const Bounds b{uniform(0.0, 2.0), uniform(0.1, 2.0)};
        const double L = uniform(0.0, 4.0), grow = uniform(0.0, 2.0);
        const auto small = certify(p, L, b);
        const auto large = certify(p, L + grow, b);
        EXPECT_GE(large.A, small.A);
        EXPECT_FALSE(!small.unique_ok && large.unique_ok);
        EXPECT_FALSE(!small.exists_ok && large.exists_ok);
    }
}

TEST(GreenFunction, Examples) {
    EXPECT_DOUBLE_EQ(green_function(0, 1, 0.25, 0.75), 0.0625);
    for (double y : {0.0, 0.3, 1.0})
        EXPECT_EQ(green_function(0.0, 1.0, 0.0, y), 0.0);
    EXPECT_THROW(green_function(0, 1, -0.1, 0.5), DomainError);
    EXPECT_THROW(green_function(0, 1, 0.5, 1.1), DomainError);
    EXPECT_THROW(green_function(1, 1, 1, 1), DomainError);
}

TEST(GreenFunction, SymmetricNonnegativeAndBounded) {
    const double a = -1.5, b = 2.5;
    double peak = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double x = uniform(a, b), y = uniform(a, b);
        const double g = green_function(a, b, x, y);
        EXPECT_EQ(g, green_function(a, b, y, x));
        EXPECT_GE(g, 0.0);
        EXPECT_LE(g, (b - a) / 4.0 + 1e-15);
    }
    for (int i = 0; i < 1000; ++i)
        for (int j = 0; j < 1000; ++j)
            peak = std::max(peak, green_function(a, b, a + (b - a) * i / 999.0, a + (b - a) * j / 999.0));
    EXPECT_NEAR(peak, (b - a) / 4.0, 1e-5);
    EXPECT_DOUBLE_EQ(green_function(a, b, 0.5, 0.5), 1.0);
}

TEST(GreenFunction, RowIntegralBound) {
    const Grid g(Domain(0.0, 1.0), 2001);
    EXPECT_NEAR(green_row_integral_max(g, Quadrature::simpson), 0.125, 1e-8);
    EXPECT_NEAR(green_row_integral_max(Grid(Domain(-1.0, 2.0), 301), Quadrature::trapezoid), 9.0 / 8.0, 1e-8);
}

TEST(ApplyGreen, InvertsSecondDerivative) {
    // u = −∫G g solves u'' = g, u(a) = u(b) = 0; for g = 1 on [0,1]: u = x(x−1)/2
    const Grid g(Domain(0.0, 1.0), 101);
    const std::vector<double> one(g.size(), 1.0);
    const auto u = apply_green(g, one, Quadrature::simpson);
    for (std::size_t k = 0; k < g.size(); ++k)
        EXPECT_NEAR(u[k], 0.5 * g[k] * (g[k] - 1.0), 1e-14);

    // smooth forcing: discrete second difference reproduces g
    const Grid g2(Domain(-1.0, 2.0), 1201);
    std::vector<double> f(g2.size());
    for (std::size_t k = 0; k < g2.size(); ++k)
        f[k] = std::cos(2.0 * g2[k]) + g2[k];
    const auto w = apply_green(g2, f, Quadrature::simpson);
    const double h = g2.spacing();
    for (std::size_t k = 1; k + 1 < g2.size(); ++k)
        EXPECT_NEAR((w[k - 1] - 2 * w[k] + w[k + 1]) / (h * h), f[k], 1e-4);
    EXPECT_EQ(w.front(), 0.0);
    EXPECT_EQ(w.back(), 0.0);
}

TEST(SobolevNorm, Examples) {
    const Grid g(Domain(0.0, 1.0), 2001);
    EXPECT_EQ(sobolev_h1_norm(g, std::vector<double>(g.size(), 0.0)), 0.0);

    std::vector<double> u(g.size()), twice(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        u[k] = std::sin(std::numbers::pi * g[k]);
        twice[k] = 2.0 * u[k];
    }
    const double expected = std::sqrt(0.5 + std::numbers::pi * std::numbers::pi / 2.0);
    EXPECT_NEAR(sobolev_h1_norm(g, u), expected, 1e-4);
    EXPECT_NEAR(sobolev_h1_norm(g, u), 2.331265, 1e-4);
    EXPECT_NEAR(sobolev_h1_norm(g, twice), 2.0 * sobolev_h1_norm(g, u), 1e-13);
    EXPECT_THROW(sobolev_h1_norm(g, std::vector<double>(5)), DimensionError);
}

TEST(SobolevNorm, WarnsOnNonzeroBoundary) {
    const Grid g(Domain(0.0, 1.0), 11);
    std::vector<std::string> seen;
    const WarningSink sink = [&](std::string_view m) { seen.emplace_back(m); };
    sobolev_h1_norm(g, std::vector<double>(11, 1.0), Quadrature::simpson, sink);
    EXPECT_EQ(seen.size(), 1u);
    seen.clear();
    std::vector<double> bump(11, 0.0);
    bump[5] = 1.0;
    sobolev_h1_norm(g, bump, Quadrature::simpson, sink);
    EXPECT_TRUE(seen.empty());
}

TEST(EnergyIdentity, Examples) {
    const Grid g(Domain(-20.0, 20.0), 4001);
    EXPECT_EQ(energy_identity_residual(unit, g, FieldPair::zeros(g.size())), 0.0);

    auto f = exact_on(g);
    EXPECT_LE(energy_identity_residual(unit, g, f), 1e-6);

    for (double& v : f.phi)
        v *= 1.1;
    EXPECT_NEAR(energy_identity_residual(unit, g, f), 0.21 / 1.21, 1e-9);
}

TEST(EnergyIdentity, TranslationInvariant) {
    const Grid a(Domain(-20.0, 20.0), 801);
    const Grid b(Domain(-17.0, 23.0), 801);
    for (int i = 0; i < 5; ++i) {
        auto f = chi2::testing::random_fields(801, 1.0);
        EXPECT_NEAR(energy_identity_residual(unit, a, f), energy_identity_residual(unit, b, f), 1e-12);
    }
}

TEST(EnergyIdentity, WarnsOutsideUnitCoefficients) {
    const Grid g(Domain(0.0, 1.0), 11);
    int warnings = 0;
    const WarningSink sink = [&](std::string_view) { ++warnings; };
    energy_identity_residual(SystemParams(-1, 1, 1), g, FieldPair::zeros(11), Quadrature::simpson, sink);
    EXPECT_EQ(warnings, 1);
    energy_identity_residual(unit, g, FieldPair::zeros(11), Quadrature::simpson, sink);
    EXPECT_EQ(warnings, 1);
}

TEST(NormOrdering, Examples) {
    const Grid g(Domain(-20.0, 20.0), 4001);
    auto f = exact_on(g);
    EXPECT_EQ(norm_ordering(unit, g, f), NormOrdering::equal);
    EXPECT_EQ(norm_ordering(unit, g, FieldPair::zeros(g.size())), NormOrdering::equal);

    auto doubled = f;
    for (double& v : doubled.psi)
        v *= 2.0;
    EXPECT_EQ(norm_ordering(unit, g, doubled), NormOrdering::less);

    auto bigger_phi = f;
    for (double& v : bigger_phi.phi)
        v *= 1.01;
    EXPECT_EQ(norm_ordering(unit, g, bigger_phi), NormOrdering::greater);
    EXPECT_EQ(to_string(NormOrdering::equal), "equal");
}
