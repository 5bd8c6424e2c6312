#include "chi2/closed_form.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace chi2;
using chi2::testing::uniform;

TEST(ExactAlpha1, PeakAndTails) {
    const auto v = exact_alpha1(0.0);
    EXPECT_NEAR(v.phi, 3.0 / std::numbers::sqrt2, 1e-15);
    EXPECT_NEAR(v.phi, 2.121320343559642, 1e-15);
    EXPECT_EQ(v.psi, 1.5);

    for (double x : {-800.0, 800.0}) {
        const auto t = exact_alpha1(x, {3.0});
        EXPECT_EQ(t.phi, 0.0);
        EXPECT_EQ(t.psi, 0.0);
    }
    // sech² keeps relative accuracy deep in the tail, where 1 − tanh² would round to 0
    const auto tail = exact_alpha1(60.0);
    EXPECT_GT(tail.psi, 0.0);
    EXPECT_NEAR(tail.psi / (6.0 * std::exp(-60.0)), 1.0, 1e-12);
}

TEST(ExactAlpha1, TranslationCovariance) {
    const auto a = exact_alpha1(1.0, {-1.0});
    const auto b = exact_alpha1(0.0, {0.0});
    EXPECT_EQ(a.phi, b.phi);
    EXPECT_EQ(a.psi, b.psi);
    for (int i = 0; i < 1000; ++i) {
        const double x = uniform(-20, 20), c2 = uniform(-5, 5), d = uniform(-5, 5);
        const auto u = exact_alpha1(x, {c2});
        const auto w = exact_alpha1(x + d, {c2 - d});
        EXPECT_NEAR(u.psi, w.psi, 1e-14);
    }
}

TEST(ExactAlpha1, DecouplingRelation) {
    for (int i = 0; i < 10000; ++i) {
        const double x = uniform(-30, 30), c2 = uniform(-3, 3);
        const auto v = exact_alpha1(x, {c2});
        EXPECT_LE(std::abs(v.phi - std::numbers::sqrt2 * v.psi), 1e-15 * v.phi);
    }
}

TEST(ExactAlpha1, JetMatchesFiniteDifferences) {
    // independent oracle: fourth-order central differences of the values
    for (int i = 0; i < 200; ++i) {
        const double x = uniform(-8, 8);
        const double h = 1e-3;
        auto psi = [&](double t) { return exact_alpha1(t).psi; };
        const double d1 = (-psi(x + 2 * h) + 8 * psi(x + h) - 8 * psi(x - h) + psi(x - 2 * h)) / (12 * h);
        const double d2 = (-psi(x + 2 * h) + 16 * psi(x + h) - 30 * psi(x) + 16 * psi(x - h) - psi(x - 2 * h)) /
                          (12 * h * h);
        const auto jet = exact_alpha1_jet(x);
        EXPECT_NEAR(jet.dpsi, d1, 1e-10);
        EXPECT_NEAR(jet.d2psi, d2, 1e-7);
        EXPECT_NEAR(jet.dphi, std::numbers::sqrt2 * jet.dpsi, 1e-15);
    }
}

TEST(ExactAlpha1, SatisfiesReducedEquationAndSystem) {
    const SystemParams unit(1, 1, 1);
    for (int i = 0; i < 10000; ++i) {
        const double x = uniform(-30, 30);
        const auto j = exact_alpha1_jet(x, {uniform(-2, 2)});
        EXPECT_LE(std::abs(j.d2psi - j.psi + j.psi * j.psi), 1e-12);
        EXPECT_LE(std::abs(j.d2phi - eval_f1(unit, j.phi, j.psi)), 1e-12);
        EXPECT_LE(std::abs(j.d2psi - eval_f2(unit, j.phi, j.psi)), 1e-12);
    }
}

TEST(ExactAlpha1, PrintedComponentOrderFailsTheSystem) {
    // swapping the amplitudes (3/2 on phi, 3/sqrt2 on psi) leaves an O(1) residual
    const double x = 0.0;
    const auto j = exact_alpha1_jet(x);
    const double phi = j.psi, d2phi = j.d2psi, psi = j.phi;
    EXPECT_GT(std::abs(d2phi - (phi - phi * psi)), 0.1);
}

TEST(ExactAlpha1, FirstIntegralVanishes) {
    for (int i = 0; i < 10000; ++i) {
        const auto j = exact_alpha1_jet(uniform(-30, 30), {uniform(-2, 2)});
        EXPECT_LE(std::abs(j.dpsi * j.dpsi - j.psi * j.psi + 2.0 / 3.0 * j.psi * j.psi * j.psi), 1e-12);
    }
}

TEST(BrightSeries, Examples) {
    const auto lead = bright_series(0.0, {4.0, 1.0, 0});
    EXPECT_DOUBLE_EQ(lead.phi, 4.0);
    EXPECT_DOUBLE_EQ(lead.psi, 2.0);
    const auto corr = bright_series(0.0, {4.0, 1.0, 1});
    EXPECT_DOUBLE_EQ(corr.phi, 4.0);
    EXPECT_DOUBLE_EQ(corr.psi, 1.0);
    const auto far = bright_series(400.0, {4.0, 1.0, 1});
    EXPECT_LT(far.phi, 1e-150);
    EXPECT_LT(far.psi, 1e-150);
    const auto unit = bright_series(0.0, {1.0, 1.0, 0});
    EXPECT_DOUBLE_EQ(unit.phi, 2.0);
    EXPECT_DOUBLE_EQ(unit.psi, 2.0);
}

TEST(BrightSeries, CorrectionScalesAsInverseRootAlpha) {
    auto sup_correction = [](double alpha) {
        double m = 0.0;
        for (int k = -2000; k <= 2000; ++k) {
            const double x = 0.005 * k;
            m = std::max(m, std::abs(bright_series(x, {alpha, 1.0, 1}).phi -
                                     bright_series(x, {alpha, 1.0, 0}).phi));
        }
        return m;
    };
    EXPECT_NEAR(sup_correction(400.0) / sup_correction(100.0), 0.5, 0.025);
}

TEST(DarkSeries, Examples) {
    const auto lead = dark_series(0.0, {1.0, 1.0, 0});
    EXPECT_EQ(lead.phi, 0.0);
    EXPECT_EQ(lead.psi, 0.0);
    const auto corr = dark_series(0.0, {1.0, 1.0, 1});
    EXPECT_EQ(corr.phi, 0.0);
    EXPECT_DOUBLE_EQ(corr.psi, 1.0);
    const auto far = dark_series(500.0, {1.0, 1.0, 0});
    EXPECT_DOUBLE_EQ(far.phi, std::numbers::sqrt2);
    EXPECT_DOUBLE_EQ(far.psi, 1.0);
}

TEST(Series, RejectsBadParameters) {
    EXPECT_THROW(bright_series(0.0, {0.0, 1.0, 0}), ConfigError);
    EXPECT_THROW(dark_series(0.0, {-1.0, 1.0, 0}), ConfigError);
    EXPECT_THROW(bright_series(0.0, {1.0, 1.0, 2}), ConfigError);
}

TEST(SampleClosedForm, ParityAndShape) {
    const Grid g5(Domain(-10.0, 10.0), 5);
    const auto ex = sample_closed_form(ClosedFormKind::exact, g5, ExactSolutionParams{0.0});
    EXPECT_EQ(ex.phi[0], ex.phi[4]);
    EXPECT_EQ(ex.phi[1], ex.phi[3]);
    EXPECT_GT(ex.phi[2], ex.phi[1]);
    EXPECT_EQ(ex.psi[2], 1.5);

    const Grid g(Domain(-6.0, 6.0), 121);
    const auto dark = sample_closed_form(ClosedFormKind::dark, g, SeriesParams{2.0, 1.0, 1});
    for (std::size_t k = 0; k < g.size(); ++k) {
        EXPECT_NEAR(dark.phi[k], -dark.phi[g.size() - 1 - k], 1e-14);
        EXPECT_NEAR(dark.psi[k], dark.psi[g.size() - 1 - k], 1e-14);
    }

    const auto bright = sample_closed_form(ClosedFormKind::bright, Grid(Domain(-1, 1), 3), SeriesParams{1.0, 1.0, 0});
    EXPECT_DOUBLE_EQ(bright.phi[1], 2.0);
    EXPECT_DOUBLE_EQ(bright.psi[1], 2.0);
}

TEST(SampleClosedForm, KindMismatchIsConfigurationError) {
    const Grid g(Domain(-1.0, 1.0), 3);
    EXPECT_THROW(sample_closed_form(ClosedFormKind::exact, g, SeriesParams{}), ConfigError);
    EXPECT_THROW(sample_closed_form(ClosedFormKind::bright, g, ExactSolutionParams{}), ConfigError);
}
