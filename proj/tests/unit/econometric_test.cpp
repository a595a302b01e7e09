#include "hybridcast/econometric.hpp"

#include "expect_error.hpp"
#include "synthetic.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

namespace hybridcast {
namespace {

using testing::error_code_of;

TEST(DifferenceTest, LinearRampAndSquares) {
    const std::vector<double> ramp{1, 2, 3, 4};
    EXPECT_EQ(difference(ramp, 1), (std::vector<double>{1, 1, 1}));
    const std::vector<double> squares{1, 4, 9, 16};
    EXPECT_EQ(difference(squares, 2), (std::vector<double>{2, 2}));
    EXPECT_EQ(difference(ramp, 0), ramp);
    EXPECT_EQ(error_code_of([&] { difference(ramp, 4); }), ErrorCode::TooShort);
}

TEST(FracWeightsTest, IntegerOrdersCollapse) {
    EXPECT_EQ(frac_diff_weights(1.0, 3).w, (std::vector<double>{1, -1, 0, 0}));
    EXPECT_EQ(frac_diff_weights(0.0, 3).w, (std::vector<double>{1, 0, 0, 0}));
    EXPECT_EQ(frac_diff_weights(2.0, 4).w, (std::vector<double>{1, -2, 1, 0, 0}));
}

TEST(FracWeightsTest, HandComputedPointFour) {
    const auto w = frac_diff_weights(0.4, 2).w;
    ASSERT_EQ(w.size(), 3u);
    EXPECT_DOUBLE_EQ(w[0], 1.0);
    EXPECT_NEAR(w[1], -0.4, 1e-15);
    EXPECT_NEAR(w[2], -0.12, 1e-15);
}

// Direct binomial coefficient (-1)^k C(d, k) via the product formula.
double binomial_weight(double d, std::size_t k) {
    double c = 1.0;
    for (std::size_t j = 0; j < k; ++j) {
        c *= (d - static_cast<double>(j)) / static_cast<double>(j + 1);
    }
    return (k % 2 == 0 ? 1.0 : -1.0) * c;
}

TEST(FracWeightsTest, RecurrenceMatchesDirectBinomial) {
    for (int i = -4; i <= 4; ++i) {
        const double d = 0.1 * i;
        const auto w = frac_diff_weights(d, 200).w;
        ASSERT_EQ(w.size(), 201u);
        for (std::size_t k = 0; k <= 200; ++k) {
            EXPECT_NEAR(w[k], binomial_weight(d, k), 1e-10) << "d=" << d << " k=" << k;
        }
    }
}

TEST(FracWeightsTest, PartialSumsPositiveAndDecreasing) {
    for (const double d : {0.1, 0.3, 0.45, 0.7, 0.95}) {
        const auto w = frac_diff_weights(d, 1000).w;
        double prev = w[0];
        double sum = w[0];
        for (std::size_t k = 1; k < w.size(); ++k) {
            sum += w[k];
            EXPECT_GT(sum, 0.0);
            EXPECT_LT(sum, prev);
            prev = sum;
        }
    }
}

TEST(FracDifferenceTest, DegenerateOrders) {
    const auto x = testing::noise(12, 5);
    const auto y0 = frac_difference(x, 0.0, 3);
    ASSERT_EQ(y0.size(), 9u);
    for (std::size_t t = 0; t < y0.size(); ++t) {
        EXPECT_EQ(y0[t], x[t + 3]);
    }
    const auto y1 = frac_difference(x, 1.0, 1);
    const auto dx = difference(x, 1);
    ASSERT_EQ(y1.size(), dx.size());
    for (std::size_t t = 0; t < dx.size(); ++t) {
        EXPECT_NEAR(y1[t], dx[t], 1e-15);
    }
    EXPECT_EQ(error_code_of([&] { frac_difference(x, 0.3, 12); }), ErrorCode::TooShort);
}

TEST(FracDifferenceTest, MatchesNumpyConvolution) {
    // Reference: tests/oracles/reference_values.py, frac_case.
    const std::vector<double> want{-0.29790681271659425, 0.052190501147209897, 0.17831706109694592,
                                   0.36601098349520161,  -0.4578688165742415,  0.17084890583927148,
                                   0.40387654303767412,  0.31084795409418459,  -0.19742873259073954,
                                   -0.030076660950201846, -0.030876675417664687, -0.46295556952941874,
                                   0.20339581623950156,  0.50562819948011695,  -0.36873565617087384};
    const auto got = frac_difference(testing::noise(20, 100), 0.3, 5);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
        EXPECT_NEAR(got[i], want[i], 1e-12);
    }
}

TEST(UnitCircleTest, RootsOfSimplePolynomials) {
    EXPECT_TRUE(roots_outside_unit_circle(std::vector<double>{}));
    EXPECT_TRUE(roots_outside_unit_circle(std::vector<double>{0.5}));    // root -2
    EXPECT_FALSE(roots_outside_unit_circle(std::vector<double>{1.5}));   // root -2/3
    EXPECT_FALSE(roots_outside_unit_circle(std::vector<double>{-1.0}));  // root on the circle
    EXPECT_TRUE(roots_outside_unit_circle(std::vector<double>{-0.5, 0.06}));
    EXPECT_FALSE(roots_outside_unit_circle(std::vector<double>{0.0, 1.2}));
}

TEST(CssTest, MatchesScipyReferenceEstimate) {
    // Reference: tests/oracles/reference_values.py, css_case.
    const auto e = testing::noise(800, 7);
    std::vector<double> x(800, 0.0);
    for (std::size_t t = 1; t < 800; ++t) {
        x[t] = 0.5 * x[t - 1] + e[t] + 0.3 * e[t - 1];
    }
    x.erase(x.begin(), x.begin() + 200);
    const auto m = fit_arima_order(x, {1, 0, 1});
    ASSERT_EQ(m.phi.size(), 1u);
    ASSERT_EQ(m.theta.size(), 1u);
    EXPECT_NEAR(m.phi[0], 0.46142918649342113, 1e-5);
    EXPECT_NEAR(m.theta[0], 0.36198055149944364, 1e-5);
    EXPECT_NEAR(m.sigma2, 0.076911154261467024, 1e-8);
    EXPECT_NEAR(m.mu, 0.012430539497333158, 1e-15);
    EXPECT_EQ(m.residuals.size(), x.size() - m.warmup());
}

TEST(ArimaTest, RecoversAr1Coefficient) {
    const auto x = testing::simulate_arma(2000, {0.6}, {}, 1.0, 2024);
    const auto m = fit_arima(x);
    EXPECT_GE(m.order.p, 1);
    ASSERT_FALSE(m.phi.empty());
    EXPECT_GE(m.phi[0], 0.52);
    EXPECT_LE(m.phi[0], 0.68);
    EXPECT_GT(m.sigma2, 0.0);
}

TEST(ArimaTest, SelectedAicIsMinimalAndRefitIsBitIdentical) {
    const auto x = testing::simulate_arma(400, {0.3}, {0.4}, 0.01, 5);
    OrderBounds b{2, 1, 2};
    const auto m = fit_arima(x, b);
    ASSERT_EQ(m.candidates.size(), 3u * 2u * 3u);
    for (const auto& c : m.candidates) {
        if (c.converged) {
            EXPECT_LE(m.aic, c.aic);
        }
    }
    const auto again = fit_arima(x, b);
    EXPECT_EQ(again.order, m.order);
    EXPECT_EQ(again.phi, m.phi);
    EXPECT_EQ(again.theta, m.theta);
    EXPECT_EQ(again.aic, m.aic);
}

TEST(ArimaTest, WhiteNoiseForecastsStayNearMean) {
    const double sigma = 0.01;
    const auto x = testing::gaussian(2000, sigma, 77);
    const auto m = fit_arima(x);
    const auto f = one_step_forecasts(m, x);
    double dev = 0.0;
    std::size_t n = 0;
    for (std::size_t t = m.warmup(); t < x.size(); ++t) {
        dev += std::abs(f[t] - m.mu);
        ++n;
    }
    EXPECT_LT(dev / static_cast<double>(n), 0.1 * sigma);
}

TEST(ArimaTest, DegenerateAndShortInputs) {
    const std::vector<double> flat(100, 0.001);
    EXPECT_EQ(error_code_of([&] { fit_arima(flat); }), ErrorCode::NonConvergent);
    const auto shorty = testing::gaussian(49, 1.0, 1);
    EXPECT_EQ(error_code_of([&] { fit_arima(shorty); }), ErrorCode::TooShort);
}

TEST(ArimaTest, ResidualsHaveTrainingLengthMinusWarmup) {
    const auto x = testing::simulate_arma(300, {0.2}, {}, 1.0, 8);
    for (const ArimaOrder o : {ArimaOrder{0, 0, 0}, ArimaOrder{2, 0, 1}, ArimaOrder{1, 1, 1}}) {
        const auto m = fit_arima_order(x, o);
        EXPECT_EQ(m.residuals.size(), x.size() - m.warmup());
        EXPECT_EQ(m.warmup(), static_cast<std::size_t>(o.d + std::max(o.p, o.q)));
    }
}

TEST(ForecastTest, MeanModelForecastsMu) {
    FittedLinearModel m;
    m.mu = 0.0007;
    const std::vector<double> h{0.01, -0.02, 0.03};
    EXPECT_DOUBLE_EQ(forecast_one(m, h), 0.0007);
}

TEST(ForecastTest, Ar1ClosedForm) {
    FittedLinearModel m;
    m.order = {1, 0, 0};
    m.phi = {0.5};
    m.mu = 0.0;
    const std::vector<double> h{0.003, -0.01, 0.02};
    EXPECT_NEAR(forecast_one(m, h), 0.01, 1e-15);
    EXPECT_EQ(error_code_of([&] { forecast_one(m, std::vector<double>{}); }), ErrorCode::TooShort);
}

TEST(ForecastTest, ResidualIdentityOnTrainingData) {
    const auto x = testing::simulate_arma(500, {0.4, -0.2}, {0.3}, 0.01, 31);
    for (const ArimaOrder o : {ArimaOrder{2, 0, 1}, ArimaOrder{1, 1, 1}}) {
        const auto m = fit_arima_order(x, o);
        const auto f = one_step_forecasts(m, x);
        for (std::size_t t = m.warmup(); t < x.size(); ++t) {
            EXPECT_NEAR(x[t] - f[t], m.residuals[t - m.warmup()], 1e-10);
        }
        std::span<const double> all(x);
        EXPECT_NEAR(forecast_one(m, all.first(x.size() - 1)), x.back() - m.residuals.back(), 1e-10);
    }
}

TEST(ForecastTest, ForecastsUseOnlyThePast) {
    const auto x = testing::simulate_arma(300, {0.5}, {0.2}, 1.0, 4);
    const auto m = fit_arima_order(x, {1, 0, 1});
    const auto full = one_step_forecasts(m, x);
    auto altered = x;
    altered[200] += 5.0;
    const auto changed = one_step_forecasts(m, altered);
    for (std::size_t t = 0; t <= 200; ++t) {
        if (std::isnan(full[t])) {
            EXPECT_TRUE(std::isnan(changed[t]));
        } else {
            EXPECT_EQ(full[t], changed[t]) << t;
        }
    }
    EXPECT_NE(full[201], changed[201]);
}

TEST(ArfimaTest, RecoversFractionalOrder) {
    const auto x = testing::simulate_arfima(3000, 0.3, 1.0, 99);
    OrderBounds b{1, 0, 1};
    const auto m = fit_arfima(x, b);
    EXPECT_EQ(m.kind, LinearKind::Arfima);
    EXPECT_GE(m.frac_d, 0.15);
    EXPECT_LE(m.frac_d, 0.45);
    EXPECT_GT(m.frac_d, -0.5);
    EXPECT_LT(m.frac_d, 0.5);
}

TEST(ArfimaTest, WhiteNoiseOrderAveragesNearZero) {
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto x = testing::gaussian(600, 1.0, 1000 + seed);
        OrderBounds b{0, 0, 0};
        sum += fit_arfima(x, b).frac_d;
    }
    EXPECT_LE(std::abs(sum / 20.0), 0.1);
}

TEST(ArfimaTest, ZeroGridEqualsArima) {
    const auto x = testing::simulate_arma(400, {0.3}, {0.2}, 0.01, 12);
    OrderBounds b{2, 0, 2};
    ArfimaOptions opt;
    opt.d_grid = {0.0};
    const auto fa = fit_arfima(x, b, opt);
    const auto ar = fit_arima(x, b);
    EXPECT_EQ(fa.order.p, ar.order.p);
    EXPECT_EQ(fa.order.q, ar.order.q);
    ASSERT_EQ(fa.phi.size(), ar.phi.size());
    for (std::size_t i = 0; i < fa.phi.size(); ++i) {
        EXPECT_NEAR(fa.phi[i], ar.phi[i], 1e-8);
    }
    for (std::size_t i = 0; i < fa.theta.size(); ++i) {
        EXPECT_NEAR(fa.theta[i], ar.theta[i], 1e-8);
    }
    EXPECT_EQ(fa.frac_d, 0.0);
}

TEST(ArfimaTest, WarmupCoversTruncation) {
    const auto x = testing::simulate_arfima(500, 0.2, 1.0, 3);
    const auto m = fit_arfima_order(x, 1, 0.2, 0, 50);
    EXPECT_EQ(m.filter.size(), 51u);
    EXPECT_EQ(m.warmup(), 51u);
    EXPECT_EQ(m.residuals.size(), x.size() - 51);
    const auto f = one_step_forecasts(m, x);
    for (std::size_t t = m.warmup(); t < x.size(); ++t) {
        EXPECT_NEAR(x[t] - f[t], m.residuals[t - m.warmup()], 1e-10);
    }
}

}  // namespace
}  // namespace hybridcast
