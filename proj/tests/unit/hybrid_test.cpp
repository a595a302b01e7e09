#include "hybridcast/hybrid.hpp"

#include "expect_error.hpp"
#include "synthetic.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

namespace hybridcast {
namespace {

using testing::error_code_of;

// Returns the last column of the row; fit only records the width.
class LastColumnStub final : public Regressor {
public:
    void fit(const FeatureMatrix& x) override { cols_ = x.cols; }
    double predict(const FeatureMatrix& x, std::size_t row) const override { return x.row(row)[x.cols - 1]; }
    std::size_t input_dim() const noexcept override { return cols_; }
    std::string kind() const override { return "last"; }

private:
    std::size_t cols_ = 0;
};

class ConstantStub final : public Regressor {
public:
    explicit ConstantStub(double value) : value_(value) {}
    void fit(const FeatureMatrix& x) override {
        cols_ = x.cols;
        seen_target_ = x.target;
    }
    double predict(const FeatureMatrix&, std::size_t) const override { return value_; }
    std::size_t input_dim() const noexcept override { return cols_; }
    std::string kind() const override { return "constant"; }

    std::vector<double> seen_target_;

private:
    double value_;
    std::size_t cols_ = 0;
};

FittedLinearModel constant_model(double mean) {
    FittedLinearModel m;
    m.mu = mean;
    m.sigma2 = 1.0;
    return m;
}

std::vector<double> ar1(std::size_t n, std::uint64_t seed) { return testing::simulate_arma(n, {0.6}, {}, 0.01, seed); }

TEST(HybridTest, FeatureModeWithPassThroughLearnerReproducesLinearForecast) {
    const auto x = ar1(400, 1);
    const auto linear = fit_arima(x, {2, 0, 2});
    const auto m = fit_hybrid(linear, std::make_unique<LastColumnStub>(), HybridMode::Feature, 5, x);
    const auto lin = one_step_forecasts(linear, x);
    const auto hyb = hybrid_forecasts(m, x);
    for (std::size_t t = m.min_history(); t < hyb.size(); ++t) {
        EXPECT_EQ(hyb[t], lin[t]);
    }
    EXPECT_EQ(forecast_hybrid(m, x), forecast_one(linear, x));
}

TEST(HybridTest, ResidualModeWithZeroLearnerReproducesLinearForecast) {
    const auto x = ar1(300, 2);
    const auto linear = fit_arima(x, {2, 0, 2});
    const auto m = fit_hybrid(linear, std::make_unique<ConstantStub>(0.0), HybridMode::Residual, 5, x);
    const auto lin = one_step_forecasts(linear, x);
    const auto hyb = hybrid_forecasts(m, x);
    for (std::size_t t = m.min_history(); t < hyb.size(); ++t) {
        EXPECT_EQ(hyb[t], lin[t]);
    }
}

TEST(HybridTest, ResidualModeAddsComponents) {
    const std::vector<double> x(50, 0.0);
    const auto m = fit_hybrid(constant_model(0.002), std::make_unique<ConstantStub>(0.001), HybridMode::Residual, 3, x);
    EXPECT_DOUBLE_EQ(forecast_hybrid(m, x), 0.003);
}

TEST(HybridTest, ResidualLearnerIsTrainedOnLinearResiduals) {
    const auto x = ar1(300, 3);
    const auto linear = fit_arima(x, {1, 0, 1});
    auto stub = std::make_unique<ConstantStub>(0.0);
    const auto* raw = stub.get();
    const auto m = fit_hybrid(linear, std::move(stub), HybridMode::Residual, 4, x);
    ASSERT_EQ(m.nonlinear.get(), raw);
    const auto fitted = one_step_forecasts(linear, x);
    const std::size_t first = linear.warmup() + 4;
    ASSERT_EQ(raw->seen_target_.size(), x.size() - first);
    for (std::size_t t = first; t < x.size(); ++t) {
        const double e = raw->seen_target_[t - first];
        EXPECT_EQ(e, x[t] - fitted[t]);
        EXPECT_NEAR(fitted[t] + e, x[t], 1e-12);
    }
}

TEST(HybridTest, FeatureModeDesignHasOneExtraColumn) {
    const auto x = ar1(200, 4);
    const auto linear = fit_arima(x, {1, 0, 1});
    for (std::size_t lag : {1u, 5u, 10u}) {
        EXPECT_EQ(hybrid_training_matrix(linear, HybridMode::Feature, lag, x).cols, lag + 1);
        EXPECT_EQ(hybrid_training_matrix(linear, HybridMode::Residual, lag, x).cols, lag);
    }
}

TEST(HybridTest, FeatureModeDependsOnlyOnTheForecastValue) {
    const auto x = ar1(200, 5);
    auto a = constant_model(0.002);
    auto b = constant_model(0.002);
    b.order.p = 1;
    b.phi = {0.0};
    LearnerParams lp;
    lp.kind = LearnerKind::Gbt;
    const auto ma = fit_hybrid(a, lp, HybridMode::Feature, 5, x);
    HybridModel mb = ma;
    mb.linear = b;
    EXPECT_EQ(forecast_hybrid(ma, x), forecast_hybrid(mb, x));
}

// Innovations bounded by half the SVR tube: the residuals carry nothing the
// learner can fit, so its contribution should be close to zero.
TEST(HybridTest, ResidualLearnerStaysSmallOnALinearProcess) {
    const double tube = 1e-3;
    const auto u = testing::noise(1500, 900);
    std::vector<double> x(u.size());
    double prev = 0.0;
    for (std::size_t t = 0; t < u.size(); ++t) {
        x[t] = 0.6 * prev + tube * u[t];
        prev = x[t];
    }
    HybridSpec spec;
    spec.bounds = {1, 0, 1};
    spec.learner.kind = LearnerKind::Svr;
    spec.learner.svr.epsilon = tube;
    spec.lag_n = 5;
    const auto m = fit_hybrid(spec, std::span(x).first(1000));
    const auto lin = one_step_forecasts(m.linear, x);
    const auto hyb = hybrid_forecasts(m, x, 1000);
    double sq = 0.0;
    double e2 = 0.0;
    for (std::size_t t = 1000; t < x.size(); ++t) {
        const double n_hat = hyb[t] - lin[t];
        sq += n_hat * n_hat;
        e2 += (x[t] - lin[t]) * (x[t] - lin[t]);
    }
    EXPECT_LT(std::sqrt(sq / 500.0), 0.1 * std::sqrt(e2 / 500.0));
}

TEST(HybridTest, LabelsAreDistinctAcrossAllCombinations) {
    std::set<std::string> labels;
    for (auto lin : {LinearKind::Arima, LinearKind::Arfima}) {
        for (auto learner : {LearnerKind::Svr, LearnerKind::Gbt, LearnerKind::Lstm}) {
            for (auto mode : {HybridMode::Feature, HybridMode::Residual}) {
                labels.insert(hybrid_label(lin, learner, mode));
            }
        }
    }
    EXPECT_EQ(labels.size(), 12u);
    EXPECT_TRUE(labels.count("SVM-ARIMA (1)"));
    EXPECT_TRUE(labels.count("LSTM-ARFIMA (2)"));
    EXPECT_TRUE(labels.count("XGBoost-ARIMA (2)"));
}

TEST(HybridTest, EveryLearnerGivesFiniteForecasts) {
    const auto x = testing::composite_process(400, 0.3, 0.03, 0.01, 7);
    for (auto learner : {LearnerKind::Svr, LearnerKind::Gbt, LearnerKind::Lstm}) {
        for (auto mode : {HybridMode::Feature, HybridMode::Residual}) {
            HybridSpec spec;
            spec.bounds = {1, 0, 1};
            spec.learner.kind = learner;
            spec.learner.lstm.epochs = 3;
            spec.mode = mode;
            const auto m = fit_hybrid(spec, std::span(x).first(300));
            const auto f = hybrid_forecasts(m, x, 300);
            for (std::size_t t = 300; t < f.size(); ++t) {
                EXPECT_TRUE(std::isfinite(f[t])) << spec.label() << " t=" << t;
            }
        }
    }
}

TEST(HybridTest, BulkForecastsEqualPrefixForecasts) {
    const auto x = ar1(260, 8);
    HybridSpec spec;
    spec.bounds = {1, 0, 1};
    spec.learner.kind = LearnerKind::Lstm;
    spec.learner.lstm.epochs = 2;
    spec.learner.lstm.sequence_length = 4;
    spec.mode = HybridMode::Feature;
    const auto m = fit_hybrid(spec, std::span(x).first(200));
    const auto bulk = hybrid_forecasts(m, x, 200);
    for (std::size_t t = 200; t <= x.size(); t += 13) {
        EXPECT_EQ(bulk[t], forecast_hybrid(m, std::span(x).first(t)));
    }
}

TEST(HybridTest, LearnerOnlyForecastsMatchPrefixes) {
    const auto x = ar1(150, 9);
    LearnerParams lp;
    lp.kind = LearnerKind::Gbt;
    const auto m = fit_learner_only(lp, 5, std::span(x).first(100));
    const auto bulk = learner_forecasts(m, x, 100);
    for (std::size_t t = 100; t <= x.size(); t += 7) {
        EXPECT_EQ(bulk[t], forecast_learner(m, std::span(x).first(t)));
    }
    EXPECT_EQ(error_code_of([&] { forecast_learner(m, std::span(x).first(4)); }), ErrorCode::TooShort);
}

TEST(HybridTest, ShortInputsAreRejected) {
    const auto x = ar1(100, 10);
    const auto m = fit_hybrid(constant_model(0.0), std::make_unique<ConstantStub>(0.0), HybridMode::Residual, 5, x);
    EXPECT_EQ(error_code_of([&] { forecast_hybrid(m, std::span(x).first(3)); }), ErrorCode::TooShort);
    EXPECT_EQ(error_code_of([&] {
                  fit_hybrid(constant_model(0.0), std::make_unique<ConstantStub>(0.0), HybridMode::Residual, 5,
                             std::span(x).first(5));
              }),
              ErrorCode::TooShort);
}

}  // namespace
}  // namespace hybridcast
