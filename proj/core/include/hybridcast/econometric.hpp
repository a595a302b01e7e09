#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hybridcast {

enum class LinearKind { Arima, Arfima };

std::string to_string(LinearKind kind);

struct ArimaOrder {
    int p = 0;
    int d = 0;
    int q = 0;

    friend bool operator==(const ArimaOrder&, const ArimaOrder&) = default;
};

/// Inclusive search bounds for order selection.
struct OrderBounds {
    int p_max = 5;
    int d_max = 1;
    int q_max = 5;
};

/// Coefficients of the truncated (1 - B)^d expansion.
struct FracWeights {
    double d = 0.0;
    std::vector<double> w;
};

struct CandidateScore {
    ArimaOrder order;
    double frac_d = 0.0;
    double aic = 0.0;
    bool converged = false;
};

/// An estimated ARIMA or ARFIMA model.
///
/// The raw series x is demeaned by `mu`, passed through the differencing
/// filter `filter` (binomial for integer d, truncated fractional weights for
/// ARFIMA; filter[0] == 1) and the resulting z is modelled as a zero-mean
/// ARMA(p, q) estimated by conditional sum of squares.
struct FittedLinearModel {
    LinearKind kind = LinearKind::Arima;
    ArimaOrder order;
    double frac_d = 0.0;
    std::vector<double> phi;
    std::vector<double> theta;
    double mu = 0.0;
    double sigma2 = 0.0;
    double aic = 0.0;
    std::vector<double> filter{1.0};

    /// One-step in-sample residuals e_t for training indices t >= warmup().
    std::vector<double> residuals;

    /// Every order/d combination scored during selection, in scan order.
    std::vector<CandidateScore> candidates;

    /// Observations consumed before the first residual can be formed.
    std::size_t warmup() const noexcept {
        return filter.size() - 1 + static_cast<std::size_t>(std::max(order.p, order.q));
    }
};

std::vector<double> difference(std::span<const double> x, int d);

FracWeights frac_diff_weights(double d, std::size_t k_max);

/// y_t = sum_{k=0..K} w_k x_{t-k} for t >= K; output length = x.size() - K.
std::vector<double> frac_difference(std::span<const double> x, double d, std::size_t k_max);

/// CSS estimate of one fixed ARIMA order.
FittedLinearModel fit_arima_order(std::span<const double> x, ArimaOrder order);

/// AIC selection over 0..p_max x 0..d_max x 0..q_max.
FittedLinearModel fit_arima(std::span<const double> x, const OrderBounds& bounds = {});

struct ArfimaOptions {
    std::vector<double> d_grid = default_d_grid();
    std::size_t truncation = 100;
    bool refine = true;

    static std::vector<double> default_d_grid();
};

/// CSS estimate of one fixed ARFIMA(p, frac_d, q).
FittedLinearModel fit_arfima_order(std::span<const double> x, int p, double frac_d, int q,
                                   std::size_t truncation = 100);

/// Two-stage selection: grid over d (then golden-section refinement around
/// the best cell), AIC selection over ARMA orders at each d.
FittedLinearModel fit_arfima(std::span<const double> x, const OrderBounds& bounds = {},
                             const ArfimaOptions& options = {});

/// out[t] is the forecast of x[t] from x[0..t-1] for t in [warmup, n];
/// out[n] forecasts the unseen next value. Earlier entries are NaN.
std::vector<double> one_step_forecasts(const FittedLinearModel& m, std::span<const double> x);

double forecast_one(const FittedLinearModel& m, std::span<const double> history);

/// True when 1 + c_1 z + ... + c_k z^k has every root outside the unit circle.
bool roots_outside_unit_circle(std::span<const double> c);

}  // namespace hybridcast
