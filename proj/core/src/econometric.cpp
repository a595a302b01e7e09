#include "hybridcast/econometric.hpp"

#include "hybridcast/error.hpp"
#include "hybridcast/optimize.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numeric>

namespace hybridcast {

namespace {

constexpr std::size_t kMinTrainingLength = 50;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> binomial_filter(int d) {
    std::vector<double> c{1.0};
    for (int i = 0; i < d; ++i) {
        std::vector<double> next(c.size() + 1, 0.0);
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k] += c[k];
            next[k + 1] -= c[k];
        }
        c = std::move(next);
    }
    return c;
}

// z_t = sum_k filter_k (x_{t+K-k} - mu), t = 0..n-K-1
std::vector<double> apply_filter(std::span<const double> x, double mu, std::span<const double> filter) {
    const std::size_t k_max = filter.size() - 1;
    std::vector<double> z(x.size() - k_max);
    for (std::size_t t = 0; t < z.size(); ++t) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= k_max; ++k) {
            acc += filter[k] * (x[t + k_max - k] - mu);
        }
        z[t] = acc;
    }
    return z;
}

// Conditional sum of squares of a zero-mean ARMA(p, q) over z, with residuals
// before the first usable index held at zero.
double css(std::span<const double> z, int p, int q, std::span<const double> phi, std::span<const double> theta,
           std::vector<double>* residuals) {
    const auto start = static_cast<std::size_t>(std::max(p, q));
    std::vector<double> e(z.size(), 0.0);
    double sse = 0.0;
    for (std::size_t t = start; t < z.size(); ++t) {
        double pred = 0.0;
        for (int i = 1; i <= p; ++i) {
            pred += phi[i - 1] * z[t - i];
        }
        for (int j = 1; j <= q; ++j) {
            pred += theta[j - 1] * e[t - j];
        }
        e[t] = z[t] - pred;
        sse += e[t] * e[t];
    }
    if (residuals != nullptr) {
        residuals->assign(e.begin() + static_cast<std::ptrdiff_t>(start), e.end());
    }
    return sse;
}

std::vector<double> ols_ar_start(std::span<const double> z, int p) {
    std::vector<double> phi(static_cast<std::size_t>(p), 0.0);
    const auto start = static_cast<std::size_t>(p);
    if (p == 0 || z.size() <= start + static_cast<std::size_t>(p)) {
        return phi;
    }
    const auto rows = static_cast<Eigen::Index>(z.size() - start);
    Eigen::MatrixXd lhs(rows, p);
    Eigen::VectorXd rhs(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const std::size_t t = start + static_cast<std::size_t>(r);
        rhs(r) = z[t];
        for (int i = 1; i <= p; ++i) {
            lhs(r, i - 1) = z[t - i];
        }
    }
    const Eigen::VectorXd sol = lhs.colPivHouseholderQr().solve(rhs);
    if (!sol.allFinite()) {
        return phi;
    }
    for (int i = 0; i < p; ++i) {
        phi[static_cast<std::size_t>(i)] = sol(i);
    }
    // CSS does not need stationarity, but a wildly explosive start slows the simplex.
    std::vector<double> neg(phi.size());
    std::transform(phi.begin(), phi.end(), neg.begin(), [](double v) { return -v; });
    if (!roots_outside_unit_circle(neg)) {
        std::fill(phi.begin(), phi.end(), 0.0);
    }
    return phi;
}

struct ArmaFit {
    std::vector<double> phi;
    std::vector<double> theta;
    double sigma2 = 0.0;
    double aic = 0.0;
    std::vector<double> residuals;
    bool converged = false;
};

ArmaFit fit_arma(std::span<const double> z, int p, int q) {
    ArmaFit fit;
    const auto start = static_cast<std::size_t>(std::max(p, q));
    const std::size_t n_params = static_cast<std::size_t>(p + q + 1);
    if (z.size() <= start + n_params) {
        return fit;
    }
    const double n_eff = static_cast<double>(z.size() - start);
    double scale = 0.0;
    for (std::size_t t = start; t < z.size(); ++t) {
        scale += z[t] * z[t];
    }
    scale /= n_eff;
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        return fit;
    }

    std::vector<double> x0 = ols_ar_start(z, p);
    x0.resize(static_cast<std::size_t>(p + q), 0.0);

    const auto objective = [&](std::span<const double> params) {
        const auto phi = params.subspan(0, static_cast<std::size_t>(p));
        const auto theta = params.subspan(static_cast<std::size_t>(p));
        if (!roots_outside_unit_circle(theta)) {
            return std::numeric_limits<double>::infinity();
        }
        return css(z, p, q, phi, theta, nullptr) / (n_eff * scale);
    };

    optimize::NelderMeadOptions opts;
    opts.max_evaluations = 600 * (static_cast<std::size_t>(p + q) + 1);
    const auto best = optimize::nelder_mead(objective, x0, opts);

    fit.phi.assign(best.x.begin(), best.x.begin() + p);
    fit.theta.assign(best.x.begin() + p, best.x.end());
    const double sse = css(z, p, q, fit.phi, fit.theta, &fit.residuals);
    fit.sigma2 = sse / n_eff;
    if (!std::isfinite(sse) || !(fit.sigma2 > 0.0) || !roots_outside_unit_circle(fit.theta)) {
        return fit;
    }
    fit.aic = n_eff * std::log(fit.sigma2) + 2.0 * static_cast<double>(n_params);
    fit.converged = std::isfinite(fit.aic);
    return fit;
}

void require_fit_input(std::span<const double> x, std::size_t min_len) {
    if (x.size() < std::max(min_len, kMinTrainingLength)) {
        throw Error(ErrorCode::TooShort, "linear model needs at least " +
                                             std::to_string(std::max(min_len, kMinTrainingLength)) +
                                             " observations, got " + std::to_string(x.size()));
    }
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    if (*lo == *hi) {
        throw Error(ErrorCode::NonConvergent, "series has zero variance");
    }
    for (double v : x) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::InvalidArgument, "series contains non-finite values");
        }
    }
}

double mean_of(std::span<const double> x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

FittedLinearModel assemble(LinearKind kind, ArimaOrder order, double frac_d, double mu, std::vector<double> filter,
                           ArmaFit&& fit) {
    FittedLinearModel m;
    m.kind = kind;
    m.order = order;
    m.frac_d = frac_d;
    m.mu = mu;
    m.filter = std::move(filter);
    m.phi = std::move(fit.phi);
    m.theta = std::move(fit.theta);
    m.sigma2 = fit.sigma2;
    m.aic = fit.aic;
    m.residuals = std::move(fit.residuals);
    return m;
}

std::vector<double> padded_frac_filter(double d, std::size_t k_max) {
    auto w = frac_diff_weights(d, k_max).w;
    return w;
}

// Largest k with a non-zero weight; integer d collapses to a finite filter.
std::size_t effective_truncation(double d, std::size_t k_max) {
    const auto w = frac_diff_weights(d, k_max).w;
    std::size_t last = 0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (w[k] != 0.0) {
            last = k;
        }
    }
    return last;
}

}  // namespace

std::string to_string(LinearKind kind) { return kind == LinearKind::Arima ? "ARIMA" : "ARFIMA"; }

bool roots_outside_unit_circle(std::span<const double> c) {
    // Step-down (Schur-Cohn) recursion on a(z) = 1 - sum a_j z^j with a_j = -c_j.
    std::vector<double> a(c.size());
    std::transform(c.begin(), c.end(), a.begin(), [](double v) { return -v; });
    for (std::size_t k = a.size(); k >= 1; --k) {
        const double r = a[k - 1];
        if (!std::isfinite(r) || std::abs(r) >= 1.0) {
            return false;
        }
        const double denom = 1.0 - r * r;
        std::vector<double> next(k - 1);
        for (std::size_t j = 1; j < k; ++j) {
            next[j - 1] = (a[j - 1] + r * a[k - j - 1]) / denom;
        }
        a = std::move(next);
    }
    return true;
}

std::vector<double> difference(std::span<const double> x, int d) {
    if (d < 0) {
        throw Error(ErrorCode::InvalidArgument, "differencing order must be non-negative");
    }
    if (x.size() <= static_cast<std::size_t>(d)) {
        throw Error(ErrorCode::TooShort, "series shorter than differencing order");
    }
    std::vector<double> out(x.begin(), x.end());
    for (int k = 0; k < d; ++k) {
        for (std::size_t i = 0; i + 1 < out.size(); ++i) {
            out[i] = out[i + 1] - out[i];
        }
        out.pop_back();
    }
    return out;
}

FracWeights frac_diff_weights(double d, std::size_t k_max) {
    FracWeights fw;
    fw.d = d;
    fw.w.resize(k_max + 1);
    fw.w[0] = 1.0;
    for (std::size_t k = 1; k <= k_max; ++k) {
        const double kk = static_cast<double>(k);
        fw.w[k] = -fw.w[k - 1] * (d - kk + 1.0) / kk;
    }
    return fw;
}

std::vector<double> frac_difference(std::span<const double> x, double d, std::size_t k_max) {
    if (x.size() <= k_max) {
        throw Error(ErrorCode::TooShort, "series not longer than truncation depth");
    }
    const auto w = frac_diff_weights(d, k_max).w;
    return apply_filter(x, 0.0, w);
}

FittedLinearModel fit_arima_order(std::span<const double> x, ArimaOrder order) {
    require_fit_input(x, static_cast<std::size_t>(order.d) + 1);
    const double mu = mean_of(x);
    auto filter = binomial_filter(order.d);
    const auto z = apply_filter(x, mu, filter);
    auto fit = fit_arma(z, order.p, order.q);
    if (!fit.converged) {
        throw Error(ErrorCode::NonConvergent, "ARIMA(" + std::to_string(order.p) + "," + std::to_string(order.d) +
                                                  "," + std::to_string(order.q) + ")");
    }
    auto m = assemble(LinearKind::Arima, order, 0.0, mu, std::move(filter), std::move(fit));
    m.candidates.push_back({order, 0.0, m.aic, true});
    return m;
}

FittedLinearModel fit_arima(std::span<const double> x, const OrderBounds& bounds) {
    if (bounds.p_max < 0 || bounds.q_max < 0 || bounds.d_max < 0 || bounds.d_max > 2) {
        throw Error(ErrorCode::InvalidArgument, "order bounds out of range");
    }
    require_fit_input(x, static_cast<std::size_t>(bounds.d_max) + 1);
    const double mu = mean_of(x);

    std::vector<CandidateScore> scores;
    FittedLinearModel best;
    bool have_best = false;
    for (int d = 0; d <= bounds.d_max; ++d) {
        auto filter = binomial_filter(d);
        const auto z = apply_filter(x, mu, filter);
        for (int p = 0; p <= bounds.p_max; ++p) {
            for (int q = 0; q <= bounds.q_max; ++q) {
                auto fit = fit_arma(z, p, q);
                const ArimaOrder order{p, d, q};
                scores.push_back({order, 0.0, fit.aic, fit.converged});
                if (fit.converged && (!have_best || fit.aic < best.aic)) {
                    best = assemble(LinearKind::Arima, order, 0.0, mu, filter, std::move(fit));
                    have_best = true;
                }
            }
        }
    }
    if (!have_best) {
        throw Error(ErrorCode::NonConvergent, "no ARIMA candidate converged");
    }
    best.candidates = std::move(scores);
    return best;
}

std::vector<double> ArfimaOptions::default_d_grid() {
    std::vector<double> grid;
    for (int k = -9; k <= 9; ++k) {
        grid.push_back(0.05 * k);
    }
    return grid;
}

FittedLinearModel fit_arfima_order(std::span<const double> x, int p, double frac_d, int q, std::size_t truncation) {
    if (!(frac_d > -0.5 && frac_d < 0.5)) {
        throw Error(ErrorCode::InvalidArgument, "fractional d must lie in (-0.5, 0.5)");
    }
    const std::size_t k_eff = effective_truncation(frac_d, truncation);
    require_fit_input(x, k_eff + 1);
    const double mu = mean_of(x);
    auto filter = padded_frac_filter(frac_d, k_eff);
    const auto z = apply_filter(x, mu, filter);
    auto fit = fit_arma(z, p, q);
    if (!fit.converged) {
        throw Error(ErrorCode::NonConvergent, "ARFIMA candidate did not converge");
    }
    auto m = assemble(LinearKind::Arfima, {p, 0, q}, frac_d, mu, std::move(filter), std::move(fit));
    m.candidates.push_back({m.order, frac_d, m.aic, true});
    return m;
}

FittedLinearModel fit_arfima(std::span<const double> x, const OrderBounds& bounds, const ArfimaOptions& options) {
    if (options.d_grid.empty()) {
        throw Error(ErrorCode::InvalidArgument, "empty fractional d grid");
    }
    for (double d : options.d_grid) {
        if (!(d > -0.5 && d < 0.5)) {
            throw Error(ErrorCode::InvalidArgument, "fractional d grid must lie in (-0.5, 0.5)");
        }
    }
    // A common truncation keeps every candidate on the same effective sample,
    // otherwise AIC values across d would not be comparable.
    std::size_t k_common = 0;
    for (double d : options.d_grid) {
        k_common = std::max(k_common, effective_truncation(d, options.truncation));
    }
    require_fit_input(x, k_common + 1);
    const double mu = mean_of(x);

    const auto make_filter = [&](double d) {
        auto w = frac_diff_weights(d, k_common).w;
        return w;
    };

    std::vector<CandidateScore> scores;
    FittedLinearModel best;
    bool have_best = false;
    for (double d : options.d_grid) {
        auto filter = make_filter(d);
        const auto z = apply_filter(x, mu, filter);
        for (int p = 0; p <= bounds.p_max; ++p) {
            for (int q = 0; q <= bounds.q_max; ++q) {
                auto fit = fit_arma(z, p, q);
                scores.push_back({{p, 0, q}, d, fit.aic, fit.converged});
                if (fit.converged && (!have_best || fit.aic < best.aic)) {
                    best = assemble(LinearKind::Arfima, {p, 0, q}, d, mu, filter, std::move(fit));
                    have_best = true;
                }
            }
        }
    }
    if (!have_best) {
        throw Error(ErrorCode::NonConvergent, "no ARFIMA candidate converged");
    }

    if (options.refine && options.d_grid.size() >= 2) {
        std::vector<double> sorted = options.d_grid;
        std::sort(sorted.begin(), sorted.end());
        double spacing = std::numeric_limits<double>::max();
        for (std::size_t i = 1; i < sorted.size(); ++i) {
            if (sorted[i] > sorted[i - 1]) {
                spacing = std::min(spacing, sorted[i] - sorted[i - 1]);
            }
        }
        const double lo = std::max(best.frac_d - spacing, -0.499);
        const double hi = std::min(best.frac_d + spacing, 0.499);
        const int p = best.order.p;
        const int q = best.order.q;
        const auto aic_at = [&](double d) {
            const auto z = apply_filter(x, mu, make_filter(d));
            const auto fit = fit_arma(z, p, q);
            return fit.converged ? fit.aic : std::numeric_limits<double>::infinity();
        };
        const double d_star = optimize::golden_section(aic_at, lo, hi, 1e-3);
        auto filter = make_filter(d_star);
        const auto z = apply_filter(x, mu, filter);
        auto fit = fit_arma(z, p, q);
        scores.push_back({{p, 0, q}, d_star, fit.aic, fit.converged});
        if (fit.converged && fit.aic < best.aic) {
            best = assemble(LinearKind::Arfima, {p, 0, q}, d_star, mu, std::move(filter), std::move(fit));
        }
    }
    best.candidates = std::move(scores);
    return best;
}

std::vector<double> one_step_forecasts(const FittedLinearModel& m, std::span<const double> x) {
    const std::size_t n = x.size();
    const std::size_t k_max = m.filter.size() - 1;
    const std::size_t start = m.warmup();
    std::vector<double> out(n + 1, kNaN);
    if (n < start) {
        return out;
    }
    const int p = m.order.p;
    const int q = m.order.q;
    // z and e are indexed by series position; entries before their first valid index stay zero.
    std::vector<double> z(n, 0.0);
    std::vector<double> e(n, 0.0);
    for (std::size_t t = k_max; t < n; ++t) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= k_max; ++k) {
            acc += m.filter[k] * (x[t - k] - m.mu);
        }
        z[t] = acc;
    }
    for (std::size_t t = start; t <= n; ++t) {
        double z_hat = 0.0;
        for (int i = 1; i <= p; ++i) {
            z_hat += m.phi[static_cast<std::size_t>(i - 1)] * z[t - static_cast<std::size_t>(i)];
        }
        for (int j = 1; j <= q; ++j) {
            z_hat += m.theta[static_cast<std::size_t>(j - 1)] * e[t - static_cast<std::size_t>(j)];
        }
        double past = 0.0;
        for (std::size_t k = 1; k <= k_max; ++k) {
            past += m.filter[k] * (x[t - k] - m.mu);
        }
        out[t] = m.mu + z_hat - past;
        if (t < n) {
            e[t] = z[t] - z_hat;
        }
    }
    return out;
}

double forecast_one(const FittedLinearModel& m, std::span<const double> history) {
    if (history.size() < m.warmup()) {
        throw Error(ErrorCode::TooShort, "history shorter than model warm-up (" + std::to_string(m.warmup()) + ")");
    }
    return one_step_forecasts(m, history).back();
}

}  // namespace hybridcast
