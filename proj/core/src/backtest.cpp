#include "hybridcast/backtest.hpp"

#include "hybridcast/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hybridcast {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_lengths(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty()) {
        throw Error(ErrorCode::LengthMismatch, "series lengths " + std::to_string(a.size()) + " and " +
                                                   std::to_string(b.size()) + " (need equal and non-empty)");
    }
}

double sample_std(std::span<const double> x) {
    if (x.size() < 2) {
        return 0.0;
    }
    double mean = 0.0;
    for (const double v : x) {
        mean += v;
    }
    mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (const double v : x) {
        ss += (v - mean) * (v - mean);
    }
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

Date previous_date(const ReturnSeries& asset, std::size_t index, Date first) {
    return index > 0 ? asset.dates()[index - 1] : first - std::chrono::days{1};
}

void fill_equity(BacktestResult& r) {
    r.equity.assign(1, 1.0);
    r.equity.reserve(r.returns.size() + 1);
    for (const double x : r.returns) {
        r.equity.push_back(r.equity.back() * (1.0 + x));
    }
}

}  // namespace

std::string_view to_string(StrategyMode mode) noexcept {
    return mode == StrategyMode::LongShort ? "long_short" : "long_only";
}

int signal(double forecast, double c) noexcept {
    if (forecast > c) {
        return 1;
    }
    if (forecast < -c) {
        return -1;
    }
    return 0;
}

SignalSeries signals(const ReturnSeries& forecasts, double c) {
    if (!(c >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "signal threshold must be non-negative");
    }
    SignalSeries s;
    s.dates = forecasts.dates();
    s.values.reserve(forecasts.size());
    for (const double f : forecasts.values()) {
        s.values.push_back(signal(f, c));
    }
    return s;
}

BacktestResult run_strategy(const ReturnSeries& asset, const SignalSeries& sig, const StrategyConfig& cfg) {
    if (!(cfg.tc >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "transaction cost must be non-negative");
    }
    if (sig.dates.size() != sig.values.size()) {
        throw Error(ErrorCode::MisalignedSeries, "signal dates and values differ in length");
    }
    BacktestResult r;
    r.trading_days = cfg.trading_days;
    r.dates = sig.dates;
    r.positions.reserve(sig.values.size());
    r.returns.reserve(sig.values.size());
    double equity = 1.0;
    int pos = 0;
    for (std::size_t i = 0; i < sig.values.size(); ++i) {
        const Date d = sig.dates[i];
        const std::size_t k = asset.lower_bound(d);
        if (k >= asset.size() || asset.dates()[k] != d) {
            throw Error(ErrorCode::MisalignedSeries, "no asset return on signal date " + format_date(d));
        }
        if (i == 0) {
            r.origin = previous_date(asset, k, d);
        }
        int target = pos;
        const int s = sig.values[i];
        if (cfg.mode == StrategyMode::LongShort) {
            if (s != 0) {
                target = s;
            }
        } else if (s == 1) {
            target = 1;
        } else if (s == -1) {
            target = 0;
        }
        const double turnover = std::abs(target - pos);
        const double cost = cfg.tc * turnover;
        if (target != pos) {
            r.trades.push_back({d, pos, target, cost * equity});
        }
        const double ret = target * asset[k] - cost;
        equity *= 1.0 + ret;
        pos = target;
        r.positions.push_back(pos);
        r.returns.push_back(ret);
    }
    fill_equity(r);
    compute_metrics(r);
    r.metrics.rmse = kNaN;
    r.metrics.mae = kNaN;
    return r;
}

BacktestResult buy_and_hold(const ReturnSeries& asset, Date from, Date to, int trading_days) {
    BacktestResult r;
    r.trading_days = trading_days;
    const std::size_t b = asset.lower_bound(from);
    const std::size_t e = asset.lower_bound(to + std::chrono::days{1});
    if (b >= e) {
        throw Error(ErrorCode::InsufficientSpan, "no asset returns between " + format_date(from) + " and " +
                                                     format_date(to));
    }
    r.origin = previous_date(asset, b, asset.dates()[b]);
    for (std::size_t k = b; k < e; ++k) {
        r.dates.push_back(asset.dates()[k]);
        r.positions.push_back(1);
        r.returns.push_back(asset[k]);
    }
    fill_equity(r);
    compute_metrics(r);
    r.metrics.rmse = kNaN;
    r.metrics.mae = kNaN;
    return r;
}

BacktestResult portfolio(const BacktestResult& a, const BacktestResult& b) {
    if (a.dates.empty() || b.dates.empty()) {
        throw Error(ErrorCode::InsufficientSpan, "portfolio legs must be non-empty");
    }
    const Date start = std::max(a.origin, b.origin);
    const Date stop = std::min(a.dates.back(), b.dates.back());
    if (stop <= start) {
        throw Error(ErrorCode::InsufficientSpan, "portfolio legs do not overlap");
    }
    BacktestResult r;
    r.trading_days = 365;
    r.origin = start;
    std::size_t i = static_cast<std::size_t>(std::upper_bound(a.dates.begin(), a.dates.end(), start) - a.dates.begin());
    std::size_t j = static_cast<std::size_t>(std::upper_bound(b.dates.begin(), b.dates.end(), start) - b.dates.begin());
    while (true) {
        const bool ha = i < a.dates.size() && a.dates[i] <= stop;
        const bool hb = j < b.dates.size() && b.dates[j] <= stop;
        if (!ha && !hb) {
            break;
        }
        Date d;
        if (ha && hb) {
            d = std::min(a.dates[i], b.dates[j]);
        } else {
            d = ha ? a.dates[i] : b.dates[j];
        }
        double ra = 0.0;
        double rb = 0.0;
        if (ha && a.dates[i] == d) {
            ra = a.returns[i++];
        }
        if (hb && b.dates[j] == d) {
            rb = b.returns[j++];
        }
        r.dates.push_back(d);
        r.positions.push_back(0);
        r.returns.push_back(0.5 * (ra + rb));
    }
    fill_equity(r);
    compute_metrics(r);
    r.metrics.rmse = kNaN;
    r.metrics.mae = kNaN;
    return r;
}

double rmse(std::span<const double> pred, std::span<const double> actual) {
    check_lengths(pred, actual);
    double ss = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double e = pred[i] - actual[i];
        ss += e * e;
    }
    return std::sqrt(ss / static_cast<double>(pred.size()));
}

double mae(std::span<const double> pred, std::span<const double> actual) {
    check_lengths(pred, actual);
    double s = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        s += std::abs(pred[i] - actual[i]);
    }
    return s / static_cast<double>(pred.size());
}

double arc(double v_start, double v_end, Date from, Date to) {
    const double years = years_between(from, to);
    if (!(years > 0.0) || !(v_start > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "ARC needs a positive span and starting value");
    }
    return std::pow(v_end / v_start, 1.0 / years) - 1.0;
}

double asd(std::span<const double> daily_returns, int trading_days) {
    return std::sqrt(static_cast<double>(trading_days)) * sample_std(daily_returns);
}

double downside_asd(std::span<const double> daily_returns, int trading_days) {
    std::vector<double> neg;
    for (const double r : daily_returns) {
        if (r < 0.0) {
            neg.push_back(r);
        }
    }
    return asd(neg, trading_days);
}

double max_drawdown(std::span<const double> equity) {
    double peak = 0.0;
    double md = 0.0;
    for (const double v : equity) {
        peak = std::max(peak, v);
        if (peak > 0.0) {
            md = std::max(md, (peak - v) / peak);
        }
    }
    return md;
}

double information_ratio(double arc, double asd) { return asd > 0.0 ? arc / asd : 0.0; }

double information_ratio_star(double arc, double asd, double md) {
    const double denom = asd * md;
    if (!(denom > 0.0)) {
        return 0.0;
    }
    const double sign = arc > 0.0 ? 1.0 : (arc < 0.0 ? -1.0 : 0.0);
    return arc * arc * sign / denom;
}

double sortino_ratio(double arc, double downside) { return downside > 0.0 ? arc / downside : 0.0; }

void compute_metrics(BacktestResult& r) {
    Metrics& m = r.metrics;
    if (r.dates.empty()) {
        m = Metrics{};
        return;
    }
    m.arc = arc(r.equity.front(), r.equity.back(), r.origin, r.dates.back());
    m.asd = asd(r.returns, r.trading_days);
    m.md = max_drawdown(r.equity);
    m.ir = information_ratio(m.arc, m.asd);
    m.ir_star_degenerate = !(m.asd * m.md > 0.0);
    m.ir_star = information_ratio_star(m.arc, m.asd, m.md);
    m.sortino = sortino_ratio(m.arc, downside_asd(r.returns, r.trading_days));
}

}  // namespace hybridcast
