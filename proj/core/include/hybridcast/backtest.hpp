#pragma once

#include "hybridcast/date.hpp"
#include "hybridcast/timeseries.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace hybridcast {

enum class StrategyMode { LongShort, LongOnly };

std::string_view to_string(StrategyMode mode) noexcept;

struct StrategyConfig {
    StrategyMode mode = StrategyMode::LongShort;
    double tc = 0.00005;  // fraction of equity per unit position change
    int trading_days = 252;
};

struct SignalSeries {
    std::vector<Date> dates;
    std::vector<int> values;  // -1, 0, +1
};

/// +1 above c, -1 below -c, 0 inside [-c, c].
int signal(double forecast, double c) noexcept;
SignalSeries signals(const ReturnSeries& forecasts, double c);

struct Trade {
    Date date;
    int from = 0;
    int to = 0;
    double cost = 0.0;  // in equity units
};

struct Metrics {
    double rmse = 0.0;  // NaN when there are no forecasts (Buy&Hold, portfolios)
    double mae = 0.0;
    double arc = 0.0;
    double asd = 0.0;
    double md = 0.0;
    double ir = 0.0;
    double ir_star = 0.0;
    double sortino = 0.0;
    bool ir_star_degenerate = false;
};

/// Daily strategy path. returns[i], positions[i] and equity[i + 1] belong to
/// dates[i]; equity[0] = 1 sits at `origin`, the preceding trading day.
struct BacktestResult {
    Date origin;
    std::vector<Date> dates;
    std::vector<int> positions;
    std::vector<double> returns;
    std::vector<double> equity;
    std::vector<Trade> trades;
    Metrics metrics;
    int trading_days = 252;
};

/// The position for day t is set from the signal dated t (a forecast made
/// at the close of t-1) and earns that day's simple return:
///   ret_t = pos_t * R_t - tc * |pos_t - pos_{t-1}|,  pos before the first day = 0.
/// `asset` must contain every signal date. Throws Error(MisalignedSeries).
BacktestResult run_strategy(const ReturnSeries& asset, const SignalSeries& sig, const StrategyConfig& cfg);

/// Fully invested over `dates` of `asset` in [from, to], no costs.
BacktestResult buy_and_hold(const ReturnSeries& asset, Date from, Date to, int trading_days);

/// Daily-rebalanced 50/50 combination over the overlapping span; a leg that
/// does not trade on a date contributes a zero return. T = 365.
BacktestResult portfolio(const BacktestResult& a, const BacktestResult& b);

double rmse(std::span<const double> pred, std::span<const double> actual);
double mae(std::span<const double> pred, std::span<const double> actual);

/// (v_end / v_start)^(1 / years) - 1 with 365.25-day years.
double arc(double v_start, double v_end, Date from, Date to);
double asd(std::span<const double> daily_returns, int trading_days);
double downside_asd(std::span<const double> daily_returns, int trading_days);
double max_drawdown(std::span<const double> equity);

double information_ratio(double arc, double asd);
/// arc^2 sign(arc) / (asd md); 0 when asd * md == 0.
double information_ratio_star(double arc, double asd, double md);
double sortino_ratio(double arc, double downside);

/// Recomputes every equity-based indicator (rmse/mae untouched).
void compute_metrics(BacktestResult& r);

}  // namespace hybridcast
