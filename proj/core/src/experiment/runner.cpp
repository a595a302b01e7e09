#include "hybridcast/experiment/runner.hpp"

#include "hybridcast/error.hpp"

#include <chrono>
#include <cstdio>
#include <map>
#include <ostream>

namespace hybridcast::experiment {

namespace {

using steady = std::chrono::steady_clock;

double since(steady::time_point t0) { return std::chrono::duration<double>(steady::now() - t0).count(); }

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

MethodResult run_method(const MethodSpec& spec, const AssetResult& asset, const ExperimentConfig& cfg,
                        const std::shared_ptr<LinearCache>& cache) {
    MethodResult out;
    out.spec = spec;
    out.label = spec.label();
    const auto t0 = steady::now();
    try {
        if (spec.kind == MethodKind::BuyAndHold) {
            const Date from = asset.windows.front().test.begin;
            const Date to = asset.windows.back().test.end - std::chrono::days{1};
            const auto bh = buy_and_hold(asset.simple_returns, from, to, asset.asset.trading_days);
            out.backtests = {bh, bh};
        } else {
            const auto family = make_family(spec, cfg.grids, cache);
            WalkForwardOptions opt;
            opt.seed = derive_seed(cfg.seed, {fnv1a(asset.asset.name), fnv1a(out.label)});
            opt.jobs = cfg.jobs;
            opt.audit = cfg.audit;
            auto wf = run_walk_forward(asset.asset.plan, *family, asset.log_returns, opt);
            const auto sig = signals(wf.forecasts, asset.asset.tc);
            const double e_rmse = rmse(wf.forecasts.values(), wf.actuals.values());
            const double e_mae = mae(wf.forecasts.values(), wf.actuals.values());
            for (std::size_t s = 0; s < kStrategies.size(); ++s) {
                StrategyConfig sc{kStrategies[s], asset.asset.tc, asset.asset.trading_days};
                out.backtests[s] = run_strategy(asset.simple_returns, sig, sc);
                out.backtests[s].metrics.rmse = e_rmse;
                out.backtests[s].metrics.mae = e_mae;
            }
            if (cfg.audit && !wf.audit.passed()) {
                std::string msg = "leakage audit failed (" + std::to_string(wf.audit.violations) + " of " +
                                  std::to_string(wf.audit.checked) + ")";
                if (!wf.audit.messages.empty()) {
                    msg += ": " + wf.audit.messages.front();
                }
                throw Error(ErrorCode::MisalignedForecast, msg);
            }
            out.walk_forward = std::move(wf);
        }
    } catch (const std::exception& e) {
        out.error = e.what();
        out.walk_forward.reset();
    }
    out.seconds = since(t0);
    return out;
}

}  // namespace

std::string fnv1a_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(bytes)));
    return buf;
}

std::size_t RunResult::failures() const {
    std::size_t n = 0;
    for (const auto& a : assets) {
        for (const auto& m : a.methods) {
            n += m.failed() ? 1 : 0;
        }
    }
    return n;
}

RunResult run_experiment(const ExperimentConfig& cfg, std::ostream* log) {
    if (cfg.methods.empty()) {
        throw Error(ErrorCode::Config, "method list is empty");
    }
    std::vector<MethodSpec> specs;
    for (const auto& m : cfg.methods) {
        specs.push_back(parse_method(m));
    }
    const auto t_run = steady::now();
    RunResult result;
    for (const auto& asset_cfg : cfg.assets) {
        AssetResult asset;
        asset.asset = asset_cfg;
        const PriceSeries prices = ingest_csv(asset_cfg.data, asset_cfg.csv);
        asset.log_returns = log_returns(prices);
        asset.simple_returns = simple_returns(prices);
        asset.windows = make_windows(asset_cfg.plan, asset.log_returns);
        const auto in_plan = asset.log_returns.slice(asset.log_returns.lower_bound(asset_cfg.plan.start),
                                                     asset.log_returns.lower_bound(asset_cfg.plan.end +
                                                                                   std::chrono::days{1}));
        asset.stats = describe(in_plan.values());
        if (log != nullptr) {
            *log << asset_cfg.name << ": " << prices.size() << " prices, " << asset.windows.size() << " windows\n";
        }
        auto cache = std::make_shared<LinearCache>(cfg.bounds, cfg.arfima);
        for (const auto& spec : specs) {
            asset.methods.push_back(run_method(spec, asset, cfg, cache));
            if (log != nullptr) {
                const auto& m = asset.methods.back();
                *log << "  " << m.label << ": " << (m.failed() ? "FAILED " + m.error : std::string("ok")) << " ("
                     << m.seconds << " s)\n"
                     << std::flush;
            }
        }
        result.assets.push_back(std::move(asset));
    }

    if (result.assets.size() == 2) {
        const auto& a = result.assets[0];
        const auto& b = result.assets[1];
        for (const auto& ma : a.methods) {
            if (ma.failed()) {
                continue;
            }
            for (const auto& mb : b.methods) {
                if (mb.label != ma.label || mb.failed()) {
                    continue;
                }
                PortfolioRow row;
                row.label = ma.label;
                for (std::size_t s = 0; s < kStrategies.size(); ++s) {
                    row.backtests[s] = portfolio(ma.backtests[s], mb.backtests[s]);
                }
                result.portfolio.push_back(std::move(row));
                break;
            }
        }
    }
    result.seconds = since(t_run);
    return result;
}

}  // namespace hybridcast::experiment
