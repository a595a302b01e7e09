#include "hybridcast/validation.hpp"

#include "hybridcast/backtest.hpp"
#include "hybridcast/error.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

namespace hybridcast {

namespace {

using namespace std::chrono;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t size() const { return end - begin; }
};

Span locate(const ReturnSeries& s, const DateRange& r) { return {s.lower_bound(r.begin), s.lower_bound(r.end)}; }

std::span<const double> values(const ReturnSeries& s, Span sp) {
    return std::span<const double>(s.values()).subspan(sp.begin, sp.size());
}

struct CandidateScores {
    std::array<double, 3> folds{kInf, kInf, kInf};
    double mean = kInf;
    std::string failure;
};

CandidateScores score_candidate(const FoldSplit& split, const ModelFamily& family, const ReturnSeries& series,
                                std::uint64_t seed, std::size_t candidate) {
    CandidateScores out;
    try {
        const Span train = locate(series, split.train);
        FitContext ctx{split.index, FitRole::Validation, split.train, derive_seed(seed, {split.index, candidate})};
        const auto model = family.fit(candidate, values(series, train), ctx);
        // Folds are nested prefixes, so one causal path over the longest
        // fold serves all three.
        const Span longest{train.begin, series.lower_bound(split.val[2].end)};
        const std::size_t first = train.size();
        const std::vector<double> path = model->forecast_path(values(series, longest), first);
        for (std::size_t i = 0; i < 3; ++i) {
            const std::size_t n = series.lower_bound(split.val[i].end) - train.end;
            const std::span<const double> pred(path.data(), n);
            const std::span<const double> actual = values(series, {train.end, train.end + n});
            const double score = rmse(pred, actual);
            if (!std::isfinite(score)) {
                throw Error(ErrorCode::NonConvergent, "non-finite validation forecasts on fold " + std::to_string(i));
            }
            out.folds[i] = score;
        }
        out.mean = (out.folds[0] + out.folds[1] + out.folds[2]) / 3.0;
    } catch (const std::exception& e) {
        out.folds = {kInf, kInf, kInf};
        out.mean = kInf;
        out.failure = e.what();
        if (out.failure.empty()) {
            out.failure = "unknown failure";
        }
    }
    return out;
}

GridSearchReport assemble(const FoldSplit& split, const ModelFamily& family, std::vector<CandidateScores> scores) {
    GridSearchReport report;
    bool any = false;
    double best = kInf;
    for (std::size_t c = 0; c < scores.size(); ++c) {
        report.fold_scores.push_back(scores[c].folds);
        report.mean_scores.push_back(scores[c].mean);
        report.failures.push_back(std::move(scores[c].failure));
        if (report.failures.back().empty() && (!any || scores[c].mean < best)) {
            any = true;
            best = scores[c].mean;
            report.chosen = c;
        }
    }
    if (!any) {
        std::ostringstream msg;
        msg << "window " << split.index << " (test from " << format_date(split.test.begin) << "): all "
            << scores.size() << " candidates failed";
        if (!report.failures.empty()) {
            msg << "; first: " << report.failures.front();
        }
        throw Error(ErrorCode::AllCandidatesFailed, msg.str());
    }
    report.chosen_description = family.describe(report.chosen);
    return report;
}

}  // namespace

WindowPlan WindowPlan::sp500() {
    WindowPlan p;
    p.train_months = 36;
    p.val_months = {8, 16, 24};
    p.test_months = 12;
    p.step_months = 12;
    p.start = parse_date("2002-01-01");
    p.end = parse_date("2023-12-31");
    return p;
}

WindowPlan WindowPlan::bitcoin() {
    WindowPlan p;
    p.train_months = 24;
    p.val_months = {4, 8, 12};
    p.test_months = 6;
    p.step_months = 6;
    p.start = parse_date("2015-01-01");
    p.end = parse_date("2023-12-31");
    return p;
}

void WindowPlan::validate() const {
    if (train_months <= 0 || test_months <= 0 || step_months <= 0) {
        throw Error(ErrorCode::InvalidArgument, "window lengths must be positive");
    }
    if (val_months[0] <= 0 || val_months[0] > val_months[1] || val_months[1] > val_months[2]) {
        throw Error(ErrorCode::InvalidArgument, "validation sections must be positive and non-decreasing");
    }
    if (end < start) {
        throw Error(ErrorCode::InvalidArgument, "plan end precedes start");
    }
}

std::vector<FoldSplit> make_windows(const WindowPlan& plan) {
    plan.validate();
    const Date limit = plan.end + days{1};
    std::vector<FoldSplit> out;
    for (std::size_t k = 0;; ++k) {
        const int base = static_cast<int>(k) * plan.step_months;
        const auto at = [&](int months) { return add_months(plan.start, base + months); };
        FoldSplit s;
        s.index = k;
        s.train = {at(0), at(plan.train_months)};
        for (std::size_t i = 0; i < 3; ++i) {
            s.val[i] = {s.train.end, at(plan.train_months + plan.val_months[i])};
        }
        s.test = {s.val[2].end, at(plan.train_months + plan.val_months[2] + plan.test_months)};
        if (s.test.end > limit) {
            break;
        }
        out.push_back(s);
    }
    return out;
}

std::vector<FoldSplit> make_windows(const WindowPlan& plan, const ReturnSeries& series) {
    auto windows = make_windows(plan);
    if (windows.empty()) {
        throw Error(ErrorCode::InsufficientSpan, "plan from " + format_date(plan.start) + " to " +
                                                     format_date(plan.end) + " is too short for a single window");
    }
    for (const auto& w : windows) {
        const auto check = [&](const DateRange& r, const char* what) {
            if (locate(series, r).size() == 0) {
                throw Error(ErrorCode::InsufficientSpan, std::string("no observations in ") + what + " range " +
                                                             format_date(r.begin) + ".." + format_date(r.end) +
                                                             " of window " + std::to_string(w.index));
            }
        };
        check(w.train, "training");
        for (const auto& v : w.val) {
            check(v, "validation");
        }
        check(w.test, "test");
    }
    return windows;
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) {
    const auto mix = [](std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    };
    std::uint64_t h = mix(base);
    for (const auto p : parts) {
        h = mix(h ^ p);
    }
    return h;
}

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& body) {
    std::vector<std::exception_ptr> errors(n);
    const std::size_t workers = std::min(std::max<std::size_t>(jobs, 1), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        body(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

GridSearchReport grid_search(const FoldSplit& split, const ModelFamily& family, const ReturnSeries& series,
                             std::uint64_t seed, std::size_t jobs) {
    const std::size_t grid = family.grid_size();
    if (grid == 0) {
        throw Error(ErrorCode::InvalidArgument, "empty hyperparameter grid");
    }
    std::vector<CandidateScores> scores(grid);
    parallel_for(grid, jobs, [&](std::size_t c) { scores[c] = score_candidate(split, family, series, seed, c); });
    return assemble(split, family, std::move(scores));
}

WalkForwardResult run_walk_forward(const WindowPlan& plan, const ModelFamily& family, const ReturnSeries& series,
                                   const WalkForwardOptions& options) {
    const auto windows = make_windows(plan, series);
    const std::size_t grid = family.grid_size();
    if (grid == 0) {
        throw Error(ErrorCode::InvalidArgument, "empty hyperparameter grid");
    }
    const std::size_t nw = windows.size();

    std::vector<CandidateScores> scores(nw * grid);
    std::vector<double> search_seconds(nw * grid, 0.0);
    parallel_for(nw * grid, options.jobs, [&](std::size_t task) {
        const auto t0 = steady_clock::now();
        scores[task] = score_candidate(windows[task / grid], family, series, options.seed, task % grid);
        search_seconds[task] = duration<double>(steady_clock::now() - t0).count();
    });

    std::vector<WindowOutcome> outcomes(nw);
    for (std::size_t w = 0; w < nw; ++w) {
        outcomes[w].split = windows[w];
        std::vector<CandidateScores> slice(scores.begin() + static_cast<std::ptrdiff_t>(w * grid),
                                           scores.begin() + static_cast<std::ptrdiff_t>((w + 1) * grid));
        outcomes[w].report = assemble(windows[w], family, std::move(slice));
        for (std::size_t c = 0; c < grid; ++c) {
            outcomes[w].seconds += search_seconds[w * grid + c];
        }
    }

    const auto& dates = series.dates();
    std::vector<std::vector<double>> paths(nw);
    std::vector<Span> emitted(nw);
    std::vector<LeakageAudit> audits(nw);
    parallel_for(nw, options.jobs, [&](std::size_t w) {
        const auto t0 = steady_clock::now();
        const FoldSplit& split = windows[w];
        const std::size_t chosen = outcomes[w].report.chosen;
        const Span fit = locate(series, split.fit_range());
        FitContext ctx{split.index, FitRole::Final, split.fit_range(),
                       derive_seed(options.seed, {split.index, chosen, 0xF17A1ULL})};
        const auto model = family.fit(chosen, values(series, fit), ctx);

        // A later window takes over where its test range starts.
        const Date stop = w + 1 < nw ? std::min(split.test.end, windows[w + 1].test.begin) : split.test.end;
        const Span out{series.lower_bound(split.test.begin), series.lower_bound(stop)};
        const Span history{fit.begin, out.end};
        const std::size_t first = out.begin - fit.begin;
        paths[w] = model->forecast_path(values(series, history), first);
        emitted[w] = out;
        if (paths[w].size() != out.size()) {
            throw Error(ErrorCode::MisalignedForecast, "forecast path length does not match the test range");
        }

        if (options.audit) {
            LeakageAudit& a = audits[w];
            const Date last_fit = dates[fit.end - 1];
            for (std::size_t j = 0; j < out.size(); ++j) {
                const std::size_t target = out.begin + j;
                const Date when = dates[target];
                const std::span<const double> prefix = values(series, {fit.begin, target});
                const double again = model->forecast_next(prefix);
                const double diff = std::abs(again - paths[w][j]);
                const Date last_seen = dates[target - 1];
                ++a.checked;
                const bool ok = last_fit < when && last_seen < when &&
                                (diff <= 1e-12 * std::max(1.0, std::abs(paths[w][j])) ||
                                 (std::isnan(again) && std::isnan(paths[w][j])));
                a.max_abs_diff = std::max(a.max_abs_diff, std::isnan(diff) ? 0.0 : diff);
                if (!ok) {
                    ++a.violations;
                    if (a.messages.size() < 5) {
                        std::ostringstream msg;
                        msg << "forecast for " << format_date(when) << ": fit data through " << format_date(last_fit)
                            << ", history through " << format_date(last_seen) << ", prefix/bulk diff " << diff;
                        a.messages.push_back(msg.str());
                    }
                }
            }
        }
        outcomes[w].forecasts = out.size();
        outcomes[w].seconds += duration<double>(steady_clock::now() - t0).count();
    });

    WalkForwardResult result;
    std::vector<Date> fd;
    std::vector<double> fv;
    std::vector<double> av;
    for (std::size_t w = 0; w < nw; ++w) {
        for (std::size_t j = 0; j < emitted[w].size(); ++j) {
            fd.push_back(dates[emitted[w].begin + j]);
            fv.push_back(paths[w][j]);
            av.push_back(series[emitted[w].begin + j]);
        }
        if (options.audit) {
            result.audit.checked += audits[w].checked;
            result.audit.violations += audits[w].violations;
            result.audit.max_abs_diff = std::max(result.audit.max_abs_diff, audits[w].max_abs_diff);
            for (auto& m : audits[w].messages) {
                if (result.audit.messages.size() < 10) {
                    result.audit.messages.push_back(std::move(m));
                }
            }
        }
    }
    result.actuals = ReturnSeries(fd, std::move(av));
    result.forecasts = ReturnSeries(std::move(fd), std::move(fv));
    result.windows = std::move(outcomes);
    return result;
}

}  // namespace hybridcast
