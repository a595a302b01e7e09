#include "hybridcast/experiment/methods.hpp"

#include "hybridcast/error.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>

namespace hybridcast::experiment {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string normalize(std::string_view text) {
    std::string s;
    for (const char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            s.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
        }
    }
    return s;
}

bool parse_learner(const std::string& s, LearnerKind& out) {
    if (s == "SVM" || s == "SVR") {
        out = LearnerKind::Svr;
    } else if (s == "XGBOOST" || s == "GBT" || s == "XGB") {
        out = LearnerKind::Gbt;
    } else if (s == "LSTM") {
        out = LearnerKind::Lstm;
    } else {
        return false;
    }
    return true;
}

bool parse_linear(const std::string& s, LinearKind& out) {
    if (s == "ARIMA") {
        out = LinearKind::Arima;
    } else if (s == "ARFIMA") {
        out = LinearKind::Arfima;
    } else {
        return false;
    }
    return true;
}

std::vector<double> tail(const std::vector<double>& path, std::size_t first) {
    return std::vector<double>(path.begin() + static_cast<std::ptrdiff_t>(first), path.end() - 1);
}

class LinearForecaster final : public FittedForecaster {
public:
    explicit LinearForecaster(std::shared_ptr<const FittedLinearModel> m) : m_(std::move(m)) {}

    std::vector<double> forecast_path(std::span<const double> history, std::size_t first) const override {
        return tail(one_step_forecasts(*m_, history), first);
    }
    double forecast_next(std::span<const double> prefix) const override {
        return prefix.size() < m_->warmup() ? kNaN : forecast_one(*m_, prefix);
    }

private:
    std::shared_ptr<const FittedLinearModel> m_;
};

class LearnerForecaster final : public FittedForecaster {
public:
    explicit LearnerForecaster(LearnerOnlyModel m) : m_(std::move(m)) {}

    std::vector<double> forecast_path(std::span<const double> history, std::size_t first) const override {
        return tail(learner_forecasts(m_, history, first), first);
    }
    double forecast_next(std::span<const double> prefix) const override {
        return prefix.size() < m_.min_history() ? kNaN : forecast_learner(m_, prefix);
    }

private:
    LearnerOnlyModel m_;
};

class HybridForecaster final : public FittedForecaster {
public:
    explicit HybridForecaster(HybridModel m) : m_(std::move(m)) {}

    std::vector<double> forecast_path(std::span<const double> history, std::size_t first) const override {
        return tail(hybrid_forecasts(m_, history, first), first);
    }
    double forecast_next(std::span<const double> prefix) const override {
        return prefix.size() < m_.min_history() ? kNaN : forecast_hybrid(m_, prefix);
    }

private:
    HybridModel m_;
};

class LinearFamily final : public ModelFamily {
public:
    LinearFamily(LinearKind kind, std::shared_ptr<LinearCache> cache) : kind_(kind), cache_(std::move(cache)) {}

    std::size_t grid_size() const override { return 1; }
    std::string describe(std::size_t) const override { return to_string(kind_) + "(aic)"; }
    std::unique_ptr<FittedForecaster> fit(std::size_t, std::span<const double> train,
                                          const FitContext& ctx) const override {
        return std::make_unique<LinearForecaster>(cache_->get(kind_, ctx, train));
    }

private:
    LinearKind kind_;
    std::shared_ptr<LinearCache> cache_;
};

// Candidates enumerate lags (outer) x learner grid (inner).
class LearnerGridFamily : public ModelFamily {
public:
    LearnerGridFamily(LearnerKind kind, const GridConfig& grids)
        : lags_(grids.lags), params_(learner_grid(kind, grids)) {}

    std::size_t grid_size() const override { return lags_.size() * params_.size(); }
    std::string describe(std::size_t c) const override {
        return "lags=" + std::to_string(lag(c)) + " " + params_[c % params_.size()].describe();
    }

protected:
    std::size_t lag(std::size_t c) const { return lags_[c / params_.size()]; }
    LearnerParams params(std::size_t c, std::uint64_t seed) const {
        LearnerParams p = params_[c % params_.size()];
        p.lstm.seed = seed;
        return p;
    }

private:
    std::vector<std::size_t> lags_;
    std::vector<LearnerParams> params_;
};

class LearnerFamily final : public LearnerGridFamily {
public:
    using LearnerGridFamily::LearnerGridFamily;

    std::unique_ptr<FittedForecaster> fit(std::size_t c, std::span<const double> train,
                                          const FitContext& ctx) const override {
        return std::make_unique<LearnerForecaster>(fit_learner_only(params(c, ctx.seed), lag(c), train));
    }
};

class HybridFamily final : public LearnerGridFamily {
public:
    HybridFamily(const MethodSpec& spec, const GridConfig& grids, std::shared_ptr<LinearCache> cache)
        : LearnerGridFamily(spec.learner, grids), linear_(spec.linear), mode_(spec.mode), cache_(std::move(cache)) {}

    std::unique_ptr<FittedForecaster> fit(std::size_t c, std::span<const double> train,
                                          const FitContext& ctx) const override {
        const auto linear = cache_->get(linear_, ctx, train);
        return std::make_unique<HybridForecaster>(fit_hybrid(*linear, params(c, ctx.seed), mode_, lag(c), train));
    }

private:
    LinearKind linear_;
    HybridMode mode_;
    std::shared_ptr<LinearCache> cache_;
};

}  // namespace

std::string MethodSpec::label() const {
    switch (kind) {
        case MethodKind::BuyAndHold: return "Buy&Hold";
        case MethodKind::Linear: return to_string(linear);
        case MethodKind::Learner: return std::string(to_string(learner));
        case MethodKind::Hybrid: return hybrid_label(linear, learner, mode);
    }
    return "?";
}

MethodSpec parse_method(std::string_view text) {
    const std::string s = normalize(text);
    MethodSpec m;
    if (s == "BUY&HOLD" || s == "B&H" || s == "BUYANDHOLD") {
        m.kind = MethodKind::BuyAndHold;
        return m;
    }
    if (parse_linear(s, m.linear)) {
        m.kind = MethodKind::Linear;
        return m;
    }
    if (parse_learner(s, m.learner)) {
        m.kind = MethodKind::Learner;
        return m;
    }
    const auto dash = s.find('-');
    const auto open = s.find('(');
    if (dash != std::string::npos && open != std::string::npos && open > dash && s.size() == open + 3 &&
        s.back() == ')' && parse_learner(s.substr(0, dash), m.learner) &&
        parse_linear(s.substr(dash + 1, open - dash - 1), m.linear) && (s[open + 1] == '1' || s[open + 1] == '2')) {
        m.kind = MethodKind::Hybrid;
        m.mode = s[open + 1] == '1' ? HybridMode::Feature : HybridMode::Residual;
        return m;
    }
    throw Error(ErrorCode::Config, "unknown method label '" + std::string(text) + "'");
}

std::vector<std::string> default_methods() {
    std::vector<std::string> out{"Buy&Hold", "ARIMA", "ARFIMA"};
    for (const auto learner : {LearnerKind::Svr, LearnerKind::Gbt, LearnerKind::Lstm}) {
        out.emplace_back(to_string(learner));
        for (const auto mode : {HybridMode::Feature, HybridMode::Residual}) {
            for (const auto linear : {LinearKind::Arima, LinearKind::Arfima}) {
                out.push_back(hybrid_label(linear, learner, mode));
            }
        }
    }
    return out;
}

std::vector<LearnerParams> learner_grid(LearnerKind kind, const GridConfig& g) {
    std::vector<LearnerParams> out;
    LearnerParams base;
    base.kind = kind;
    switch (kind) {
        case LearnerKind::Svr:
            for (const double c : g.svr_c) {
                for (const double eps : g.svr_epsilon) {
                    for (const auto k : g.svr_kernels) {
                        LearnerParams p = base;
                        p.svr.C = c;
                        p.svr.epsilon = eps;
                        p.svr.kernel.type = k;
                        p.svr.kernel.degree = g.svr_degree;
                        out.push_back(p);
                    }
                }
            }
            break;
        case LearnerKind::Gbt:
            for (const auto trees : g.gbt_trees) {
                for (const int depth : g.gbt_depth) {
                    for (const double lr : g.gbt_learning_rate) {
                        LearnerParams p = base;
                        p.gbt.trees = trees;
                        p.gbt.max_depth = depth;
                        p.gbt.learning_rate = lr;
                        p.gbt.lambda = g.gbt_lambda;
                        p.gbt.gamma_split = g.gbt_gamma;
                        out.push_back(p);
                    }
                }
            }
            break;
        case LearnerKind::Lstm:
            for (const auto hidden : g.lstm_hidden) {
                for (const auto seq : g.lstm_sequence) {
                    for (const auto epochs : g.lstm_epochs) {
                        for (const double lr : g.lstm_learning_rate) {
                            LearnerParams p = base;
                            p.lstm.hidden_size = hidden;
                            p.lstm.sequence_length = seq;
                            p.lstm.epochs = epochs;
                            p.lstm.learning_rate = lr;
                            p.lstm.batch_size = g.lstm_batch;
                            out.push_back(p);
                        }
                    }
                }
            }
            break;
    }
    return out;
}

std::shared_ptr<const FittedLinearModel> LinearCache::get(LinearKind kind, const FitContext& ctx,
                                                          std::span<const double> train) {
    std::shared_ptr<Entry> entry;
    {
        std::lock_guard lock(mutex_);
        auto& slot = entries_[Key{static_cast<int>(kind), ctx.window, static_cast<int>(ctx.role), train.data(),
                                  train.size()}];
        if (!slot) {
            slot = std::make_shared<Entry>();
        }
        entry = slot;
    }
    std::call_once(entry->once, [&] {
        try {
            entry->model = std::make_shared<const FittedLinearModel>(fit_linear(kind, train, bounds_, arfima_));
        } catch (...) {
            entry->error = std::current_exception();
        }
    });
    if (entry->error) {
        std::rethrow_exception(entry->error);
    }
    return entry->model;
}

std::unique_ptr<ModelFamily> make_family(const MethodSpec& spec, const GridConfig& grids,
                                         std::shared_ptr<LinearCache> cache) {
    switch (spec.kind) {
        case MethodKind::Linear: return std::make_unique<LinearFamily>(spec.linear, std::move(cache));
        case MethodKind::Learner: return std::make_unique<LearnerFamily>(spec.learner, grids);
        case MethodKind::Hybrid: return std::make_unique<HybridFamily>(spec, grids, std::move(cache));
        case MethodKind::BuyAndHold: break;
    }
    throw Error(ErrorCode::InvalidArgument, "Buy&Hold has no model family");
}

}  // namespace hybridcast::experiment
