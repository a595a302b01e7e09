#pragma once

#include "hybridcast/econometric.hpp"
#include "hybridcast/experiment/config.hpp"
#include "hybridcast/hybrid.hpp"
#include "hybridcast/learners/regressor.hpp"
#include "hybridcast/validation.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace hybridcast::experiment {

enum class MethodKind { BuyAndHold, Linear, Learner, Hybrid };

struct MethodSpec {
    MethodKind kind = MethodKind::BuyAndHold;
    LinearKind linear = LinearKind::Arima;
    LearnerKind learner = LearnerKind::Svr;
    HybridMode mode = HybridMode::Feature;

    /// Canonical table label ("Buy&Hold", "ARIMA", "SVM", "SVM-ARIMA (1)").
    std::string label() const;
};

/// Case-insensitive; accepts "SVM-ARIMA(1)", "svr-arima (1)", "XGBoost", "GBT", "B&H".
/// Throws Error(Config).
MethodSpec parse_method(std::string_view text);

/// Buy&Hold followed by the seventeen model rows in table order.
std::vector<std::string> default_methods();

/// Learner hyperparameter combinations in grid order.
std::vector<LearnerParams> learner_grid(LearnerKind kind, const GridConfig& grids);

/// Shares linear fits between methods of one asset: the fit on a given
/// training span is computed once and reused.
class LinearCache {
public:
    LinearCache(OrderBounds bounds, ArfimaOptions arfima) : bounds_(bounds), arfima_(std::move(arfima)) {}

    std::shared_ptr<const FittedLinearModel> get(LinearKind kind, const FitContext& ctx,
                                                 std::span<const double> train);

private:
    struct Entry {
        std::once_flag once;
        std::shared_ptr<const FittedLinearModel> model;
        std::exception_ptr error;
    };
    using Key = std::tuple<int, std::size_t, int, const double*, std::size_t>;

    OrderBounds bounds_;
    ArfimaOptions arfima_;
    std::mutex mutex_;
    std::map<Key, std::shared_ptr<Entry>> entries_;
};

/// The model family behind a (non Buy&Hold) method.
std::unique_ptr<ModelFamily> make_family(const MethodSpec& spec, const GridConfig& grids,
                                         std::shared_ptr<LinearCache> cache);

}  // namespace hybridcast::experiment
