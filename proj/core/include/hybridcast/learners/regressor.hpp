#pragma once

#include "hybridcast/learners/features.hpp"
#include "hybridcast/learners/gbt.hpp"
#include "hybridcast/learners/lstm.hpp"
#include "hybridcast/learners/svr.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

namespace hybridcast {

enum class LearnerKind { Svr, Gbt, Lstm };

std::string_view to_string(LearnerKind kind) noexcept;

struct LearnerParams {
    LearnerKind kind = LearnerKind::Svr;
    SvrParams svr;
    GbtParams gbt;
    LstmParams lstm;

    std::string describe() const;
};

/// Common interface for the nonlinear learners. A prediction for row r of a
/// feature matrix may read rows r - context_rows() + 1 .. r.
class Regressor {
public:
    virtual ~Regressor() = default;

    virtual void fit(const FeatureMatrix& x) = 0;
    virtual double predict(const FeatureMatrix& x, std::size_t row) const = 0;
    virtual std::size_t context_rows() const noexcept { return 1; }
    virtual std::size_t input_dim() const noexcept = 0;
    virtual std::string kind() const = 0;
};

std::unique_ptr<Regressor> make_regressor(const LearnerParams& params);

class SvrRegressor final : public Regressor {
public:
    explicit SvrRegressor(SvrParams params) : params_(params) {}
    void fit(const FeatureMatrix& x) override;
    double predict(const FeatureMatrix& x, std::size_t row) const override;
    std::size_t input_dim() const noexcept override { return model_.input_dim(); }
    std::string kind() const override { return "SVM"; }
    const SvrModel& model() const noexcept { return model_; }

private:
    SvrParams params_;
    SvrModel model_;
};

class GbtRegressor final : public Regressor {
public:
    explicit GbtRegressor(GbtParams params) : params_(params) {}
    void fit(const FeatureMatrix& x) override;
    double predict(const FeatureMatrix& x, std::size_t row) const override;
    std::size_t input_dim() const noexcept override { return model_.input_dim(); }
    std::string kind() const override { return "GBT"; }
    const GbtEnsemble& model() const noexcept { return model_; }

private:
    GbtParams params_;
    GbtEnsemble model_;
};

class LstmRegressor final : public Regressor {
public:
    explicit LstmRegressor(LstmParams params) : params_(params) {}
    void fit(const FeatureMatrix& x) override;
    double predict(const FeatureMatrix& x, std::size_t row) const override;
    std::size_t context_rows() const noexcept override { return params_.sequence_length; }
    std::size_t input_dim() const noexcept override { return model_.input_size; }
    std::string kind() const override { return "LSTM"; }
    const LstmNetwork& model() const noexcept { return model_; }

private:
    LstmParams params_;
    LstmNetwork model_;
};

}  // namespace hybridcast
