#include "hybridcast/learners/regressor.hpp"

#include "hybridcast/error.hpp"

#include <sstream>

namespace hybridcast {

std::string_view to_string(LearnerKind kind) noexcept {
    switch (kind) {
        case LearnerKind::Svr: return "SVM";
        case LearnerKind::Gbt: return "XGBoost";
        case LearnerKind::Lstm: return "LSTM";
    }
    return "?";
}

std::string LearnerParams::describe() const {
    std::ostringstream out;
    switch (kind) {
        case LearnerKind::Svr:
            out << "svr(C=" << svr.C << ", eps=" << svr.epsilon << ", kernel=" << svr.kernel.describe() << ")";
            break;
        case LearnerKind::Gbt:
            out << "gbt(trees=" << gbt.trees << ", depth=" << gbt.max_depth << ", lr=" << gbt.learning_rate << ")";
            break;
        case LearnerKind::Lstm:
            out << "lstm(hidden=" << lstm.hidden_size << ", seq=" << lstm.sequence_length
                << ", epochs=" << lstm.epochs << ", lr=" << lstm.learning_rate << ")";
            break;
    }
    return out.str();
}

std::unique_ptr<Regressor> make_regressor(const LearnerParams& params) {
    switch (params.kind) {
        case LearnerKind::Svr: return std::make_unique<SvrRegressor>(params.svr);
        case LearnerKind::Gbt: return std::make_unique<GbtRegressor>(params.gbt);
        case LearnerKind::Lstm: return std::make_unique<LstmRegressor>(params.lstm);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown learner kind");
}

namespace {

void check_row(const FeatureMatrix& x, std::size_t row, std::size_t dim) {
    if (x.cols != dim) {
        throw Error(ErrorCode::DimensionMismatch,
                    "model expects " + std::to_string(dim) + " features, got " + std::to_string(x.cols));
    }
    if (row >= x.rows) {
        throw Error(ErrorCode::InvalidArgument, "row index out of range");
    }
}

}  // namespace

void SvrRegressor::fit(const FeatureMatrix& x) { model_ = svr_fit(x, params_); }

double SvrRegressor::predict(const FeatureMatrix& x, std::size_t row) const {
    check_row(x, row, input_dim());
    return model_.predict(x.row(row));
}

void GbtRegressor::fit(const FeatureMatrix& x) { model_ = gbt_fit(x, params_); }

double GbtRegressor::predict(const FeatureMatrix& x, std::size_t row) const {
    check_row(x, row, input_dim());
    return model_.predict(x.row(row));
}

void LstmRegressor::fit(const FeatureMatrix& x) { model_ = lstm_fit(x, params_); }

double LstmRegressor::predict(const FeatureMatrix& x, std::size_t row) const {
    check_row(x, row, input_dim());
    return lstm_predict(model_, x, row);
}

}  // namespace hybridcast
