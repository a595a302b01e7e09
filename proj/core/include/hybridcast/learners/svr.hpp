#pragma once

#include "hybridcast/learners/features.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hybridcast {

enum class KernelType { Linear, Polynomial, Rbf };

struct Kernel {
    KernelType type = KernelType::Rbf;
    int degree = 3;
    double gamma = 0.0;  // 0 selects 1 / n_features
    double coef0 = 1.0;

    double operator()(std::span<const double> a, std::span<const double> b) const;
    std::string describe() const;
};

struct SvrParams {
    Kernel kernel;
    double C = 1.0;
    double epsilon = 1e-3;  // in target units
    double tolerance = 1e-3;
    std::size_t max_iterations = 100000;
};

/// Epsilon-insensitive support vector regressor. Features and target are
/// standardised with training statistics; `epsilon` is rescaled accordingly.
struct SvrModel {
    Kernel kernel;
    double C = 1.0;
    double epsilon = 0.0;
    std::vector<double> alphas;                      // alpha_i - alpha_i^*, standardised space
    std::vector<std::vector<double>> support_vectors;  // standardised rows
    double b = 0.0;
    Standardizer scaler;
    TargetScaler target;
    bool degenerate = false;
    bool converged = false;
    std::size_t iterations = 0;
    double dual_objective = 0.0;
    std::vector<double> objective_trace;

    double predict(std::span<const double> x) const;
    std::size_t input_dim() const noexcept { return scaler.dims(); }
};

SvrModel svr_fit(const FeatureMatrix& x, const SvrParams& params);

/// 0.5 ||beta||^2 + C sum max(0, |y - f| - eps) in standardised space, for
/// a linear-kernel model (beta recovered from the dual).
double svr_primal_objective(const SvrModel& m, const FeatureMatrix& x);

}  // namespace hybridcast
