#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hybridcast::optimize {

struct NelderMeadOptions {
    double initial_step = 0.1;
    double x_tolerance = 1e-9;
    double f_tolerance = 1e-12;
    std::size_t max_evaluations = 4000;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

/// Derivative-free simplex minimisation. Deterministic: no randomised restarts.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                             std::vector<double> start, const NelderMeadOptions& options = {});

/// Golden-section search for a unimodal function on [lo, hi].
double golden_section(const std::function<double(double)>& objective, double lo, double hi,
                      double tolerance = 1e-4, std::size_t max_iterations = 60);

}  // namespace hybridcast::optimize
