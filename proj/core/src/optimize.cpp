#include "hybridcast/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hybridcast::optimize {

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                             std::vector<double> start, const NelderMeadOptions& options) {
    const std::size_t n = start.size();
    NelderMeadResult result;
    if (n == 0) {
        result.value = objective(start);
        result.x = std::move(start);
        result.evaluations = 1;
        result.converged = std::isfinite(result.value);
        return result;
    }

    constexpr double reflect = 1.0;
    constexpr double expand = 2.0;
    constexpr double contract = 0.5;
    constexpr double shrink = 0.5;

    std::vector<std::vector<double>> simplex(n + 1, start);
    for (std::size_t i = 0; i < n; ++i) {
        simplex[i + 1][i] += options.initial_step;
    }
    std::vector<double> values(n + 1);
    std::size_t evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        const double v = objective(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::max();
    };
    for (std::size_t i = 0; i <= n; ++i) {
        values[i] = eval(simplex[i]);
    }

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n);
    std::vector<double> trial(n);
    std::vector<double> trial2(n);

    while (evals < options.max_evaluations) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[n - 1];

        double size = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                size = std::max(size, std::abs(simplex[i][j] - simplex[best][j]));
            }
        }
        const double spread = std::abs(values[worst] - values[best]);
        if (size < options.x_tolerance ||
            spread <= options.f_tolerance * (std::abs(values[best]) + options.f_tolerance)) {
            result.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                centroid[j] += simplex[i][j];
            }
        }
        for (double& c : centroid) {
            c /= static_cast<double>(n);
        }

        for (std::size_t j = 0; j < n; ++j) {
            trial[j] = centroid[j] + reflect * (centroid[j] - simplex[worst][j]);
        }
        const double f_reflect = eval(trial);

        if (f_reflect < values[best]) {
            for (std::size_t j = 0; j < n; ++j) {
                trial2[j] = centroid[j] + expand * (trial[j] - centroid[j]);
            }
            const double f_expand = eval(trial2);
            if (f_expand < f_reflect) {
                simplex[worst] = trial2;
                values[worst] = f_expand;
            } else {
                simplex[worst] = trial;
                values[worst] = f_reflect;
            }
            continue;
        }
        if (f_reflect < values[second]) {
            simplex[worst] = trial;
            values[worst] = f_reflect;
            continue;
        }

        const bool outside = f_reflect < values[worst];
        for (std::size_t j = 0; j < n; ++j) {
            trial2[j] = outside ? centroid[j] + contract * (trial[j] - centroid[j])
                                : centroid[j] + contract * (simplex[worst][j] - centroid[j]);
        }
        const double f_contract = eval(trial2);
        if (f_contract < (outside ? f_reflect : values[worst])) {
            simplex[worst] = trial2;
            values[worst] = f_contract;
            continue;
        }

        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                simplex[i][j] = simplex[best][j] + shrink * (simplex[i][j] - simplex[best][j]);
            }
            values[i] = eval(simplex[i]);
        }
    }

    const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
    result.x = simplex[best];
    result.value = values[best];
    result.evaluations = evals;
    return result;
}

double golden_section(const std::function<double(double)>& objective, double lo, double hi, double tolerance,
                      std::size_t max_iterations) {
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    for (std::size_t it = 0; it < max_iterations && (b - a) > tolerance; ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = objective(d);
        }
    }
    return fc <= fd ? c : d;
}

}  // namespace hybridcast::optimize
