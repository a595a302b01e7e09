#pragma once

// Synthetic series shared by the unit and acceptance tests.

#include "hybridcast/econometric.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace hybridcast::testing {

// Deterministic, platform-stable noise in [-0.5, 0.5); mirrored by
// tests/oracles/reference_values.py.
inline double hash_noise(std::size_t t) {
    const double v = std::fabs(std::sin(static_cast<double>(t + 1) * 12.9898) * 43758.5453);
    return v - std::floor(v) - 0.5;
}

inline std::vector<double> noise(std::size_t n, std::size_t offset = 0) {
    std::vector<double> out(n);
    for (std::size_t t = 0; t < n; ++t) {
        out[t] = hash_noise(t + offset);
    }
    return out;
}

inline std::vector<double> gaussian(std::size_t n, double sigma, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, sigma);
    std::vector<double> out(n);
    for (auto& v : out) {
        v = dist(rng);
    }
    return out;
}

/// x_t = sum phi_i x_{t-i} + e_t + sum theta_j e_{t-j}, Gaussian e, with burn-in.
inline std::vector<double> simulate_arma(std::size_t n, const std::vector<double>& phi,
                                         const std::vector<double>& theta, double sigma, std::uint64_t seed,
                                         std::size_t burn = 500) {
    const auto e = gaussian(n + burn, sigma, seed);
    std::vector<double> x(n + burn, 0.0);
    for (std::size_t t = 0; t < n + burn; ++t) {
        double v = e[t];
        for (std::size_t i = 1; i <= phi.size() && i <= t; ++i) {
            v += phi[i - 1] * x[t - i];
        }
        for (std::size_t j = 1; j <= theta.size() && j <= t; ++j) {
            v += theta[j - 1] * e[t - j];
        }
        x[t] = v;
    }
    return {x.begin() + static_cast<std::ptrdiff_t>(burn), x.end()};
}

/// (1 - B)^d x_t = e_t, generated through the inverse filter (1 - B)^{-d}.
inline std::vector<double> simulate_arfima(std::size_t n, double d, double sigma, std::uint64_t seed,
                                           std::size_t burn = 2000) {
    const std::size_t total = n + burn;
    const auto e = gaussian(total, sigma, seed);
    const auto psi = frac_diff_weights(-d, total - 1).w;
    std::vector<double> x(n);
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t s = t + burn;
        double v = 0.0;
        for (std::size_t k = 0; k <= s; ++k) {
            v += psi[k] * e[s - k];
        }
        x[t] = v;
    }
    return x;
}

/// Linear AR(1) driven by innovations with a bounded nonlinear memory:
///   y_t = phi y_{t-1} + u_t,  u_t = e_t + amplitude * cos(u_{t-1} / sigma).
/// The cosine term carries no linear autocorrelation a linear model could absorb.
inline std::vector<double> composite_process(std::size_t n, double phi, double amplitude, double sigma,
                                             std::uint64_t seed, std::size_t burn = 200) {
    const auto e = gaussian(n + burn, sigma, seed);
    std::vector<double> y(n + burn, 0.0);
    double u = 0.0;
    for (std::size_t t = 1; t < n + burn; ++t) {
        u = e[t] + amplitude * std::cos(u / sigma);
        y[t] = phi * y[t - 1] + u;
    }
    return {y.begin() + static_cast<std::ptrdiff_t>(burn), y.end()};
}

/// Geometric random-walk closes on weekdays (or every day) from `first`.
inline std::string price_csv(const std::string& first, const std::string& last, bool weekdays_only, double drift,
                             double vol, std::uint64_t seed) {
    using namespace std::chrono;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(drift, vol);
    auto parse = [](const std::string& s) {
        return sys_days(year(std::stoi(s.substr(0, 4))) / month(static_cast<unsigned>(std::stoi(s.substr(5, 2)))) /
                        day(static_cast<unsigned>(std::stoi(s.substr(8, 2)))));
    };
    std::string out = "date,close\n";
    double p = 100.0;
    for (sys_days d = parse(first); d <= parse(last); d += days{1}) {
        if (weekdays_only) {
            const weekday wd{d};
            if (wd == Saturday || wd == Sunday) {
                continue;
            }
        }
        const year_month_day ymd{d};
        char buf[64];
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02u,%.6f\n", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), p);
        out += buf;
        p *= std::exp(dist(rng));
    }
    return out;
}

/// Unique scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& stem) {
    static int counter = 0;
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    auto dir = std::filesystem::temp_directory_path() /
               ("hybridcast_" + stem + "_" + std::to_string(stamp) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

}  // namespace hybridcast::testing
