#include "hybridcast/learners/features.hpp"

#include "hybridcast/error.hpp"

#include <cmath>

namespace hybridcast {

Standardizer Standardizer::fit(const FeatureMatrix& x) {
    Standardizer s;
    s.mean.assign(x.cols, 0.0);
    s.scale.assign(x.cols, 1.0);
    if (x.rows == 0) {
        return s;
    }
    const double n = static_cast<double>(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
        const auto row = x.row(r);
        for (std::size_t c = 0; c < x.cols; ++c) {
            s.mean[c] += row[c];
        }
    }
    for (double& m : s.mean) {
        m /= n;
    }
    std::vector<double> ss(x.cols, 0.0);
    for (std::size_t r = 0; r < x.rows; ++r) {
        const auto row = x.row(r);
        for (std::size_t c = 0; c < x.cols; ++c) {
            const double d = row[c] - s.mean[c];
            ss[c] += d * d;
        }
    }
    for (std::size_t c = 0; c < x.cols; ++c) {
        const double sd = std::sqrt(ss[c] / n);
        s.scale[c] = sd > 1e-12 * std::abs(s.mean[c]) && sd > 0.0 && std::isfinite(sd) ? sd : 1.0;
    }
    return s;
}

void Standardizer::apply(std::span<const double> in, std::span<double> out) const {
    if (in.size() != mean.size() || out.size() != mean.size()) {
        throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(mean.size()) + " features, got " +
                                                      std::to_string(in.size()));
    }
    for (std::size_t c = 0; c < in.size(); ++c) {
        out[c] = (in[c] - mean[c]) / scale[c];
    }
}

std::vector<double> Standardizer::apply(std::span<const double> in) const {
    std::vector<double> out(in.size());
    apply(in, out);
    return out;
}

TargetScaler TargetScaler::fit(std::span<const double> y) {
    TargetScaler t;
    if (y.empty()) {
        t.degenerate = true;
        return t;
    }
    double sum = 0.0;
    for (double v : y) {
        sum += v;
    }
    t.mean = sum / static_cast<double>(y.size());
    double ss = 0.0;
    for (double v : y) {
        ss += (v - t.mean) * (v - t.mean);
    }
    const double sd = std::sqrt(ss / static_cast<double>(y.size()));
    if (sd > 1e-12 * std::abs(t.mean) && sd > 0.0 && std::isfinite(sd)) {
        t.scale = sd;
    } else {
        t.degenerate = true;
    }
    return t;
}

}  // namespace hybridcast
