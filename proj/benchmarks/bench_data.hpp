#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace hybridcast::bench {

// Daily-return-sized AR(1) noise; enough structure for the fitters to do real work.
inline std::vector<double> returns(std::size_t n, std::uint64_t seed = 1) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 0.012);
    std::vector<double> x(n);
    double prev = 0.0;
    for (auto& v : x) {
        v = 0.05 * prev + dist(rng);
        prev = v;
    }
    return x;
}

}  // namespace hybridcast::bench
