#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mstlens {

struct PowerCell {
    double c = 0.0;
    std::size_t p = 0;
    std::size_t trials = 0;
    std::size_t rejections = 0;
    double rate = 0.0;
};

struct PowerOptions {
    std::size_t n_each = 50;
    std::size_t trials = 100;
    std::size_t replicates = 100;
    double alpha = 0.05;
    double variance_threshold = 0.90;
    std::uint64_t seed = 0;
};

/// Rejection rate of the MST test on two uniform boxes separated by 2c in p dimensions.
/// Trial t draws its data and null from seeds derived from (seed, c, p, t).
PowerCell power_cell(double c, std::size_t p, const PowerOptions& options);

std::vector<PowerCell> power_grid(const std::vector<double>& cs, const std::vector<std::size_t>& ps,
                                  const PowerOptions& options);

} // namespace mstlens
