#pragma once

#include "mstlens/types.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace mstlens::synthetic {

struct LabeledData {
    Matrix points;
    std::vector<std::string> labels;
};

/// k spherical unit-variance Gaussian clusters of equal size in p dimensions. Centers lie
/// in a random `latent_dims`-dimensional subspace with coordinates N(0, separation^2).
LabeledData gaussian_mixture(std::size_t n, std::size_t p, std::size_t k, std::uint64_t seed,
                             double separation = 6.0, std::size_t latent_dims = 10);

/// Two uniform boxes: n_each points in [-2, -c] x [-1, 1]^(p-1) labelled "1", then n_each
/// in [c, 2] x [-1, 1]^(p-1) labelled "2".
LabeledData hyperrectangle_pair(std::size_t n_each, std::size_t p, double c, std::uint64_t seed);

/// Points on the parabola (t, t^2), t evenly spaced in [-1, 1], as a k x 2 matrix.
Matrix parabola(std::size_t k);

/// Random p x dims matrix with orthonormal columns.
Matrix random_orthonormal(std::size_t p, std::size_t dims, std::uint64_t seed);

} // namespace mstlens::synthetic
