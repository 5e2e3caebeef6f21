#pragma once

#include "mstlens/types.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace mstlens {

/// Row i (1-based) is (i, i^2, ..., i^d). Raw, uncentered.
Matrix polynomial_design(std::size_t k, std::size_t degree);

/// Column-centered copy.
Matrix center_columns(const Matrix& m);

struct ProjectionConfig {
    std::size_t pca_dims = 10;
    std::size_t degree = 2;
    std::optional<double> lambda;      // ridge on the path side; cross-validated when absent
    std::optional<double> bandwidth;   // KDE overlay, consumed by callers
    std::size_t folds = 5;
};

struct ProjectionResult {
    Matrix coords;        // one row per point of interest
    Matrix path_coords;   // one row per path point, in order
    double variance_retained = 0.0;
    std::vector<double> canonical_correlations;   // first two pairs, realized, in [0, 1]
    double lambda = 0.0;                          // ridge actually used
    std::size_t degree = 0;                       // degree actually used
    ProjectionConfig config;                      // as requested
    std::vector<std::string> warnings;
};

/// Regularized CCA between centered path scores (ridge `lambda` added to their covariance)
/// and a design matrix (unregularized). Returns up to min(dims, design columns) pairs.
struct CcaFit {
    Matrix directions;                 // score-space canonical directions, one per column
    std::vector<double> correlations;  // realized corr(Xa, Yb) per pair
};
CcaFit regularized_cca(const Matrix& path_scores, const Matrix& design, double lambda);

/// 8 log-spaced values from 1e-4 to 1e2 times the mean variance of the path scores.
std::vector<double> default_lambda_grid(const Matrix& path_scores);

/// Ridge maximizing the pooled held-out first canonical correlation over interleaved
/// folds (point i is held out in fold i mod folds). Ties go to the largest value.
/// Throws InputError for an empty grid or unless k >= folds >= 2.
double cv_select_lambda(const Matrix& path_scores, const Matrix& design, const std::vector<double>& grid,
                        std::size_t folds);

/// Per-lambda pooled held-out correlation, aligned with `grid`.
std::vector<double> cv_scores(const Matrix& path_scores, const Matrix& design, const std::vector<double>& grid,
                              std::size_t folds);

/// PCA of `x` to pca_dims, rCCA of the path's PCA scores against the polynomial design, and
/// projection of every score onto the orthonormalized leading two canonical directions.
/// `path` rows live in the same feature space as `x`.
ProjectionResult pca_rcca_project(const Matrix& x, const Matrix& path, const ProjectionConfig& config);

struct DensitySurface {
    std::vector<double> xs;   // cell centers, ascending
    std::vector<double> ys;
    Matrix values;            // values(iy, ix)
    double bandwidth = 0.0;

    double cell_area() const;
    double total_mass() const;
};

/// Gaussian product-kernel density on a resolution x resolution cell grid spanning the
/// bounding box padded by 3h on every side.
DensitySurface kde2d(const Matrix& coords, double bandwidth, std::size_t resolution = 101);

/// Cells strictly greater than all of their (up to 8) neighbors.
std::size_t mode_count(const DensitySurface& surface);

} // namespace mstlens
