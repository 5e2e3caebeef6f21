#include "doctest.h"

#include "fixtures.hpp"
#include "oracles.hpp"

#include "mstlens/projection.hpp"
#include "mstlens/synthetic.hpp"

#include <numbers>

using namespace mstlens;

namespace {

/// Canonical correlations from the singular values of Qx^T Qy (thin QR of both centered blocks).
Vector qr_canonical_correlations(const Matrix& x, const Matrix& y) {
    const Matrix xc = center_columns(x), yc = center_columns(y);
    Eigen::HouseholderQR<Matrix> qx(xc), qy(yc);
    const Matrix ux = qx.householderQ() * Matrix::Identity(xc.rows(), xc.cols());
    const Matrix uy = qy.householderQ() * Matrix::Identity(yc.rows(), yc.cols());
    return Eigen::JacobiSVD<Matrix>(ux.transpose() * uy).singularValues();
}

double pearson(const Vector& a, const Vector& b) {
    const Vector ac = a.array() - a.mean(), bc = b.array() - b.mean();
    return ac.dot(bc) / (ac.norm() * bc.norm());
}

/// Parabola in the first two of p dimensions, rotated by a random orthonormal frame, plus noise.
struct Embedded {
    Matrix truth;
    Matrix points;
};

Embedded embedded_parabola(std::size_t k, std::size_t p, double noise, std::uint64_t seed) {
    const Matrix truth = synthetic::parabola(k);
    const Matrix frame = synthetic::random_orthonormal(p, 2, seed);
    Matrix points = truth * frame.transpose();
    points += noise * fixture::gaussian(k, p, seed + 1);
    return {truth, points};
}

} // namespace

TEST_CASE("polynomial design rows are (i, i^2, ..., i^d)") {
    const Matrix d = polynomial_design(4, 3);
    CHECK(d.rows() == 4);
    CHECK(d(0, 0) == 1);
    CHECK(d(2, 0) == 3);
    CHECK(d(2, 1) == 9);
    CHECK(d(3, 2) == 64);
    CHECK(center_columns(d).colwise().sum().norm() < 1e-9);
    CHECK_THROWS_AS(polynomial_design(1, 2), InputError);
    CHECK_THROWS_AS(polynomial_design(5, 0), InputError);
}

TEST_CASE("unregularized CCA matches the QR/SVD oracle") {
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix scores = fixture::gaussian(30, 4, rng());
        const Matrix design = polynomial_design(30, 2);
        const CcaFit fit = regularized_cca(scores, design, 0.0);
        const Vector expected = qr_canonical_correlations(scores, design);
        REQUIRE(fit.correlations.size() == 2);
        for (int i = 0; i < 2; ++i) CHECK(fit.correlations[static_cast<std::size_t>(i)] == doctest::Approx(expected(i)).epsilon(1e-9));

        // The direction attains its correlation with the best design combination.
        const Vector u = center_columns(scores) * fit.directions.col(0);
        const Matrix dc = center_columns(design);
        const Vector beta = dc.colPivHouseholderQr().solve(u);
        CHECK(pearson(u, dc * beta) == doctest::Approx(fit.correlations[0]).epsilon(1e-9));
    }
}

TEST_CASE("ridge shrinks canonical correlations") {
    const Matrix scores = fixture::gaussian(25, 5, 8);
    const Matrix design = polynomial_design(25, 2);
    const auto a = regularized_cca(scores, design, 0.0).correlations;
    const auto b = regularized_cca(scores, design, 10.0).correlations;
    CHECK(b[0] <= a[0] + 1e-12);
    for (double c : b) {
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
    }
    CHECK(a[0] >= a[1]);
}

TEST_CASE("lambda grid spans 1e-4 to 1e2 of the mean score variance") {
    const Matrix scores = 3.0 * fixture::gaussian(20, 3, 4);
    const auto grid = default_lambda_grid(scores);
    const Matrix c = center_columns(scores);
    const double mean_var = c.squaredNorm() / 19.0 / 3.0;
    REQUIRE(grid.size() == 8);
    CHECK(grid.front() == doctest::Approx(1e-4 * mean_var));
    CHECK(grid.back() == doctest::Approx(1e2 * mean_var));
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] / grid[i - 1] == doctest::Approx(grid[1] / grid[0]));
}

TEST_CASE("cross-validation ties go to the largest lambda") {
    // With one score column the ridge only rescales the direction, so every lambda scores the same.
    Matrix scores(12, 1);
    for (int i = 0; i < 12; ++i) scores(i, 0) = std::sin(0.7 * i) + 0.1 * i;
    const Matrix design = polynomial_design(12, 2);
    const std::vector<double> grid{0.01, 0.1, 1.0, 10.0};
    const auto s = cv_scores(scores, design, grid, 4);
    for (double v : s) CHECK(v == doctest::Approx(s[0]).epsilon(1e-10));
    CHECK(cv_select_lambda(scores, design, grid, 4) == 10.0);
    CHECK_THROWS_AS(cv_select_lambda(scores, design, {}, 4), InputError);
    CHECK_THROWS_AS(cv_select_lambda(scores, design, grid, 1), InputError);
    CHECK_THROWS_AS(cv_select_lambda(scores, design, grid, 13), InputError);
}

TEST_CASE("projection recovers an embedded parabola") {
    const Embedded e = embedded_parabola(40, 50, 0.01, 5);
    ProjectionConfig cfg;
    cfg.pca_dims = 10;
    const ProjectionResult r = pca_rcca_project(e.points, e.points, cfg);
    CHECK(r.canonical_correlations[0] >= 0.99);
    CHECK(oracle::procrustes_disparity(e.truth, r.path_coords) < 0.05);
    CHECK(r.coords.rows() == 40);
    CHECK(r.path_coords.cols() == 2);
    CHECK(r.degree == 2);
    CHECK(r.lambda > 0.0);
    // Axes oriented along the path index.
    Vector idx(40);
    for (int i = 0; i < 40; ++i) idx(i) = i + 1;
    CHECK(pearson(r.path_coords.col(0), idx) >= 0.0);
}

TEST_CASE("projection uses an orthonormal basis of PCA-score space") {
    const Matrix x = fixture::gaussian(30, 8, 6);
    const Matrix path = x.topRows(10);
    ProjectionConfig cfg;
    cfg.pca_dims = 5;
    cfg.lambda = 0.1;
    const ProjectionResult r = pca_rcca_project(x, path, cfg);
    const Matrix scores = fit_pca(x, 5).transform(x);
    // An orthonormal projection never increases pairwise distances.
    for (int i = 0; i < 30; ++i)
        for (int j = i + 1; j < 30; ++j)
            CHECK((r.coords.row(i) - r.coords.row(j)).norm() <= (scores.row(i) - scores.row(j)).norm() + 1e-9);
    // and it is exact on its own span: total squared norm is the score norm on the basis.
    const Matrix basis = scores.colPivHouseholderQr().solve(r.coords);
    CHECK((basis.transpose() * basis - Matrix::Identity(2, 2)).norm() < 1e-8);
    CHECK(r.lambda == 0.1);
}

TEST_CASE("short paths lower the degree with a warning") {
    const Matrix x = fixture::gaussian(20, 4, 2);
    ProjectionConfig cfg;
    cfg.pca_dims = 3;
    cfg.degree = 2;
    const ProjectionResult r = pca_rcca_project(x, x.topRows(3), cfg);
    CHECK(r.degree == 1);
    CHECK_FALSE(r.warnings.empty());
    CHECK(r.config.degree == 2);
}

TEST_CASE("projection is deterministic") {
    const Embedded e = embedded_parabola(25, 12, 0.05, 9);
    const ProjectionConfig cfg;
    const auto a = pca_rcca_project(e.points, e.points.topRows(20), cfg);
    const auto b = pca_rcca_project(e.points, e.points.topRows(20), cfg);
    CHECK(a.coords == b.coords);
    CHECK(a.lambda == b.lambda);
}

TEST_CASE("projection input errors") {
    const Matrix x = fixture::gaussian(10, 3, 1);
    CHECK_THROWS_AS(pca_rcca_project(x, x.topRows(1), ProjectionConfig{}), InputError);
    CHECK_THROWS_AS(pca_rcca_project(x, fixture::gaussian(4, 2, 1), ProjectionConfig{}), InputError);
    ProjectionConfig neg;
    neg.lambda = -1.0;
    neg.pca_dims = 2;
    CHECK_THROWS_AS(pca_rcca_project(x, x, neg), InputError);
}

TEST_CASE("kde integrates to one and finds separated modes") {
    Matrix one(1, 2);
    one << 0.3, -0.2;
    const DensitySurface s1 = kde2d(one, 0.5);
    CHECK(s1.total_mass() == doctest::Approx(1.0).epsilon(0.01));
    CHECK(mode_count(s1) == 1);

    Matrix two(2, 2);
    two << 0, 0, 6, 1;
    const DensitySurface s2 = kde2d(two, 0.5);
    CHECK(s2.total_mass() == doctest::Approx(1.0).epsilon(0.01));
    CHECK(mode_count(s2) == 2);

    const Matrix cloud = fixture::gaussian(200, 2, 3);
    const DensitySurface s3 = kde2d(cloud, 0.4, 64);
    CHECK(s3.total_mass() == doctest::Approx(1.0).epsilon(0.01));
    CHECK(s3.xs.front() <= cloud.col(0).minCoeff() - 3 * 0.4 + s3.xs[1] - s3.xs[0]);

    // Peak value of a single kernel.
    CHECK(s1.values.maxCoeff() <= 1.0 / (2 * std::numbers::pi * 0.25) + 1e-12);

    CHECK_THROWS_AS(kde2d(cloud, 0.0), InputError);
    CHECK_THROWS_AS(kde2d(fixture::gaussian(5, 3, 1), 1.0), InputError);
}
