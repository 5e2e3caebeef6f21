#include "mstlens/projection.hpp"
#include "mstlens/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace mstlens {

Matrix polynomial_design(std::size_t k, std::size_t degree) {
    if (k < 2) throw InputError("polynomial design needs k >= 2");
    if (degree < 1) throw InputError("polynomial degree must be >= 1");
    Matrix design(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(degree));
    for (std::size_t i = 0; i < k; ++i) {
        double power = 1.0;
        for (std::size_t j = 0; j < degree; ++j) {
            power *= static_cast<double>(i + 1);
            design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = power;
        }
    }
    return design;
}

Matrix center_columns(const Matrix& m) { return m.rowwise() - m.colwise().mean(); }

namespace {

/// Orthonormal basis of the centered design's column span plus the map back to raw
/// coefficients: centered_design * to_raw == basis.
struct DesignBasis {
    Matrix basis;    // k x d
    Matrix to_raw;   // d x d
};

DesignBasis design_basis(const Matrix& centered_design) {
    const Eigen::Index d = centered_design.cols();
    Vector scale(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        const double norm = centered_design.col(j).norm();
        scale(j) = norm > 0 ? norm : 1.0;
    }
    const Matrix scaled = centered_design * scale.cwiseInverse().asDiagonal();
    Eigen::ColPivHouseholderQR<Matrix> qr(scaled);
    qr.setThreshold(1e-10);
    if (qr.rank() < d)
        throw DegenerateError("design-side covariance is singular: polynomial degree too high for the path length");
    DesignBasis out;
    out.basis = qr.householderQ() * Matrix::Identity(centered_design.rows(), d);
    const Matrix r = qr.matrixR().topLeftCorner(d, d).template triangularView<Eigen::Upper>();
    const Matrix r_inv = r.inverse();
    // scaled * P = Q R  =>  centered * diag(1/scale) * P * R^-1 = Q
    out.to_raw = scale.cwiseInverse().asDiagonal() * (qr.colsPermutation() * r_inv);
    return out;
}

/// Inverse square root of a symmetric positive definite matrix.
Matrix inverse_sqrt(const Matrix& c) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(c);
    const Vector& values = eig.eigenvalues();
    const double top = std::max(values.maxCoeff(), std::numeric_limits<double>::min());
    if (values.minCoeff() <= 1e-12 * top)
        throw DegenerateError("path-score covariance is singular; use a positive ridge (lambda > 0)");
    return eig.eigenvectors() * values.cwiseSqrt().cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
}

struct CcaDetail {
    Matrix path_dirs;                  // r x m
    Matrix design_dirs;                // d x m, raw design coefficients
    std::vector<double> correlations;
};

CcaDetail cca_detail(const Matrix& centered_scores, const Matrix& centered_design, double lambda) {
    if (!(lambda >= 0.0)) throw InputError("lambda must be non-negative");
    const Eigen::Index k = centered_scores.rows();
    const Eigen::Index r = centered_scores.cols();
    const double dof = static_cast<double>(k - 1);
    const DesignBasis design = design_basis(centered_design);

    Matrix cxx = centered_scores.transpose() * centered_scores / dof;
    cxx.diagonal().array() += lambda;
    const Matrix whiten = inverse_sqrt(cxx);
    // Design basis has orthonormal columns, so its covariance is I / dof.
    const Matrix m = whiten * centered_scores.transpose() * design.basis / std::sqrt(dof);
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);

    const Eigen::Index pairs = std::min(r, centered_design.cols());
    CcaDetail out;
    out.path_dirs = whiten * svd.matrixU().leftCols(pairs);
    out.design_dirs = design.to_raw * svd.matrixV().leftCols(pairs);
    // Realized correlation of each canonical pair; equals the singular value when lambda = 0.
    for (Eigen::Index i = 0; i < pairs; ++i) {
        const Vector u = centered_scores * out.path_dirs.col(i);
        const Vector v = design.basis * svd.matrixV().col(i);
        const double denom = u.norm() * v.norm();
        const double rho = denom > 0 ? u.dot(v) / denom : 0.0;
        out.correlations.push_back(std::clamp(rho, 0.0, 1.0));
    }
    return out;
}

double pearson(const Vector& a, const Vector& b) {
    const Vector ac = a.array() - a.mean();
    const Vector bc = b.array() - b.mean();
    const double denom = ac.norm() * bc.norm();
    if (!(denom > 0)) return std::numeric_limits<double>::quiet_NaN();
    return ac.dot(bc) / denom;
}

Vector index_vector(Eigen::Index k) {
    Vector idx(k);
    for (Eigen::Index i = 0; i < k; ++i) idx(i) = static_cast<double>(i + 1);
    return idx;
}

std::vector<Eigen::Index> fold_rows(Eigen::Index k, std::size_t folds, std::size_t fold, bool held_out) {
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < k; ++i)
        if ((static_cast<std::size_t>(i) % folds == fold) == held_out) rows.push_back(i);
    return rows;
}

Matrix take(const Matrix& m, const std::vector<Eigen::Index>& rows) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
    return out;
}

} // namespace

CcaFit regularized_cca(const Matrix& path_scores, const Matrix& design, double lambda) {
    if (path_scores.rows() != design.rows()) throw InputError("path scores and design need the same row count");
    if (path_scores.rows() < 2) throw InputError("CCA needs at least 2 path points");
    CcaDetail detail = cca_detail(center_columns(path_scores), center_columns(design), lambda);
    return CcaFit{std::move(detail.path_dirs), std::move(detail.correlations)};
}

std::vector<double> default_lambda_grid(const Matrix& path_scores) {
    const Matrix centered = center_columns(path_scores);
    const double dof = std::max<double>(1.0, static_cast<double>(path_scores.rows() - 1));
    double scale = centered.squaredNorm() / dof / static_cast<double>(std::max<Eigen::Index>(1, path_scores.cols()));
    if (!(scale > 0)) scale = 1.0;
    std::vector<double> grid(8);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = scale * std::pow(10.0, -4.0 + 6.0 * static_cast<double>(i) / 7.0);
    return grid;
}

std::vector<double> cv_scores(const Matrix& path_scores, const Matrix& design, const std::vector<double>& grid,
                              std::size_t folds) {
    if (grid.empty()) throw InputError("lambda grid is empty");
    const Eigen::Index k = path_scores.rows();
    if (design.rows() != k) throw InputError("path scores and design need the same row count");
    if (folds < 2 || static_cast<Eigen::Index>(folds) > k) throw InputError("cross-validation needs k >= folds >= 2");

    std::vector<double> scores;
    for (double lambda : grid) {
        Vector u(k), v(k);
        bool ok = true;
        for (std::size_t f = 0; f < folds && ok; ++f) {
            const auto train = fold_rows(k, folds, f, false);
            const auto test = fold_rows(k, folds, f, true);
            const Matrix p_train = take(path_scores, train);
            const Matrix d_train = take(design, train);
            const Vector p_mean = p_train.colwise().mean().transpose();
            const Vector d_mean = d_train.colwise().mean().transpose();
            try {
                const Matrix pc = p_train.rowwise() - p_mean.transpose();
                const Matrix dc = d_train.rowwise() - d_mean.transpose();
                const CcaDetail fit = cca_detail(pc, dc, lambda);
                Vector a = fit.path_dirs.col(0);
                Vector b = fit.design_dirs.col(0);
                const Vector pu = pc * a;
                const Vector dv = dc * b;
                Vector train_index(static_cast<Eigen::Index>(train.size()));
                for (std::size_t i = 0; i < train.size(); ++i) train_index(static_cast<Eigen::Index>(i)) = static_cast<double>(train[i]);
                const double su = std::sqrt(pu.squaredNorm() / static_cast<double>(train.size() - 1));
                const double sv = std::sqrt(dv.squaredNorm() / static_cast<double>(train.size() - 1));
                if (!(su > 0) || !(sv > 0)) {
                    ok = false;
                    break;
                }
                double orient = pearson(dv, train_index);
                if (std::isnan(orient)) orient = 1.0;
                const double sign = orient < 0 ? -1.0 : 1.0;
                a *= sign / su;
                b *= sign / sv;
                for (auto row : test) {
                    u(row) = (path_scores.row(row).transpose() - p_mean).dot(a);
                    v(row) = (design.row(row).transpose() - d_mean).dot(b);
                }
            } catch (const DegenerateError&) {
                ok = false;
            }
        }
        scores.push_back(ok ? pearson(u, v) : std::numeric_limits<double>::quiet_NaN());
    }
    return scores;
}

double cv_select_lambda(const Matrix& path_scores, const Matrix& design, const std::vector<double>& grid,
                        std::size_t folds) {
    const auto scores = cv_scores(path_scores, design, grid, folds);
    constexpr double tie = 1e-12;
    std::size_t best = grid.size();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (std::isnan(scores[i])) continue;
        if (best == grid.size() || scores[i] > scores[best] + tie ||
            (std::abs(scores[i] - scores[best]) <= tie && grid[i] > grid[best]))
            best = i;
    }
    if (best == grid.size()) throw DegenerateError("cross-validation failed for every lambda in the grid");
    return grid[best];
}

ProjectionResult pca_rcca_project(const Matrix& x, const Matrix& path, const ProjectionConfig& config) {
    const auto k = static_cast<std::size_t>(path.rows());
    if (k < 2) throw InputError("a path needs at least 2 points");
    if (x.cols() != path.cols()) throw InputError("path and points of interest must share the feature space");
    if (config.degree < 1) throw InputError("polynomial degree must be >= 1");
    if (config.lambda && !(*config.lambda >= 0.0)) throw InputError("lambda must be non-negative");

    ProjectionResult result;
    result.config = config;

    const PcaModel pca = fit_pca(x, config.pca_dims);
    result.variance_retained = pca.variance_retained;
    const Matrix scores = pca.transform(x);
    const Matrix path_scores = pca.transform(path);

    result.degree = config.degree;
    if (k <= config.degree + 1) {
        result.degree = std::max<std::size_t>(1, k >= 2 ? k - 2 : 1);
        result.warnings.push_back("degree " + std::to_string(config.degree) + " too high for a " + std::to_string(k) +
                                  "-point path; using " + std::to_string(result.degree));
    }
    const Matrix design = polynomial_design(k, result.degree);

    if (config.lambda) {
        result.lambda = *config.lambda;
    } else {
        const auto grid = default_lambda_grid(path_scores);
        const std::size_t folds = std::min(config.folds, k);
        try {
            if (folds < 2) throw DegenerateError("too few path points to cross-validate");
            result.lambda = cv_select_lambda(path_scores, design, grid, folds);
        } catch (const std::exception& e) {
            result.lambda = grid[grid.size() / 2];
            result.warnings.push_back(std::string("lambda cross-validation failed (") + e.what() +
                                      "); using fixed ridge " + std::to_string(result.lambda));
        }
    }

    const CcaFit fit = regularized_cca(path_scores, design, result.lambda);

    // Orthonormal 2-D basis in score space: leading canonical directions first, then the
    // principal axes to fill any missing dimension.
    const Eigen::Index r = scores.cols();
    const Eigen::Index target = std::min<Eigen::Index>(2, r);
    std::vector<Vector> basis;
    auto try_add = [&](Vector v) {
        for (const auto& b : basis) v -= b.dot(v) * b;
        const double norm = v.norm();
        if (norm > 1e-10) basis.push_back(v / norm);
    };
    for (Eigen::Index j = 0; j < fit.directions.cols() && static_cast<Eigen::Index>(basis.size()) < target; ++j) {
        const Vector dir = fit.directions.col(j);
        if (dir.norm() > 0) try_add(dir / dir.norm());
    }
    for (Eigen::Index j = 0; j < r && static_cast<Eigen::Index>(basis.size()) < target; ++j)
        try_add(Vector::Unit(r, j));
    if (fit.directions.cols() < 2)
        result.warnings.push_back("fewer than two canonical pairs; second axis is the leading orthogonal principal axis");

    const Matrix path_centered = center_columns(path_scores);
    const Vector index = index_vector(static_cast<Eigen::Index>(k));
    for (auto& b : basis) {
        const double orient = pearson(path_centered * b, index);
        bool flip = orient < 0;
        if (std::isnan(orient) || std::abs(orient) < 1e-12) {
            Eigen::Index arg = 0;
            b.cwiseAbs().maxCoeff(&arg);
            flip = b(arg) < 0;
        }
        if (flip) b = -b;
    }

    Matrix projector = Matrix::Zero(r, 2);
    for (std::size_t j = 0; j < basis.size(); ++j) projector.col(static_cast<Eigen::Index>(j)) = basis[j];
    result.coords = scores * projector;
    result.path_coords = path_scores * projector;

    result.canonical_correlations = fit.correlations;
    result.canonical_correlations.resize(2, 0.0);
    return result;
}

// ---------------------------------------------------------------------------------------

double DensitySurface::cell_area() const {
    const double dx = xs.size() > 1 ? xs[1] - xs[0] : 0.0;
    const double dy = ys.size() > 1 ? ys[1] - ys[0] : 0.0;
    return dx * dy;
}

double DensitySurface::total_mass() const { return values.sum() * cell_area(); }

DensitySurface kde2d(const Matrix& coords, double bandwidth, std::size_t resolution) {
    if (!(bandwidth > 0.0)) throw InputError("KDE bandwidth must be positive");
    if (coords.cols() != 2) throw InputError("KDE needs 2-D coordinates");
    if (coords.rows() < 1) throw InputError("KDE needs at least one point");
    if (resolution < 2) throw InputError("KDE grid resolution must be >= 2");

    const auto res = static_cast<Eigen::Index>(resolution);
    const double pad = 3.0 * bandwidth;
    auto axis = [&](Eigen::Index col) {
        const double lo = coords.col(col).minCoeff() - pad;
        const double hi = coords.col(col).maxCoeff() + pad;
        const double step = (hi - lo) / static_cast<double>(res);
        std::vector<double> centers(resolution);
        for (Eigen::Index i = 0; i < res; ++i) centers[static_cast<std::size_t>(i)] = lo + (static_cast<double>(i) + 0.5) * step;
        return centers;
    };

    DensitySurface surface;
    surface.bandwidth = bandwidth;
    surface.xs = axis(0);
    surface.ys = axis(1);

    const Eigen::Index n = coords.rows();
    auto kernel = [&](const std::vector<double>& centers, Eigen::Index col) {
        Matrix k(res, n);
        for (Eigen::Index i = 0; i < res; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                const double z = (centers[static_cast<std::size_t>(i)] - coords(j, col)) / bandwidth;
                k(i, j) = std::exp(-0.5 * z * z);
            }
        return k;
    };
    const Matrix kx = kernel(surface.xs, 0);
    const Matrix ky = kernel(surface.ys, 1);
    const double norm = 1.0 / (static_cast<double>(n) * 2.0 * std::numbers::pi * bandwidth * bandwidth);
    surface.values = (ky * kx.transpose()) * norm;
    return surface;
}

std::size_t mode_count(const DensitySurface& surface) {
    const Matrix& v = surface.values;
    std::size_t modes = 0;
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
        for (Eigen::Index j = 0; j < v.cols(); ++j) {
            bool strict_max = true;
            bool has_neighbor = false;
            for (int di = -1; di <= 1 && strict_max; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const Eigen::Index a = i + di, b = j + dj;
                    if (a < 0 || b < 0 || a >= v.rows() || b >= v.cols()) continue;
                    has_neighbor = true;
                    if (!(v(i, j) > v(a, b))) {
                        strict_max = false;
                        break;
                    }
                }
            }
            if (strict_max && has_neighbor) ++modes;
        }
    }
    return modes;
}

} // namespace mstlens
