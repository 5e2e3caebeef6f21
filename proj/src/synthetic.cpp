#include "mstlens/synthetic.hpp"
#include "mstlens/random.hpp"

#include <algorithm>
#include <cmath>

namespace mstlens::synthetic {

Matrix random_orthonormal(std::size_t p, std::size_t dims, std::uint64_t seed) {
    if (dims > p) throw InputError("cannot draw more orthonormal columns than dimensions");
    Rng rng(mix_seed(seed));
    std::normal_distribution<double> normal;
    Matrix g(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(dims));
    for (Eigen::Index j = 0; j < g.cols(); ++j)
        for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = normal(rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    return qr.householderQ() * Matrix::Identity(g.rows(), g.cols());
}

LabeledData gaussian_mixture(std::size_t n, std::size_t p, std::size_t k, std::uint64_t seed, double separation,
                             std::size_t latent_dims) {
    if (k < 2 || n < k || p < 1) throw InputError("gaussian_mixture needs k >= 2, n >= k, p >= 1");
    latent_dims = std::min(latent_dims, p);
    const Matrix basis = random_orthonormal(p, latent_dims, seed ^ 0x5eedULL);

    Rng rng(mix_seed(seed));
    std::normal_distribution<double> normal;
    Matrix centers(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(p));
    for (std::size_t c = 0; c < k; ++c) {
        Vector latent(static_cast<Eigen::Index>(latent_dims));
        for (auto& z : latent) z = separation * normal(rng);
        centers.row(static_cast<Eigen::Index>(c)) = (basis * latent).transpose();
    }

    LabeledData out;
    out.points.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    out.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = i * k / n;
        out.labels[i] = std::to_string(c + 1);
        for (std::size_t j = 0; j < p; ++j)
            out.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                centers(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(j)) + normal(rng);
    }
    return out;
}

LabeledData hyperrectangle_pair(std::size_t n_each, std::size_t p, double c, std::uint64_t seed) {
    if (p < 1 || n_each < 1) throw InputError("hyperrectangle_pair needs p >= 1 and n_each >= 1");
    if (!(c >= 0.0 && c < 2.0)) throw InputError("separation c must lie in [0, 2)");
    Rng rng(mix_seed(seed));
    std::uniform_real_distribution<double> first(c, 2.0);
    std::uniform_real_distribution<double> rest(-1.0, 1.0);
    LabeledData out;
    out.points.resize(static_cast<Eigen::Index>(2 * n_each), static_cast<Eigen::Index>(p));
    out.labels.resize(2 * n_each);
    for (std::size_t i = 0; i < 2 * n_each; ++i) {
        const bool left = i < n_each;
        const auto row = static_cast<Eigen::Index>(i);
        const double x0 = first(rng);
        out.points(row, 0) = left ? -x0 : x0;
        for (Eigen::Index j = 1; j < static_cast<Eigen::Index>(p); ++j) out.points(row, j) = rest(rng);
        out.labels[i] = left ? "1" : "2";
    }
    return out;
}

Matrix parabola(std::size_t k) {
    if (k < 2) throw InputError("parabola needs k >= 2");
    Matrix out(static_cast<Eigen::Index>(k), 2);
    for (std::size_t i = 0; i < k; ++i) {
        const double t = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(k - 1);
        out(static_cast<Eigen::Index>(i), 0) = t;
        out(static_cast<Eigen::Index>(i), 1) = t * t;
    }
    return out;
}

} // namespace mstlens::synthetic
