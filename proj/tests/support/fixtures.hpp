#pragma once

#include "mstlens/core.hpp"
#include "mstlens/csv.hpp"
#include "mstlens/random.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace fixture {

/// Three well-separated Gaussian blobs in 6-D with a 2-D embedding (first two coordinates
/// plus jitter) and a two-column metadata table.
struct SessionCsv {
    std::string data, embedding, labels, meta;
};

inline SessionCsv three_blobs(std::size_t per_class = 20, std::uint64_t seed = 3) {
    mstlens::Rng rng(seed);
    std::normal_distribution<double> normal;
    const double centers[3][2] = {{0, 0}, {8, 0}, {4, 7}};
    const char* names[3] = {"A", "B", "C"};
    std::ostringstream data, emb, lab, meta;
    data << "id,f1,f2,f3,f4,f5,f6\n";
    emb << "id,x,y\n";
    lab << "id,cluster\n";
    meta << "id,batch,age\n";
    for (std::size_t c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < per_class; ++i) {
            const std::string id = std::string("r") + std::to_string(c * per_class + i);
            const double x = centers[c][0] + normal(rng);
            const double y = centers[c][1] + normal(rng);
            data << id << "," << mstlens::csv::format_number(x) << "," << mstlens::csv::format_number(y);
            for (int f = 0; f < 4; ++f) data << "," << mstlens::csv::format_number(0.5 * normal(rng));
            data << "\n";
            emb << id << "," << mstlens::csv::format_number(x + 0.1 * normal(rng)) << ","
                << mstlens::csv::format_number(y + 0.1 * normal(rng)) << "\n";
            lab << id << "," << names[c] << "\n";
            meta << id << "," << (i % 2 ? "b1" : "b2") << "," << 20 + (i * 7 + c * 3) % 40 << "\n";
        }
    }
    return {data.str(), emb.str(), lab.str(), meta.str()};
}

inline mstlens::Matrix gaussian(std::size_t n, std::size_t p, std::uint64_t seed) {
    mstlens::Rng rng(seed);
    std::normal_distribution<double> normal;
    mstlens::Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = normal(rng);
    return x;
}

} // namespace fixture
