#include "doctest.h"

#include "fixtures.hpp"

#include "mstlens/mst_test.hpp"
#include "mstlens/synthetic.hpp"

#include <numeric>

using namespace mstlens;

TEST_CASE("group density: sigmas from the covariance eigenvalues") {
    const Matrix x = fixture::gaussian(50, 4, 3) * Eigen::Vector4d(5, 2, 1, 0.1).asDiagonal();
    std::vector<VertexId> all(50);
    std::iota(all.begin(), all.end(), 0);

    const Matrix centered = x.rowwise() - x.colwise().mean();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(centered.transpose() * centered / 49.0);
    const Vector ev = eig.eigenvalues().reverse();
    const double total = ev.sum();

    for (double thr : {0.5, 0.9, 0.99, 1.0}) {
        const GroupDensity d = estimate_group_density(x, all, thr);
        std::size_t expected = 0;
        double cum = 0.0;
        while (expected < 4 && cum < thr * total * (1 - 1e-12)) cum += ev(static_cast<Eigen::Index>(expected++));
        CHECK(d.sigmas.size() == expected);
        double log_d = std::log(50.0);
        for (std::size_t i = 0; i < d.sigmas.size(); ++i) {
            CHECK(d.sigmas[i] == doctest::Approx(std::sqrt(ev(static_cast<Eigen::Index>(i)))).epsilon(1e-10));
            log_d -= std::log(d.sigmas[i]);
        }
        CHECK(d.log_density == doctest::Approx(log_d));
        CHECK(d.density == doctest::Approx(std::exp(log_d)));
    }
}

TEST_CASE("group density errors") {
    Matrix x(3, 2);
    x << 1, 1, 1, 1, 1, 1;
    CHECK_THROWS_AS(estimate_group_density(x, {0}, 0.9), InputError);
    CHECK_THROWS_AS(estimate_group_density(x, {0, 1, 2}, 0.9), DegenerateError);
    CHECK_THROWS_AS(estimate_group_density(x, {0, 1}, 0.0), InputError);
}

TEST_CASE("left-tail p-value with add-one correction") {
    const std::vector<std::size_t> null{3, 5, 5, 7, 9};
    CHECK(left_tail_p_value(2, null) == doctest::Approx(1.0 / 6.0));
    CHECK(left_tail_p_value(5, null) == doctest::Approx(4.0 / 6.0));
    CHECK(left_tail_p_value(10, null) == 1.0);
}

TEST_CASE("box null: deterministic, replicate-indexed, and counts bounded by n - 1") {
    const auto a = simulate_box_null(40, {1.0, 2.0, 0.5}, 30, 77);
    const auto b = simulate_box_null(40, {1.0, 2.0, 0.5}, 30, 77);
    CHECK(a == b);
    const auto prefix = simulate_box_null(40, {1.0, 2.0, 0.5}, 10, 77);
    CHECK(std::equal(prefix.begin(), prefix.end(), a.begin()));
    for (auto c : a) {
        CHECK(c >= 1);
        CHECK(c <= 39);
    }
    // Axis order does not matter: the widest side is always the split axis.
    CHECK(simulate_box_null(40, {2.0, 0.5, 1.0}, 30, 77) == a);
    CHECK_THROWS_AS(simulate_box_null(40, {1.0}, 0, 1), InputError);
}

TEST_CASE("null uses the lesser-dense group") {
    GroupDensity sparse{10, {2.0}, 5.0, std::log(5.0)};
    GroupDensity dense{10, {0.5}, 20.0, std::log(20.0)};
    CHECK(simulate_null(sparse, dense, 5, 3) == simulate_box_null(10, {2.0}, 5, 3));
    CHECK(simulate_null(dense, sparse, 5, 3) == simulate_box_null(10, {2.0}, 5, 3));
}

TEST_CASE("mst test: separated boxes reject, overlapping boxes do not") {
    auto run = [](double c, std::uint64_t seed) {
        const auto d = synthetic::hyperrectangle_pair(50, 5, c, seed);
        const WeightedTree t = build_mst(d.points);
        std::vector<VertexId> g1(50), g2(50);
        std::iota(g1.begin(), g1.end(), 0);
        std::iota(g2.begin(), g2.end(), 50);
        return mst_test(d.points, t, GroupSelection{g1, g2, {}}, 99, 0.9, seed);
    };
    const TestResult far = run(1.0, 4);
    CHECK(far.observed <= 2);
    CHECK(far.p_value <= 0.05);
    CHECK(far.p_value == doctest::Approx(left_tail_p_value(far.observed, far.null_counts)));
    CHECK(far.null_counts.size() == 99);

    const TestResult near = run(0.0, 4);
    CHECK(near.p_value > 0.05);

    const TestResult again = run(1.0, 4);
    CHECK(again.null_counts == far.null_counts);
    CHECK(again.p_value == far.p_value);
}

TEST_CASE("mst test input validation") {
    const Matrix x = fixture::gaussian(10, 2, 1);
    const WeightedTree t = build_mst(x);
    CHECK_THROWS_AS(mst_test(x, t, GroupSelection{{0}, {1, 2}, {}}), InputError);
    CHECK_THROWS_AS(mst_test(x, t, GroupSelection{{0, 1}, {1, 2}, {}}), InputError);
}

TEST_CASE("hyperrectangle generator respects its boxes") {
    const auto d = synthetic::hyperrectangle_pair(30, 3, 0.4, 2);
    for (Eigen::Index i = 0; i < 60; ++i) {
        const double x0 = d.points(i, 0);
        if (i < 30) {
            CHECK(x0 <= -0.4);
            CHECK(x0 >= -2.0);
            CHECK(d.labels[static_cast<std::size_t>(i)] == "1");
        } else {
            CHECK(x0 >= 0.4);
            CHECK(x0 <= 2.0);
        }
        CHECK(std::abs(d.points(i, 1)) <= 1.0);
    }
}
